//! Exact computations in concrete Cuntz semigroups.
//!
//! The crate implements the concrete semigroups `Lsc(X, N̄)` for the
//! interval, the circle and finite graphs, together with extended-natural
//! vectors and UHF-type semigroups; uniform bases with their cut-down
//! operators; semimetrics on spaces of morphisms; verification of
//! approximate intertwinings of inductive systems; and matching-based
//! classification of unitary spectra.
//!
//! All coordinates and values are exact: rationals for positions, extended
//! naturals for values. Every public operation is a pure function over
//! immutable data and is safe to call concurrently.

pub mod basis;
pub mod classify;
pub mod error;
pub mod extnat;
pub mod intertwine;
pub mod json;
pub mod morphism;
pub mod nccw;
pub mod openset;
pub mod rat;
pub mod sampling;
pub mod space;
pub mod step;
pub mod supernat;
pub mod testkit;
pub mod uhf;

pub use error::{CuError, Result};
pub use extnat::{bounded_sup, ExtNat, ExtNatVec, Exactness, NatMatrix};
pub use openset::{open_way_below, OpenSet};
pub use rat::Rat;
pub use space::{GraphShape, Point, Space};
pub use step::{ChainDecomposition, StepFunction};
pub use supernat::Supernatural;
