//! The UHF-type semigroup attached to a supernatural number q: compact
//! elements are nonnegative rationals supported on the `1/q_n` lattices,
//! soft elements are positive reals (here: rationals) or infinity, and the
//! two parts interact through the mixed order below. Level n of the
//! uniform basis is the compact lattice `(1/q_n)·N` with the cut-down
//! sending `s` to the largest lattice element way below it.
//!
//! Mixed order table (the unique completion consistent with
//! `x_s ≤ x_c ≪ x_c ≤ x_s + ε` and the Cu axioms; kept in one place so it
//! can be amended):
//!
//! | relation   | compact b        | soft b          |
//! |------------|------------------|-----------------|
//! | a_c ≤ b    | a ≤ b            | a < b           |
//! | a_s ≤ b    | a ≤ b            | a ≤ b           |
//! | a_c ≪ b    | a ≤ b            | a < b           |
//! | a_s ≪ b    | a < b            | a < b           |
//!
//! Mixed sums soften: `x_c + y_s = (x+y)_s`; infinity is soft and
//! absorbing.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{CuError, Result};
use crate::rat::{fmt_rat, Rat};
use crate::supernat::Supernatural;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum UhfElement {
    Compact(Rat),
    Soft(Rat),
    SoftInf,
}

use UhfElement::{Compact, Soft, SoftInf};

impl UhfElement {
    pub fn compact(v: Rat) -> Result<UhfElement> {
        if v.is_negative() {
            return Err(CuError::Invalid("compact values are nonnegative".into()));
        }
        Ok(Compact(v))
    }

    pub fn soft(v: Rat) -> Result<UhfElement> {
        if !v.is_positive() {
            return Err(CuError::Invalid("soft values are positive".into()));
        }
        Ok(Soft(v))
    }

    pub fn zero() -> UhfElement {
        Compact(Rat::zero())
    }

    pub fn leq(&self, other: &UhfElement) -> bool {
        match (self, other) {
            (Compact(a), Compact(b)) => a <= b,
            (Compact(a), Soft(b)) => a < b,
            (Soft(a), Compact(b)) => a <= b,
            (Soft(a), Soft(b)) => a <= b,
            (_, SoftInf) => true,
            (SoftInf, _) => false,
        }
    }

    pub fn way_below(&self, other: &UhfElement) -> bool {
        if matches!(self, Compact(a) if a.is_zero()) {
            return true;
        }
        match (self, other) {
            (Compact(a), Compact(b)) => a <= b,
            (Compact(a), Soft(b)) => a < b,
            (Soft(a), Compact(b)) => a < b,
            (Soft(a), Soft(b)) => a < b,
            (_, SoftInf) => !matches!(self, SoftInf),
            (SoftInf, _) => false,
        }
    }

    pub fn add(&self, other: &UhfElement) -> UhfElement {
        match (self, other) {
            (SoftInf, _) | (_, SoftInf) => SoftInf,
            (Compact(a), Compact(b)) => Compact(a + b),
            (Compact(a), Soft(b)) | (Soft(a), Compact(b)) | (Soft(a), Soft(b)) => Soft(a + b),
        }
    }

    pub fn scale(&self, k: u64) -> UhfElement {
        if k == 0 {
            return UhfElement::zero();
        }
        let k = Rat::from_integer(BigInt::from(k));
        match self {
            Compact(a) => Compact(a * &k),
            Soft(a) => Soft(a * &k),
            SoftInf => SoftInf,
        }
    }
}

impl fmt::Display for UhfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Compact(a) => write!(f, "{}c", fmt_rat(a)),
            Soft(a) => write!(f, "{}s", fmt_rat(a)),
            SoftInf => write!(f, "oo"),
        }
    }
}

/// `ε_n(s)`: the largest element of the lattice `(1/q_n)·N` way below `s`.
/// Fails for soft infinity, where the candidate set has no maximum.
pub fn cut_down(s: &UhfElement, q: &Supernatural, n: usize) -> Result<UhfElement> {
    let qn = q.partial(n);
    match s {
        SoftInf => Err(CuError::NoMaximum(
            "soft infinity dominates the whole lattice".into(),
        )),
        Compact(a) => {
            // largest k/q_n ≤ a
            let k = (a * &qn).floor();
            Ok(Compact(k / Rat::from_integer(qn)))
        }
        Soft(a) => {
            // largest k/q_n strictly below a
            let scaled = a * &qn;
            let k = if scaled.is_integer() {
                scaled.numer() - BigInt::from(1)
            } else {
                scaled.floor().numer().clone()
            };
            let k = if k.is_negative() { BigInt::zero() } else { k };
            Ok(Compact(Rat::new(k, qn)))
        }
    }
}

/// Membership in the level-n lattice.
pub fn in_level(s: &UhfElement, q: &Supernatural, n: usize) -> bool {
    match s {
        Compact(a) => (a * q.partial(n)).is_integer(),
        _ => false,
    }
}

/// Suprema of increasing sequences, horizon-truncated: stabilized compact
/// chains keep their value; strictly climbing chains are reported by their
/// last term as a lower bound.
pub fn bounded_sup(
    mut seq: impl FnMut(usize) -> UhfElement,
    horizon: usize,
) -> Result<(UhfElement, crate::extnat::Exactness)> {
    use crate::extnat::Exactness;
    if horizon == 0 {
        return Err(CuError::Invalid("horizon must be positive".into()));
    }
    let mut last = seq(0);
    let mut stable_since = 0;
    for k in 1..horizon {
        let next = seq(k);
        if !last.leq(&next) {
            return Err(CuError::NotIncreasing(k));
        }
        if next != last {
            stable_since = k;
        }
        last = next;
    }
    let exact = if stable_since < horizon.saturating_sub(1) {
        Exactness::Exact
    } else {
        Exactness::LowerBound
    };
    Ok((last, exact))
}
