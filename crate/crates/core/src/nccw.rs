//! Endpoint-constrained step-function semigroups coming from
//! one-dimensional NCCW complexes (dimension-drop and folding interval
//! algebras). A profile `(r, l)` describes functions on `[0,1]` with
//! values in the lattice `(1/r^l)·N̄` whose endpoint values lie in
//! `(r/r^l)·N̄`. Internally everything is scaled by `r^l`, so a member is
//! an ordinary integer-valued step function whose values at 0 and 1 are
//! divisible by `r`.

use num_bigint::BigInt;

use crate::basis::{self, BasisLevel};
use crate::error::{CuError, Result};
use crate::extnat::{ExtNat, Fin};
use crate::rat::Rat;
use crate::space::Space;
use crate::step::StepFunction;
use crate::supernat::Supernatural;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NccwProfile {
    pub r: u64,
    pub l: u32,
}

impl NccwProfile {
    pub fn new(r: u64, l: u32) -> Result<NccwProfile> {
        if r == 0 || l == 0 {
            return Err(CuError::Invalid("profile needs r ≥ 1 and l ≥ 1".into()));
        }
        Ok(NccwProfile { r, l })
    }

    /// The value lattice denominator `r^l` used to display members as
    /// rationals.
    pub fn value_denominator(&self) -> BigInt {
        BigInt::from(self.r).pow(self.l)
    }

    /// Scale from the displayed lattice `(1/r^l)·N̄` into the internal
    /// integer representation.
    pub fn display_scale(&self) -> Rat {
        Rat::new(BigInt::from(1), self.value_denominator())
    }

    /// Membership of the integer-scaled representation: a step function on
    /// the closed interval whose endpoint values are divisible by r.
    pub fn contains(&self, f: &StepFunction) -> bool {
        if f.space() != &Space::ClosedInterval {
            return false;
        }
        let ok = |v: ExtNat| match v {
            ExtNat::Inf => true,
            Fin(k) => k % self.r == 0,
        };
        ok(f.vertex_value(0)) && ok(f.vertex_value(1))
    }
}

/// The cut-down of the restricted basis: the largest element of the
/// profile-constrained level monoid way below `f`. Computed as the ambient
/// cut-down followed by lowering each endpoint value to the largest
/// multiple of `r` below it; the result is checked against the profile and
/// a failure is surfaced as a stability violation.
pub fn cut_down(
    f: &StepFunction,
    profile: &NccwProfile,
    q: &Supernatural,
    n: usize,
) -> Result<StepFunction> {
    if !profile.contains(f) {
        return Err(CuError::Precondition(
            "input is not a member of the profile".into(),
        ));
    }
    if !f.is_bounded() {
        return Err(CuError::NotFinitePart("cut-down needs a bounded member".into()));
    }
    let ambient = basis::cut_down(f, q, n)?;
    let clamp = |v: ExtNat| match v {
        ExtNat::Inf => ExtNat::Inf,
        Fin(k) => Fin(k - k % profile.r),
    };
    let result = replace_endpoint_values(
        &ambient,
        clamp(ambient.vertex_value(0)),
        clamp(ambient.vertex_value(1)),
    )?;
    let level = BasisLevel::new(q, n, &Space::ClosedInterval)?;
    if !(profile.contains(&result)
        && (n == 0 || level.contains(&result))
        && result.way_below(f)?)
    {
        return Err(CuError::Stability(format!(
            "restricted cut-down left the profile on {f}"
        )));
    }
    Ok(result)
}

fn replace_endpoint_values(f: &StepFunction, v0: ExtNat, v1: ExtNat) -> Result<StepFunction> {
    let edges = vec![f.edge_profile(0).clone()];
    StepFunction::new(Space::ClosedInterval, edges, vec![v0, v1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::openset::OpenSet;
    use crate::rat::rat;
    use std::collections::BTreeSet;

    fn q2() -> Supernatural {
        Supernatural::pow_of(2)
    }

    fn arc(lo: Rat, hi: Rat) -> StepFunction {
        let set = OpenSet::new(
            Space::ClosedInterval,
            vec![vec![(lo, hi)]],
            BTreeSet::new(),
        )
        .unwrap();
        StepFunction::indicator(&set)
    }

    #[test]
    fn zero_and_constant_members() {
        let p = NccwProfile::new(2, 1).unwrap();
        let zero = StepFunction::zero(Space::ClosedInterval);
        assert_eq!(cut_down(&zero, &p, &q2(), 2).unwrap(), zero);

        // the compact constant r (= r/r^l in display scale) is fixed from
        // level 1 on
        let c = StepFunction::constant(Space::ClosedInterval, Fin(2));
        assert!(p.contains(&c));
        for n in 1..4 {
            assert_eq!(cut_down(&c, &p, &q2(), n).unwrap(), c);
        }
        assert!(cut_down(&c, &p, &q2(), 0).unwrap().is_zero());
    }

    #[test]
    fn interior_indicator_keeps_endpoints_zero() {
        let p = NccwProfile::new(2, 1).unwrap();
        let f = arc(rat(3, 10), rat(9, 10)).scale(2);
        assert!(p.contains(&f));
        let e = cut_down(&f, &p, &q2(), 2).unwrap();
        assert_eq!(e, arc(rat(1, 2), rat(3, 4)).scale(2));
        assert_eq!(e.vertex_value(0), Fin(0));
        assert_eq!(e.vertex_value(1), Fin(0));
    }

    #[test]
    fn mixed_levels_at_an_endpoint_get_clamped() {
        // f = 1_{[0,1]} + 1_{[0,w) ∪ (1-w,1]} with w inside the first
        // cell: the ambient cut-down has value 1 at both endpoints, which
        // the profile forbids; the restricted cut-down lowers them to 0.
        let p = NccwProfile::new(2, 1).unwrap();
        let whole = StepFunction::indicator(&OpenSet::whole(Space::ClosedInterval));
        let germs = StepFunction::new(
            Space::ClosedInterval,
            vec![crate::step::EdgeProfile {
                cuts: vec![rat(1, 8), rat(7, 8)],
                cells: vec![Fin(1), Fin(0), Fin(1)],
                points: vec![Fin(0), Fin(0)],
            }],
            vec![Fin(1), Fin(1)],
        )
        .unwrap();
        let f = whole.add(&germs).unwrap();
        assert!(p.contains(&f));
        let ambient = basis::cut_down(&f, &q2(), 2).unwrap();
        assert_eq!(ambient.vertex_value(0), Fin(1));
        let restricted = cut_down(&f, &p, &q2(), 2).unwrap();
        assert_eq!(restricted.vertex_value(0), Fin(0));
        assert!(p.contains(&restricted));
        assert!(restricted.way_below(&f).unwrap());
    }
}
