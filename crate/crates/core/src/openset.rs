//! Open subsets of the supported spaces, in canonical form: per edge a
//! sorted list of maximal disjoint open rational intervals, plus an
//! explicit set of included vertices. A vertex may be included only when
//! every incident edge germ is covered, so values of this type are open
//! by construction.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{CuError, Result};
use crate::rat::{mod1, rat_one, rat_zero, Rat};
use crate::space::{End, Point, Space};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpenSet {
    space: Space,
    edges: Vec<Vec<(Rat, Rat)>>,
    verts: BTreeSet<usize>,
}

impl OpenSet {
    pub fn empty(space: Space) -> OpenSet {
        let edges = vec![Vec::new(); space.edge_count()];
        OpenSet { space, edges, verts: BTreeSet::new() }
    }

    pub fn whole(space: Space) -> OpenSet {
        let edges = vec![vec![(rat_zero(), rat_one())]; space.edge_count()];
        let verts = (0..space.vertex_count()).collect();
        OpenSet { space, edges, verts }
    }

    /// Build from raw per-edge intervals and an included-vertex set,
    /// canonicalizing and checking openness.
    pub fn new(
        space: Space,
        edges: Vec<Vec<(Rat, Rat)>>,
        verts: BTreeSet<usize>,
    ) -> Result<OpenSet> {
        if edges.len() != space.edge_count() {
            return Err(CuError::DimensionMismatch(format!(
                "expected {} edge interval lists, got {}",
                space.edge_count(),
                edges.len()
            )));
        }
        let edges: Vec<Vec<(Rat, Rat)>> = edges.into_iter().map(canonical_intervals).collect();
        for list in &edges {
            for (lo, hi) in list {
                if lo < &rat_zero() || hi > &rat_one() || lo >= hi {
                    return Err(CuError::Invalid(format!(
                        "interval ({lo},{hi}) outside the unit edge"
                    )));
                }
            }
        }
        for &v in &verts {
            if v >= space.vertex_count() {
                return Err(CuError::Invalid(format!("vertex {v} not in space")));
            }
        }
        let set = OpenSet { space, edges, verts };
        for &v in &set.verts {
            if !set.vertex_germs_covered(v) {
                return Err(CuError::Invalid(format!(
                    "vertex {v} included without all incident edge germs"
                )));
            }
        }
        Ok(set)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn edge_intervals(&self, e: usize) -> &[(Rat, Rat)] {
        &self.edges[e]
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.verts
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty() && self.edges.iter().all(|l| l.is_empty())
    }

    fn vertex_germs_covered(&self, v: usize) -> bool {
        self.space.vertex_germs(v).into_iter().all(|(e, at_start)| {
            if at_start {
                self.edges[e].first().is_some_and(|(lo, _)| lo.is_zero())
            } else {
                self.edges[e].last().is_some_and(|(_, hi)| hi.is_one())
            }
        })
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => self.verts.contains(v),
            Point::Edge(e, t) => self.edges[*e].iter().any(|(lo, hi)| lo < t && t < hi),
        }
    }

    /// Pointwise containment of open sets.
    pub fn subset_of(&self, other: &OpenSet) -> Result<bool> {
        self.check_space(other)?;
        if !self.verts.is_subset(&other.verts) {
            return Ok(false);
        }
        for e in 0..self.edges.len() {
            for (lo, hi) in &self.edges[e] {
                let covered = other.edges[e]
                    .iter()
                    .any(|(lo2, hi2)| lo2 <= lo && hi <= hi2);
                if !covered {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn union(&self, other: &OpenSet) -> Result<OpenSet> {
        self.check_space(other)?;
        let edges = self
            .edges
            .iter()
            .zip(&other.edges)
            .map(|(a, b)| {
                let mut all = a.clone();
                all.extend(b.iter().cloned());
                canonical_intervals(all)
            })
            .collect();
        let verts = self.verts.union(&other.verts).cloned().collect();
        Ok(OpenSet { space: self.space.clone(), edges, verts })
    }

    pub fn intersect(&self, other: &OpenSet) -> Result<OpenSet> {
        self.check_space(other)?;
        let edges = self
            .edges
            .iter()
            .zip(&other.edges)
            .map(|(a, b)| {
                let mut out = Vec::new();
                for (lo1, hi1) in a {
                    for (lo2, hi2) in b {
                        let lo = lo1.max(lo2);
                        let hi = hi1.min(hi2);
                        if lo < hi {
                            out.push((lo.clone(), hi.clone()));
                        }
                    }
                }
                canonical_intervals(out)
            })
            .collect();
        let verts = self.verts.intersection(&other.verts).cloned().collect();
        Ok(OpenSet { space: self.space.clone(), edges, verts })
    }

    /// Whether the closure of the open edge interval (lo,hi) is contained
    /// in this set. Closure is taken in the carrier, so it includes vertex
    /// or phantom endpoints when the interval touches an edge end; a
    /// phantom endpoint is never contained.
    pub fn contains_closed_edge_interval(&self, e: usize, lo: &Rat, hi: &Rat) -> bool {
        let covering = self.edges[e].iter().find(|(lo2, hi2)| {
            let left_ok = if lo.is_zero() { lo2.is_zero() } else { lo2 < lo };
            let right_ok = if hi.is_one() { hi2.is_one() } else { hi < hi2 };
            left_ok && right_ok
        });
        if covering.is_none() {
            return false;
        }
        let (start, end) = self.space.edge_ends(e);
        if lo.is_zero() && !self.contains_end(start) {
            return false;
        }
        if hi.is_one() && !self.contains_end(end) {
            return false;
        }
        true
    }

    fn contains_end(&self, end: End) -> bool {
        match end {
            End::Vertex(v) => self.verts.contains(&v),
            End::Phantom => false,
        }
    }

    /// Compact containment of open sets: the closure of `self` (in the
    /// compact carrier) is contained in `other`.
    pub fn way_below(&self, other: &OpenSet) -> Result<bool> {
        self.check_space(other)?;
        for &v in &self.verts {
            if !other.verts.contains(&v) {
                return Ok(false);
            }
        }
        for e in 0..self.edges.len() {
            for (lo, hi) in &self.edges[e] {
                if !other.contains_closed_edge_interval(e, lo, hi) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The open `r`-neighborhood: union of open metric balls of radius `r`
    /// around the points of the set. Arc-length metric on the circle,
    /// euclidean on the closed interval.
    pub fn r_neighborhood(&self, r: &Rat) -> Result<OpenSet> {
        if r <= &rat_zero() {
            return Err(CuError::Invalid("neighborhood radius must be positive".into()));
        }
        match self.space {
            Space::ClosedInterval => {
                if self.is_empty() {
                    return Ok(self.clone());
                }
                let mut dilated: Vec<(Rat, Rat)> = Vec::new();
                for (lo, hi) in &self.edges[0] {
                    dilated.push((lo - r, hi + r));
                }
                if self.verts.contains(&0) {
                    dilated.push((-r.clone(), r.clone()));
                }
                if self.verts.contains(&1) {
                    dilated.push((rat_one() - r, rat_one() + r));
                }
                let mut verts = BTreeSet::new();
                let mut clipped = Vec::new();
                for (lo, hi) in canonical_intervals(dilated) {
                    if lo < rat_zero() {
                        verts.insert(0);
                    }
                    if hi > rat_one() {
                        verts.insert(1);
                    }
                    let lo = lo.max(rat_zero());
                    let hi = hi.min(rat_one());
                    if lo < hi {
                        clipped.push((lo, hi));
                    }
                }
                OpenSet::new(Space::ClosedInterval, vec![clipped], verts)
            }
            Space::Circle => {
                if self.is_empty() {
                    return Ok(self.clone());
                }
                let mut dilated: Vec<(Rat, Rat)> = Vec::new();
                for (lo, hi) in &self.edges[0] {
                    dilated.push((lo - r, hi + r));
                }
                if self.verts.contains(&0) {
                    dilated.push((-r.clone(), r.clone()));
                }
                // Total length check: any arc of length ≥ 1 covers the circle.
                let one = rat_one();
                if dilated.iter().any(|(lo, hi)| hi - lo >= one) {
                    return Ok(OpenSet::whole(Space::Circle));
                }
                // Split wrapped arcs at the vertex coordinate 0.
                let mut segs: Vec<(Rat, Rat)> = Vec::new();
                let mut verts = BTreeSet::new();
                for (lo, hi) in dilated {
                    let lo_m = mod1(&lo);
                    let len = &hi - &lo;
                    let hi_m = &lo_m + &len;
                    if hi_m <= one {
                        segs.push((lo_m, hi_m));
                    } else {
                        // the arc crosses the vertex coordinate
                        verts.insert(0);
                        segs.push((lo_m, one.clone()));
                        segs.push((rat_zero(), hi_m - &one));
                    }
                }
                let merged = canonical_intervals(segs);
                let candidate = OpenSet {
                    space: Space::Circle,
                    edges: vec![merged],
                    verts,
                };
                debug_assert!(
                    !candidate.verts.contains(&0) || candidate.vertex_germs_covered(0)
                );
                if candidate.edges[0].len() == 1
                    && candidate.edges[0][0] == (rat_zero(), rat_one())
                    && candidate.verts.contains(&0)
                {
                    return Ok(OpenSet::whole(Space::Circle));
                }
                Ok(candidate)
            }
            _ => Err(CuError::UnsupportedSpace(format!(
                "r-neighborhood on {}",
                self.space
            ))),
        }
    }

    fn check_space(&self, other: &OpenSet) -> Result<()> {
        if self.space != other.space {
            return Err(CuError::SpaceMismatch);
        }
        Ok(())
    }
}

fn canonical_intervals(mut list: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
    list.retain(|(lo, hi)| lo < hi);
    list.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut out: Vec<(Rat, Rat)> = Vec::new();
    for (lo, hi) in list {
        if let Some(last) = out.last_mut() {
            // merge only on strict overlap; a shared endpoint stays a gap
            if lo < last.1 {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

/// Compact containment of open sets as a standalone operation.
pub fn open_way_below(u: &OpenSet, v: &OpenSet) -> Result<bool> {
    u.way_below(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn interval_set(space: Space, ivs: &[(i64, i64, i64)]) -> OpenSet {
        // triples (num_lo, num_hi, den)
        let list = ivs
            .iter()
            .map(|&(a, b, d)| (rat(a, d), rat(b, d)))
            .collect();
        OpenSet::new(space, vec![list], BTreeSet::new()).unwrap()
    }

    #[test]
    fn closure_containment_on_closed_interval() {
        let u = interval_set(Space::ClosedInterval, &[(25, 50, 100)]);
        let v = interval_set(Space::ClosedInterval, &[(20, 60, 100)]);
        assert!(u.way_below(&v).unwrap());
        assert!(!v.way_below(&u).unwrap());
        let e = OpenSet::empty(Space::ClosedInterval);
        assert!(e.way_below(&e).unwrap());
    }

    #[test]
    fn whole_space_compactness_depends_on_kind() {
        for space in [Space::Circle, Space::ClosedInterval] {
            let w = OpenSet::whole(space);
            assert!(w.way_below(&w).unwrap());
        }
        let w = OpenSet::whole(Space::OpenInterval);
        assert!(!w.way_below(&w).unwrap());
        // Witness sequence for the open interval: (1/k, 1-1/k) increases to
        // the whole space but no term contains it.
        for k in 2..6 {
            let term = interval_set(Space::OpenInterval, &[(1, k - 1, k)]);
            assert!(term.way_below(&w).unwrap());
            assert!(!w.subset_of(&term).unwrap());
        }
    }

    #[test]
    fn vertex_openness_enforced() {
        let bad = OpenSet::new(
            Space::ClosedInterval,
            vec![vec![(rat(1, 4), rat(1, 2))]],
            [0].into_iter().collect(),
        );
        assert!(bad.is_err());
        let good = OpenSet::new(
            Space::ClosedInterval,
            vec![vec![(rat(0, 1), rat(1, 2))]],
            [0].into_iter().collect(),
        );
        assert!(good.is_ok());
    }

    #[test]
    fn circle_dilation() {
        let a = interval_set(Space::Circle, &[(40, 50, 100)]);
        let d = a.r_neighborhood(&rat(1, 4)).unwrap();
        assert_eq!(d.edge_intervals(0), &[(rat(15, 100), rat(75, 100))]);
        assert!(d.vertices().is_empty());

        // wrapped arc (0.9,1) ∪ {0} ∪ (0,0.1), dilated by 0.2 → (0.7, 0.3)
        let wrapped = OpenSet::new(
            Space::Circle,
            vec![vec![(rat(9, 10), rat(1, 1)), (rat(0, 1), rat(1, 10))]],
            [0].into_iter().collect(),
        )
        .unwrap();
        let d = wrapped.r_neighborhood(&rat(2, 10)).unwrap();
        assert_eq!(
            d.edge_intervals(0),
            &[(rat(0, 1), rat(3, 10)), (rat(7, 10), rat(1, 1))]
        );
        assert!(d.vertices().contains(&0));

        // grid membership oracle for the wrapped dilation
        for k in 0..40 {
            let t = rat(k, 40);
            let p = Space::Circle.point_at(&t).unwrap();
            let inside = crate::rat::circle_dist(&t, &rat(9, 10)) < rat(2, 10)
                || crate::rat::circle_dist(&t, &rat(1, 10)) < rat(2, 10)
                || (t >= rat(9, 10) || t <= rat(1, 10));
            assert_eq!(d.contains_point(&p), inside, "at {t}");
        }

        let e = OpenSet::empty(Space::Circle);
        assert!(e.r_neighborhood(&rat(1, 4)).unwrap().is_empty());
    }

    #[test]
    fn dilation_covers_circle() {
        let a = interval_set(Space::Circle, &[(0, 60, 100)]);
        let d = a.r_neighborhood(&rat(30, 100)).unwrap();
        assert_eq!(d, OpenSet::whole(Space::Circle));
    }
}
