//! Morphisms out of step-function semigroups and the two distances on
//! them: the discrete semimetric induced by a uniform basis (finest level
//! on which two morphisms still compare crosswise) and the metric given by
//! r-open neighborhoods, which for spectral morphisms is the bottleneck
//! matching distance between the spectra.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::basis::enumerate_level_indicators;
use crate::classify;
use crate::error::{CuError, Result};
use crate::extnat::{ExtNat, Fin};
use crate::openset::OpenSet;
use crate::rat::{circle_dist, line_dist, mod1, Rat};
use crate::space::Space;
use crate::step::StepFunction;
use crate::supernat::Supernatural;

fn to_usize(k: &BigInt) -> usize {
    let (_, digits) = k.to_u64_digits();
    digits.first().copied().unwrap_or(0) as usize
}

/// A finite multiset of exact points of the circle or the closed interval,
/// acting on step functions by counting with multiplicity. The evaluation
/// is additive, order-preserving, sup-preserving and way-below-preserving.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectralMorphism {
    space: Space,
    points: Vec<(Rat, usize)>,
}

impl SpectralMorphism {
    pub fn new(space: Space, raw: Vec<(Rat, usize)>) -> Result<SpectralMorphism> {
        match space {
            Space::Circle | Space::ClosedInterval => {}
            _ => {
                return Err(CuError::UnsupportedSpace(
                    "spectral morphisms live on the circle or the closed interval".into(),
                ))
            }
        }
        let mut points: Vec<(Rat, usize)> = Vec::new();
        for (coord, mult) in raw {
            if mult == 0 {
                continue;
            }
            let coord = match space {
                Space::Circle => mod1(&coord),
                _ => {
                    if coord < Rat::zero() || coord > Rat::from_integer(BigInt::from(1)) {
                        return Err(CuError::Invalid(format!(
                            "coordinate {coord} outside [0,1]"
                        )));
                    }
                    coord
                }
            };
            points.push((coord, mult));
        }
        points.sort_by(|a, b| a.0.cmp(&b.0));
        points.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 += later.1;
                true
            } else {
                false
            }
        });
        Ok(SpectralMorphism { space, points })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn points(&self) -> &[(Rat, usize)] {
        &self.points
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|(_, m)| m).sum()
    }

    pub fn expand(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.total_multiplicity());
        for (c, m) in &self.points {
            for _ in 0..*m {
                out.push(c.clone());
            }
        }
        out
    }

    pub fn eval(&self, f: &StepFunction) -> Result<ExtNat> {
        if f.space() != &self.space {
            return Err(CuError::SpaceMismatch);
        }
        let mut acc = Fin(0);
        for (coord, mult) in &self.points {
            let p = self.space.point_at(coord)?;
            acc = acc + f.eval(&p).scale(*mult as u64);
        }
        Ok(acc)
    }

    pub fn dist(&self, a: &Rat, b: &Rat) -> Rat {
        match self.space {
            Space::Circle => circle_dist(a, b),
            _ => line_dist(a, b),
        }
    }
}

/// An evaluation procedure together with the order data of its target.
/// The evaluation is not trusted: `self_check` verifies additivity and
/// monotonicity on supplied sample pairs.
#[derive(Clone)]
pub struct MorphismHandle {
    eval: Arc<dyn Fn(&StepFunction) -> Result<ExtNat> + Send + Sync>,
}

impl MorphismHandle {
    pub fn spectral(m: &SpectralMorphism) -> MorphismHandle {
        let m = m.clone();
        MorphismHandle {
            eval: Arc::new(move |f| m.eval(f)),
        }
    }

    pub fn from_fn(
        f: impl Fn(&StepFunction) -> Result<ExtNat> + Send + Sync + 'static,
    ) -> MorphismHandle {
        MorphismHandle { eval: Arc::new(f) }
    }

    pub fn eval(&self, f: &StepFunction) -> Result<ExtNat> {
        (self.eval)(f)
    }

    /// Verify additivity and monotonicity of the evaluation on every pair
    /// from `samples`.
    pub fn self_check(&self, samples: &[StepFunction]) -> Result<()> {
        for f in samples {
            for g in samples {
                let vf = self.eval(f)?;
                let vg = self.eval(g)?;
                let vsum = self.eval(&f.add(g)?)?;
                if vsum != vf + vg {
                    return Err(CuError::NotMonotone(format!(
                        "not additive: α(f)+α(g) = {} but α(f+g) = {vsum}",
                        vf + vg
                    )));
                }
                if f.leq(g)? && vf > vg {
                    return Err(CuError::NotMonotone(format!(
                        "not monotone: f ≤ g but {vf} > {vg}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Result of comparing two morphisms crosswise on a level.
#[derive(Clone, Debug)]
pub enum Comparison {
    /// `α(g') ≪ β(g)` and `β(g') ≪ α(g)` for every pair `g' ≪ g`.
    Strict,
    /// The non-strict inequalities hold throughout.
    Plain,
    /// Neither; carries a failing pair.
    None {
        witness: Box<(StepFunction, StepFunction)>,
        detail: String,
    },
}

impl Comparison {
    pub fn holds(&self) -> bool {
        !matches!(self, Comparison::None { .. })
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Comparison::Strict)
    }
}

/// Compare two morphisms on an explicit finite level: iterate over all
/// ordered pairs `g' ≪ g` from the list and test the crosswise
/// inequalities.
pub fn compare_on(
    a: &MorphismHandle,
    b: &MorphismHandle,
    level: &[StepFunction],
) -> Result<Comparison> {
    let mut strict = true;
    for g1 in level {
        for g2 in level {
            if !g1.way_below(g2)? {
                continue;
            }
            let a1 = a.eval(g1)?;
            let a2 = a.eval(g2)?;
            let b1 = b.eval(g1)?;
            let b2 = b.eval(g2)?;
            if !(a1 <= b2 && b1 <= a2) {
                return Ok(Comparison::None {
                    witness: Box::new((g1.clone(), g2.clone())),
                    detail: format!(
                        "α(g')={a1} β(g)={b2} / β(g')={b1} α(g)={a2} on g'={g1}, g={g2}"
                    ),
                });
            }
            if !(a1.way_below(b2) && b1.way_below(a2)) {
                strict = false;
            }
        }
    }
    Ok(if strict {
        Comparison::Strict
    } else {
        Comparison::Plain
    })
}

/// Comparison of two spectral morphisms on the level-n indicators, without
/// enumerating the level. Counting morphisms are additive over connected
/// components, so the crosswise conditions over all way-below pairs reduce
/// to checks over connected level-n opens `U`: count one spectrum in the
/// largest level-n open whose closure lies in `U`, against the other
/// spectrum in `U`. Spectral evaluations are finite, so plain and strict
/// comparison coincide here.
pub fn compare_spectral_level(
    x: &SpectralMorphism,
    y: &SpectralMorphism,
    q: &Supernatural,
    n: usize,
) -> Result<Comparison> {
    if x.space() != y.space() {
        return Err(CuError::SpaceMismatch);
    }
    if n == 0 {
        return Ok(Comparison::Strict);
    }
    let qn = q.partial_usize(n)?;
    let denom = q.partial(n);
    let circle = x.space() == &Space::Circle;
    // slot 2k = partition point k, slot 2k+1 = open cell (k, k+1)
    let slot_of = |coord: &Rat| -> usize {
        let scaled = coord * &denom;
        if scaled.is_integer() {
            let k = to_usize(&scaled.to_integer());
            if circle {
                2 * (k % qn)
            } else {
                2 * k
            }
        } else {
            2 * to_usize(&scaled.floor().to_integer()) + 1
        }
    };
    let count_slots = |m: &SpectralMorphism| -> Vec<u64> {
        let mut c = vec![0u64; 2 * qn + 1];
        for (coord, mult) in m.points() {
            c[slot_of(coord)] += *mult as u64;
        }
        c
    };
    let cx = count_slots(x);
    let cy = count_slots(y);
    let total_x: u64 = cx.iter().sum();
    let total_y: u64 = cy.iter().sum();

    if circle {
        if total_x != total_y {
            return Ok(Comparison::None {
                witness: Box::new(whole_pair(x.space())),
                detail: format!("count on the whole circle: {total_x} vs {total_y}"),
            });
        }
        let slots = 2 * qn;
        let pref = |c: &[u64]| -> Vec<u64> {
            let mut p = vec![0u64; 2 * slots + 1];
            for i in 0..2 * slots {
                p[i + 1] = p[i] + c[i % slots];
            }
            p
        };
        let px = pref(&cx);
        let py = pref(&cy);
        // arc from grid point a spanning len cells covers slots
        // 2a+1 ..= 2a+2len-1
        let arc_count = |p: &[u64], a: usize, len: usize| -> u64 { p[2 * a + 2 * len] - p[2 * a + 1] };
        for a in 0..qn {
            for len in 3..=qn {
                let checks = [
                    (arc_count(&px, a + 1, len - 2), arc_count(&py, a, len)),
                    (arc_count(&py, a + 1, len - 2), arc_count(&px, a, len)),
                ];
                if checks.iter().any(|(inner, outer)| inner > outer) {
                    let (g1, g2) = circle_arc_pair(a, len, qn)?;
                    return Ok(Comparison::None {
                        witness: Box::new((g1, g2)),
                        detail: format!(
                            "arc at {a}/{qn} spanning {len} cells: eroded counts {} , {} vs {} , {}",
                            checks[0].0, checks[1].0, checks[0].1, checks[1].1
                        ),
                    });
                }
            }
        }
        Ok(Comparison::Strict)
    } else {
        if total_x != total_y {
            return Ok(Comparison::None {
                witness: Box::new(whole_pair(x.space())),
                detail: format!("count on the whole interval: {total_x} vs {total_y}"),
            });
        }
        let mut px = vec![0u64; 2 * qn + 2];
        let mut py = vec![0u64; 2 * qn + 2];
        for i in 0..=2 * qn {
            px[i + 1] = px[i] + cx[i];
            py[i + 1] = py[i] + cy[i];
        }
        // span (a, b) with optional vertex inclusion at a touching end
        let span_count = |p: &[u64], a: usize, b: usize, il: bool, ir: bool| -> u64 {
            let lo_slot = if il { 2 * a } else { 2 * a + 1 };
            let hi_slot = if ir { 2 * b } else { 2 * b - 1 };
            p[hi_slot + 1] - p[lo_slot]
        };
        for a in 0..qn {
            for b in (a + 1)..=qn {
                for il in [false, true] {
                    if il && a != 0 {
                        continue;
                    }
                    for ir in [false, true] {
                        if ir && b != qn {
                            continue;
                        }
                        let ea = if il { a } else { a + 1 };
                        let eb = if ir { b } else { b - 1 };
                        if ea >= eb {
                            continue;
                        }
                        let checks = [
                            (span_count(&px, ea, eb, il, ir), span_count(&py, a, b, il, ir)),
                            (span_count(&py, ea, eb, il, ir), span_count(&px, a, b, il, ir)),
                        ];
                        if checks.iter().any(|(inner, outer)| inner > outer) {
                            let (g1, g2) = interval_span_pair(a, b, il, ir, qn)?;
                            return Ok(Comparison::None {
                                witness: Box::new((g1, g2)),
                                detail: format!(
                                    "span ({a},{b}) il={il} ir={ir}: eroded counts exceed"
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(Comparison::Strict)
    }
}

fn whole_pair(space: &Space) -> (StepFunction, StepFunction) {
    let w = StepFunction::indicator(&OpenSet::whole(space.clone()));
    (w.clone(), w)
}

fn circle_arc(start: usize, cells: usize, qn: usize) -> Result<OpenSet> {
    let frac = |k: usize| Rat::new(BigInt::from(k as u64), BigInt::from(qn as u64));
    if cells == 0 {
        return Ok(OpenSet::empty(Space::Circle));
    }
    let from = start % qn;
    let to = (from + cells) % qn;
    if from < to {
        OpenSet::new(
            Space::Circle,
            vec![vec![(frac(from), frac(to))]],
            BTreeSet::new(),
        )
    } else {
        let mut ivs = vec![(frac(from), Rat::from_integer(BigInt::from(1)))];
        let mut verts = BTreeSet::new();
        if to != 0 {
            ivs.push((Rat::zero(), frac(to)));
            verts.insert(0);
        }
        OpenSet::new(Space::Circle, vec![ivs], verts)
    }
}

fn circle_arc_pair(a: usize, len: usize, qn: usize) -> Result<(StepFunction, StepFunction)> {
    let inner = circle_arc(a + 1, len - 2, qn)?;
    let outer = circle_arc(a, len, qn)?;
    Ok((
        StepFunction::indicator(&inner),
        StepFunction::indicator(&outer),
    ))
}

fn interval_span_pair(
    a: usize,
    b: usize,
    il: bool,
    ir: bool,
    qn: usize,
) -> Result<(StepFunction, StepFunction)> {
    let frac = |k: usize| Rat::new(BigInt::from(k as u64), BigInt::from(qn as u64));
    let mk = |a: usize, b: usize, il: bool, ir: bool| -> Result<OpenSet> {
        let mut verts = BTreeSet::new();
        if il {
            verts.insert(0);
        }
        if ir {
            verts.insert(1);
        }
        let ivs = if a < b { vec![(frac(a), frac(b))] } else { Vec::new() };
        OpenSet::new(Space::ClosedInterval, vec![ivs], verts)
    };
    let ea = if il { a } else { a + 1 };
    let eb = if ir { b } else { b - 1 };
    let inner = if ea < eb {
        mk(ea, eb, il, ir)?
    } else {
        OpenSet::empty(Space::ClosedInterval)
    };
    Ok((
        StepFunction::indicator(&inner),
        StepFunction::indicator(&mk(a, b, il, ir)?),
    ))
}

/// Outcome of the discrete semimetric.
#[derive(Clone, Debug, PartialEq)]
pub enum DdOutcome {
    /// Comparison held through `level` and failed at `level + 1`.
    Value { level: usize, value: Rat },
    /// Comparison still held at the horizon; zero up to the tested depth.
    IndistinguishableToHorizon,
    /// Comparison already fails at level 1.
    Infinite,
}

/// The discrete semimetric associated to the size-q basis: the largest
/// tested level on which the two spectral morphisms still compare, scored
/// as `1/q_n`. The holds-set is downward closed since the levels nest.
pub fn dd_distance(
    x: &SpectralMorphism,
    y: &SpectralMorphism,
    q: &Supernatural,
    n_max: usize,
) -> Result<DdOutcome> {
    for n in 1..=n_max {
        if !compare_spectral_level(x, y, q, n)?.holds() {
            return Ok(if n == 1 {
                DdOutcome::Infinite
            } else {
                DdOutcome::Value {
                    level: n - 1,
                    value: q.scale(n - 1),
                }
            });
        }
    }
    Ok(DdOutcome::IndistinguishableToHorizon)
}

/// Discrete semimetric over explicit morphism handles, enumerating each
/// indicator level. Only usable while the levels stay enumerable.
pub fn dd_distance_generic(
    a: &MorphismHandle,
    b: &MorphismHandle,
    q: &Supernatural,
    space: &Space,
    n_max: usize,
    level_cap: usize,
) -> Result<DdOutcome> {
    for n in 1..=n_max {
        let level = enumerate_level_indicators(q, n, space, level_cap)?;
        if !compare_on(a, b, &level)?.holds() {
            return Ok(if n == 1 {
                DdOutcome::Infinite
            } else {
                DdOutcome::Value {
                    level: n - 1,
                    value: q.scale(n - 1),
                }
            });
        }
    }
    Ok(DdOutcome::IndistinguishableToHorizon)
}

#[derive(Clone, Debug, PartialEq)]
pub enum DcuOutcome {
    Value(Rat),
    /// Different total multiplicities: no finite radius works.
    Infinite,
}

/// The neighborhood metric for spectral morphisms: the bottleneck matching
/// value, the least maximal displacement over bijections of the spectra.
/// Computed by a feasibility search over the sorted pairwise distances
/// with a perfect-matching check at each candidate. The defining infimum
/// over radii is attained at this value.
pub fn dcu_distance(x: &SpectralMorphism, y: &SpectralMorphism) -> Result<DcuOutcome> {
    if x.space() != y.space() {
        return Err(CuError::SpaceMismatch);
    }
    if x.total_multiplicity() != y.total_multiplicity() {
        return Ok(DcuOutcome::Infinite);
    }
    let xs = x.expand();
    let ys = y.expand();
    if xs.is_empty() {
        return Ok(DcuOutcome::Value(Rat::zero()));
    }
    let mut dists: Vec<Vec<Rat>> = Vec::with_capacity(xs.len());
    let mut candidates: Vec<Rat> = Vec::new();
    for a in &xs {
        let mut row = Vec::with_capacity(ys.len());
        for b in &ys {
            let d = x.dist(a, b);
            candidates.push(d.clone());
            row.push(d);
        }
        dists.push(row);
    }
    candidates.sort();
    candidates.dedup();
    let feasible = |threshold: &Rat| -> bool {
        let adj = dists
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, d)| *d <= threshold)
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let g = classify::BipartiteGraph::new(xs.len(), ys.len(), adj);
        classify::max_matching(&g).len() == xs.len()
    };
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    if !feasible(&candidates[hi]) {
        return Err(CuError::TheoremViolation(
            "complete distance graph admits no perfect matching".into(),
        ));
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(DcuOutcome::Value(candidates[lo].clone()))
}

/// Direct evaluation of the defining infimum of the neighborhood metric
/// over the finite family of open sets that are unions of grid arcs, with
/// every admissible grid point included (inclusion changes neither counts
/// of the dilation nor distances, and the maximal choice dominates). The
/// grid must refine both spectra. Independent of the matching route;
/// agrees with `dcu_distance` to within one grid step.
pub fn dcu_definition_oracle(
    x: &SpectralMorphism,
    y: &SpectralMorphism,
    grid_step: &Rat,
) -> Result<DcuOutcome> {
    if x.space() != y.space() {
        return Err(CuError::SpaceMismatch);
    }
    if x.total_multiplicity() != y.total_multiplicity() {
        return Ok(DcuOutcome::Infinite);
    }
    if grid_step <= &Rat::zero() {
        return Err(CuError::Invalid("grid step must be positive".into()));
    }
    let inv = grid_step.recip();
    if !inv.is_integer() {
        return Err(CuError::Invalid("grid step must be 1/N".into()));
    }
    let n = to_usize(&inv.to_integer());
    if n == 0 || n > 22 {
        return Err(CuError::TooLarge(format!("grid of {n} arcs")));
    }
    for m in [x, y] {
        for (coord, _) in m.points() {
            if !(coord * &inv).is_integer() {
                return Err(CuError::Precondition(format!(
                    "grid 1/{n} does not refine spectrum point {coord}"
                )));
            }
        }
    }
    let circle = x.space() == &Space::Circle;
    let pos = |k: usize| Rat::new(BigInt::from(k as u64), BigInt::from(n as u64));
    let point_index = |coord: &Rat| -> usize {
        let k = to_usize(&(coord * &inv).to_integer());
        if circle {
            k % n
        } else {
            k
        }
    };
    let count_at_points = |m: &SpectralMorphism| -> Vec<u64> {
        let mut c = vec![0u64; n + 1];
        for (coord, mult) in m.points() {
            c[point_index(coord)] += *mult as u64;
        }
        c
    };
    let px = count_at_points(x);
    let py = count_at_points(y);

    let dist_point_cell = |p: usize, cell: usize| -> Rat {
        let pc = pos(p);
        let lo = pos(cell);
        let hi = pos(cell + 1);
        if circle {
            circle_dist(&pc, &lo).min(circle_dist(&pc, &hi))
        } else if p <= cell {
            line_dist(&pc, &lo)
        } else if p >= cell + 1 {
            line_dist(&pc, &hi)
        } else {
            Rat::zero()
        }
    };

    let one_direction = |from: &[u64], to: &SpectralMorphism| -> Result<Rat> {
        let to_pts: Vec<(usize, usize)> = to
            .points()
            .iter()
            .map(|(c, m)| (point_index(c), *m))
            .collect();
        let mut worst = Rat::zero();
        let masks: u64 = 1 << n;
        for mask in 1..masks {
            let cell_on = |k: usize| mask >> (k % n) & 1 == 1;
            let mut k_count: u64 = 0;
            let upper = if circle { n } else { n + 1 };
            for p in 0..upper {
                let included = if circle {
                    cell_on((p + n - 1) % n) && cell_on(p)
                } else if p == 0 {
                    cell_on(0)
                } else if p == n {
                    cell_on(n - 1)
                } else {
                    cell_on(p - 1) && cell_on(p)
                };
                if included {
                    k_count += from[p];
                }
            }
            if k_count == 0 {
                continue;
            }
            let mut ds: Vec<Rat> = Vec::new();
            for (pi, mult) in &to_pts {
                let mut best: Option<Rat> = None;
                for cell in 0..n {
                    if mask >> cell & 1 == 1 {
                        let d = dist_point_cell(*pi, cell);
                        best = Some(match best {
                            None => d,
                            Some(b) => b.min(d),
                        });
                    }
                }
                if let Some(b) = best {
                    for _ in 0..*mult {
                        ds.push(b.clone());
                    }
                }
            }
            ds.sort();
            if (k_count as usize) > ds.len() {
                return Err(CuError::TheoremViolation(
                    "equal multiplicities but deficient distance table".into(),
                ));
            }
            let bound = ds[k_count as usize - 1].clone();
            if bound > worst {
                worst = bound;
            }
        }
        Ok(worst)
    };

    let a = one_direction(&px, y)?;
    let b = one_direction(&py, x)?;
    Ok(DcuOutcome::Value(a.max(b)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeMode {
    /// q = 2^∞: the sandwich `dd ≤ d ≤ 2·dd` is the assertable target.
    TheoremBacked,
    /// Any other size: the p-relaxed sandwich is recorded, never asserted.
    ConjectureProbe { factor: u64 },
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub dd: DdOutcome,
    pub dcu: DcuOutcome,
    pub mode: ProbeMode,
    /// dd ≤ d
    pub lower_held: bool,
    /// d ≤ factor · dd
    pub upper_held: bool,
}

/// Compute both distances and record whether the sandwich
/// `dd ≤ d ≤ factor·dd` held, with factor 2 for size 2^∞ and the largest
/// prime of q otherwise (conjecture mode). A horizon-flagged dd of zero
/// relaxes the upper bound to `d ≤ factor / q_{n_max}`.
pub fn equivalence_probe(
    x: &SpectralMorphism,
    y: &SpectralMorphism,
    q: &Supernatural,
    n_max: usize,
) -> Result<ProbeReport> {
    let mode = if q.primes() == [2] {
        ProbeMode::TheoremBacked
    } else {
        ProbeMode::ConjectureProbe {
            factor: q.primes().iter().copied().max().unwrap(),
        }
    };
    let factor = Rat::from_integer(BigInt::from(match &mode {
        ProbeMode::TheoremBacked => 2u64,
        ProbeMode::ConjectureProbe { factor } => *factor,
    }));
    let dd = dd_distance(x, y, q, n_max)?;
    let dcu = dcu_distance(x, y)?;
    let (lower_held, upper_held) = match (&dd, &dcu) {
        (DdOutcome::Infinite, DcuOutcome::Infinite) => (true, true),
        (DdOutcome::Infinite, DcuOutcome::Value(_)) => (false, true),
        (_, DcuOutcome::Infinite) => (true, false),
        (DdOutcome::IndistinguishableToHorizon, DcuOutcome::Value(d)) => {
            (true, d <= &(factor * q.scale(n_max)))
        }
        (DdOutcome::Value { value, .. }, DcuOutcome::Value(d)) => {
            (value <= d, d <= &(factor * value))
        }
    };
    Ok(ProbeReport {
        dd,
        dcu,
        mode,
        lower_held,
        upper_held,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use num_traits::Signed;

    fn spec_on_circle(coords: &[(i64, i64)]) -> SpectralMorphism {
        SpectralMorphism::new(
            Space::Circle,
            coords.iter().map(|&(a, b)| (rat(a, b), 1)).collect(),
        )
        .unwrap()
    }

    fn q2() -> Supernatural {
        Supernatural::pow_of(2)
    }

    #[test]
    fn spectral_evaluation_counts_with_multiplicity() {
        let m = SpectralMorphism::new(Space::Circle, vec![(rat(1, 10), 2)]).unwrap();
        let arc = OpenSet::new(
            Space::Circle,
            vec![vec![(rat(0, 1), rat(1, 4))]],
            BTreeSet::new(),
        )
        .unwrap();
        let f = StepFunction::indicator(&arc);
        assert_eq!(m.eval(&f).unwrap(), Fin(2));
        assert_eq!(
            m.eval(&StepFunction::constant(Space::Circle, Fin(1))).unwrap(),
            Fin(2)
        );

        let two = spec_on_circle(&[(1, 10), (6, 10)]);
        let piece = OpenSet::new(
            Space::Circle,
            vec![vec![(rat(1, 2), rat(3, 4))]],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(two.eval(&StepFunction::indicator(&piece)).unwrap(), Fin(1));
    }

    #[test]
    fn fast_comparison_matches_brute_force_on_small_levels() {
        let samples = [
            (spec_on_circle(&[(1, 8)]), spec_on_circle(&[(5, 8)])),
            (spec_on_circle(&[(1, 100)]), spec_on_circle(&[(71, 100)])),
            (
                spec_on_circle(&[(1, 10), (3, 10)]),
                spec_on_circle(&[(3, 20), (7, 20)]),
            ),
            (spec_on_circle(&[(1, 10)]), spec_on_circle(&[(1, 10), (6, 10)])),
            (
                spec_on_circle(&[(1, 3), (2, 3)]),
                SpectralMorphism::new(Space::Circle, vec![(rat(1, 3), 2)]).unwrap(),
            ),
            (spec_on_circle(&[(0, 1)]), spec_on_circle(&[(1, 2)])),
        ];
        for (x, y) in &samples {
            let hx = MorphismHandle::spectral(x);
            let hy = MorphismHandle::spectral(y);
            for n in 0..=2usize {
                let level =
                    enumerate_level_indicators(&q2(), n, &Space::Circle, 100_000).unwrap();
                let brute = compare_on(&hx, &hy, &level).unwrap().holds();
                let fast = compare_spectral_level(x, y, &q2(), n).unwrap().holds();
                assert_eq!(
                    brute,
                    fast,
                    "level {n}: {:?} vs {:?}",
                    x.points(),
                    y.points()
                );
            }
        }
    }

    #[test]
    fn fast_comparison_matches_brute_force_on_the_interval() {
        let mk = |coords: &[(i64, i64)]| {
            SpectralMorphism::new(
                Space::ClosedInterval,
                coords.iter().map(|&(a, b)| (rat(a, b), 1)).collect(),
            )
            .unwrap()
        };
        let samples = [
            (mk(&[(0, 1)]), mk(&[(1, 4)])),
            (mk(&[(1, 2)]), mk(&[(1, 2)])),
            (mk(&[(1, 8), (7, 8)]), mk(&[(1, 4), (3, 4)])),
            (mk(&[(0, 1), (1, 1)]), mk(&[(1, 2), (1, 2)])),
        ];
        for (x, y) in &samples {
            let hx = MorphismHandle::spectral(x);
            let hy = MorphismHandle::spectral(y);
            for n in 0..=2usize {
                let level =
                    enumerate_level_indicators(&q2(), n, &Space::ClosedInterval, 100_000).unwrap();
                let brute = compare_on(&hx, &hy, &level).unwrap().holds();
                let fast = compare_spectral_level(x, y, &q2(), n).unwrap().holds();
                assert_eq!(brute, fast, "level {n}");
            }
        }
    }

    #[test]
    fn comparison_examples() {
        let x = spec_on_circle(&[(1, 8)]);
        let y = spec_on_circle(&[(5, 8)]);
        let hx = MorphismHandle::spectral(&x);
        let hy = MorphismHandle::spectral(&y);

        let l2 = enumerate_level_indicators(&q2(), 2, &Space::Circle, 100_000).unwrap();
        assert!(compare_on(&hx, &hx, &l2).unwrap().is_strict());
        assert!(compare_on(&hx, &hy, &[]).unwrap().is_strict());

        let l1 = enumerate_level_indicators(&q2(), 1, &Space::Circle, 100_000).unwrap();
        assert!(compare_on(&hx, &hy, &l1).unwrap().holds());
        assert!(!compare_on(&hx, &hy, &l2).unwrap().holds());

        // the spec's counterexample pair at level 2
        let g1 = StepFunction::indicator(
            &OpenSet::new(
                Space::Circle,
                vec![vec![(rat(0, 1), rat(1, 4))]],
                BTreeSet::new(),
            )
            .unwrap(),
        );
        let g2 = StepFunction::indicator(
            &OpenSet::new(
                Space::Circle,
                vec![vec![(rat(0, 1), rat(1, 2)), (rat(3, 4), rat(1, 1))]],
                [0].into_iter().collect(),
            )
            .unwrap(),
        );
        assert!(g1.way_below(&g2).unwrap());
        let a1 = hx.eval(&g1).unwrap();
        let b2 = hy.eval(&g2).unwrap();
        let b1 = hy.eval(&g1).unwrap();
        let a2 = hx.eval(&g2).unwrap();
        assert!(!(a1 <= b2 && b1 <= a2));
    }

    #[test]
    fn dd_examples() {
        let x = spec_on_circle(&[(1, 8)]);
        let y = spec_on_circle(&[(5, 8)]);
        assert_eq!(
            dd_distance(&x, &x, &q2(), 6).unwrap(),
            DdOutcome::IndistinguishableToHorizon
        );
        assert_eq!(
            dd_distance(&x, &y, &q2(), 6).unwrap(),
            DdOutcome::Value {
                level: 1,
                value: rat(1, 2)
            }
        );
        let a = spec_on_circle(&[(1, 10)]);
        let b = spec_on_circle(&[(1, 10), (6, 10)]);
        assert_eq!(dd_distance(&a, &b, &q2(), 6).unwrap(), DdOutcome::Infinite);
    }

    #[test]
    fn dd_generic_agrees_with_fast_dd() {
        let x = spec_on_circle(&[(1, 8)]);
        let y = spec_on_circle(&[(5, 8)]);
        let hx = MorphismHandle::spectral(&x);
        let hy = MorphismHandle::spectral(&y);
        let generic = dd_distance_generic(&hx, &hy, &q2(), &Space::Circle, 3, 100_000).unwrap();
        let fast = dd_distance(&x, &y, &q2(), 3).unwrap();
        assert_eq!(generic, fast);
    }

    #[test]
    fn dcu_examples() {
        let x = spec_on_circle(&[(1, 8)]);
        let y = spec_on_circle(&[(5, 8)]);
        assert_eq!(dcu_distance(&x, &x).unwrap(), DcuOutcome::Value(rat(0, 1)));
        assert_eq!(dcu_distance(&x, &y).unwrap(), DcuOutcome::Value(rat(1, 2)));

        let a = spec_on_circle(&[(1, 10), (3, 10)]);
        let b = spec_on_circle(&[(3, 20), (7, 20)]);
        assert_eq!(dcu_distance(&a, &b).unwrap(), DcuOutcome::Value(rat(1, 20)));

        let c = spec_on_circle(&[(1, 10)]);
        let d = spec_on_circle(&[(1, 10), (6, 10)]);
        assert_eq!(dcu_distance(&c, &d).unwrap(), DcuOutcome::Infinite);
    }

    #[test]
    fn oracle_examples() {
        let x = spec_on_circle(&[(1, 8)]);
        let y = spec_on_circle(&[(5, 8)]);
        assert_eq!(
            dcu_definition_oracle(&x, &x, &rat(1, 8)).unwrap(),
            DcuOutcome::Value(rat(0, 1))
        );
        assert_eq!(
            dcu_definition_oracle(&x, &y, &rat(1, 8)).unwrap(),
            DcuOutcome::Value(rat(1, 2))
        );
        let a = spec_on_circle(&[(2, 20), (6, 20)]);
        let b = spec_on_circle(&[(3, 20), (7, 20)]);
        let DcuOutcome::Value(v) = dcu_definition_oracle(&a, &b, &rat(1, 20)).unwrap() else {
            panic!("finite expected");
        };
        assert!((v.clone() - rat(1, 20)).abs() <= rat(1, 20), "got {v}");
    }

    #[test]
    fn probe_example() {
        let x = spec_on_circle(&[(1, 8)]);
        let y = spec_on_circle(&[(5, 8)]);
        let r = equivalence_probe(&x, &y, &q2(), 8).unwrap();
        assert!(r.lower_held && r.upper_held);
        assert_eq!(r.mode, ProbeMode::TheoremBacked);

        let same = equivalence_probe(&x, &x, &q2(), 8).unwrap();
        assert!(same.lower_held && same.upper_held);
        assert_eq!(same.dcu, DcuOutcome::Value(rat(0, 1)));
    }

    #[test]
    fn handle_self_check_detects_planted_violations() {
        let x = spec_on_circle(&[(1, 8)]);
        let good = MorphismHandle::spectral(&x);
        let samples: Vec<StepFunction> = enumerate_level_indicators(&q2(), 1, &Space::Circle, 100)
            .unwrap();
        good.self_check(&samples).unwrap();

        let bad = MorphismHandle::from_fn(|f| {
            // drops multiplicity above 1: not additive
            Ok(match f.max_value() {
                Some(0) => Fin(0),
                _ => Fin(1),
            })
        });
        assert!(bad.self_check(&samples).is_err());
    }
}
