//! Classification of unitary spectra at a fixed resolution: the induced
//! counting morphisms, the proximity bipartite graph at level n, Hall's
//! marriage condition, maximum matchings, and the finite-dimensional and
//! AF uniqueness pipelines in the diagonal model (a unitary is carried by
//! its eigenvalue multiset; the conjugating unitary is the permutation
//! realizing the matching, so the conjugation bound is the maximal
//! displacement).

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{CuError, Result};
use crate::morphism::{compare_spectral_level, dd_distance, DdOutcome, SpectralMorphism};
use crate::rat::{circle_dist, mod1, Rat};
use crate::space::Space;
use crate::supernat::Supernatural;

/// A nonempty multiset of exact circle coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectrumMultiset {
    points: Vec<(Rat, usize)>,
}

impl SpectrumMultiset {
    pub fn new(raw: Vec<(Rat, usize)>) -> Result<SpectrumMultiset> {
        let mut points: Vec<(Rat, usize)> = Vec::new();
        for (coord, mult) in raw {
            if mult == 0 {
                continue;
            }
            points.push((mod1(&coord), mult));
        }
        if points.is_empty() {
            return Err(CuError::Invalid("spectrum must be nonempty".into()));
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
        Ok(SpectrumMultiset { points })
    }

    pub fn from_coords(coords: &[Rat]) -> Result<SpectrumMultiset> {
        SpectrumMultiset::new(coords.iter().map(|c| (c.clone(), 1)).collect())
    }

    pub fn points(&self) -> &[(Rat, usize)] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.points.iter().map(|(_, m)| m).sum()
    }

    pub fn expand(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.size());
        for (c, m) in &self.points {
            for _ in 0..*m {
                out.push(c.clone());
            }
        }
        out
    }
}

/// The counting morphism of a spectrum.
pub fn induced_morphism(spec: &SpectrumMultiset) -> SpectralMorphism {
    SpectralMorphism::new(Space::Circle, spec.points.clone())
        .expect("circle coordinates are canonical")
}

#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, adj: Vec<Vec<usize>>) -> BipartiteGraph {
        assert_eq!(adj.len(), left);
        BipartiteGraph { left, right, adj }
    }

    pub fn left_count(&self) -> usize {
        self.left
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn neighbors(&self, l: usize) -> &[usize] {
        &self.adj[l]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().map(move |&j| (i, j)))
    }
}

/// The proximity graph at resolution n: one vertex per multiset element on
/// each side, an edge whenever the arc distance is strictly below `2/2^n`.
pub fn build_graph(x: &SpectrumMultiset, y: &SpectrumMultiset, n: usize) -> BipartiteGraph {
    let xs = x.expand();
    let ys = y.expand();
    let threshold = Rat::new(BigInt::from(2), BigInt::from(2u64).pow(n as u32));
    let adj = xs
        .iter()
        .map(|a| {
            ys.iter()
                .enumerate()
                .filter(|(_, b)| circle_dist(a, b) < threshold)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    BipartiteGraph::new(xs.len(), ys.len(), adj)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HallResult {
    Ok,
    /// A left subset with fewer neighbors than members.
    Violating(Vec<usize>),
}

/// Check Hall's condition. Exhaustive over all left subsets up to 20 left
/// vertices (returning a violating set of minimum size); larger instances
/// are decided by matching deficiency, extracting the violating set from
/// the alternating reachability layers of an exposed vertex.
pub fn hall_check(g: &BipartiteGraph) -> HallResult {
    if g.left <= 20 && g.right <= 63 {
        let masks: u64 = 1 << g.left;
        let row_masks: Vec<u64> = g
            .adj
            .iter()
            .map(|ns| ns.iter().fold(0u64, |m, &j| m | 1 << j))
            .collect();
        let mut best: Option<u64> = None;
        for w in 1..masks {
            if let Some(b) = best {
                if w.count_ones() >= b.count_ones() {
                    continue;
                }
            }
            let mut nb = 0u64;
            let mut bits = w;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                nb |= row_masks[i];
                bits &= bits - 1;
            }
            if nb.count_ones() < w.count_ones() {
                best = Some(w);
            }
        }
        return match best {
            None => HallResult::Ok,
            Some(w) => {
                HallResult::Violating((0..g.left).filter(|i| w >> i & 1 == 1).collect())
            }
        };
    }
    // matching route
    let matching = max_matching(g);
    if matching.len() == g.left {
        return HallResult::Ok;
    }
    let mut matched_left = vec![None; g.left];
    let mut matched_right = vec![None; g.right];
    for &(l, r) in &matching {
        matched_left[l] = Some(r);
        matched_right[r] = Some(l);
    }
    let exposed = (0..g.left)
        .find(|&l| matched_left[l].is_none())
        .expect("deficient matching leaves an exposed vertex");
    // alternating BFS: left vertices reachable from the exposed one
    let mut seen_left = vec![false; g.left];
    let mut seen_right = vec![false; g.right];
    let mut queue = VecDeque::new();
    seen_left[exposed] = true;
    queue.push_back(exposed);
    while let Some(l) = queue.pop_front() {
        for &r in g.neighbors(l) {
            if seen_right[r] {
                continue;
            }
            seen_right[r] = true;
            if let Some(l2) = matched_right[r] {
                if !seen_left[l2] {
                    seen_left[l2] = true;
                    queue.push_back(l2);
                }
            }
        }
    }
    HallResult::Violating((0..g.left).filter(|&l| seen_left[l]).collect())
}

/// Maximum matching via Hopcroft–Karp. Saturates the left side exactly
/// when Hall's condition holds.
pub fn max_matching(g: &BipartiteGraph) -> Vec<(usize, usize)> {
    let mut match_l: Vec<Option<usize>> = vec![None; g.left];
    let mut match_r: Vec<Option<usize>> = vec![None; g.right];
    loop {
        // BFS layers from exposed left vertices
        let mut dist: Vec<Option<u32>> = vec![None; g.left];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for l in 0..g.left {
            if match_l[l].is_none() {
                dist[l] = Some(0);
                queue.push_back(l);
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in g.neighbors(l) {
                match match_r[r] {
                    None => found = true,
                    Some(l2) => {
                        if dist[l2].is_none() {
                            dist[l2] = Some(dist[l].unwrap() + 1);
                            queue.push_back(l2);
                        }
                    }
                }
            }
        }
        if !found {
            break;
        }
        fn augment(
            g: &BipartiteGraph,
            l: usize,
            dist: &mut [Option<u32>],
            match_l: &mut [Option<usize>],
            match_r: &mut [Option<usize>],
        ) -> bool {
            let d = dist[l].take();
            for &r in g.neighbors(l) {
                let ok = match match_r[r] {
                    None => true,
                    Some(l2) => {
                        dist[l2] == d.map(|x| x + 1)
                            && augment(g, l2, dist, match_l, match_r)
                    }
                };
                if ok {
                    match_l[l] = Some(r);
                    match_r[r] = Some(l);
                    return true;
                }
            }
            false
        }
        for l in 0..g.left {
            if match_l[l].is_none() && dist[l] == Some(0) {
                augment(g, l, &mut dist, &mut match_l, &mut match_r);
            }
        }
    }
    (0..g.left)
        .filter_map(|l| match_l[l].map(|r| (l, r)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct ClassifyOutcome {
    /// Matched coordinate pairs (x, σ(x)).
    pub pairs: Vec<(Rat, Rat)>,
    /// Largest arc displacement of the bijection.
    pub max_displacement: Rat,
    /// The guaranteed arc bound `2/2^n`.
    pub bound: Rat,
    /// Chordal conversion of the bound, `2·sin(π·bound)`, for reports.
    pub chordal_bound: f64,
}

/// The finite-dimensional uniqueness step at resolution n: under the
/// strict level-n comparison hypothesis, every equal-size pair of spectra
/// admits a bijection moving no point by `2/2^n` or more.
pub fn classify_step(
    x: &SpectrumMultiset,
    y: &SpectrumMultiset,
    n: usize,
) -> Result<ClassifyOutcome> {
    if x.size() != y.size() {
        return Err(CuError::Precondition(format!(
            "spectra have sizes {} and {}",
            x.size(),
            y.size()
        )));
    }
    if n == 0 {
        return Err(CuError::Precondition("resolution must be at least 1".into()));
    }
    let q2 = Supernatural::pow_of(2);
    let cmp = compare_spectral_level(&induced_morphism(x), &induced_morphism(y), &q2, n)?;
    if !cmp.is_strict() {
        let detail = match cmp {
            crate::morphism::Comparison::None { detail, .. } => detail,
            _ => "comparison not strict".into(),
        };
        return Err(CuError::Hypothesis { level: n, detail });
    }
    let g = build_graph(x, y, n);
    if let HallResult::Violating(w) = hall_check(&g) {
        return Err(CuError::TheoremViolation(format!(
            "hypothesis held at level {n} but Hall fails on left subset {w:?}"
        )));
    }
    let matching = max_matching(&g);
    if matching.len() != x.size() {
        return Err(CuError::TheoremViolation(
            "saturating matching missing despite Hall's condition".into(),
        ));
    }
    let xs = x.expand();
    let ys = y.expand();
    let bound = Rat::new(BigInt::from(2), BigInt::from(2u64).pow(n as u32));
    let mut pairs = Vec::with_capacity(matching.len());
    let mut max_disp = Rat::from_integer(BigInt::from(0));
    for (l, r) in matching {
        let d = circle_dist(&xs[l], &ys[r]);
        if d >= bound {
            return Err(CuError::TheoremViolation(format!(
                "matched pair at distance {d} ≥ {bound}"
            )));
        }
        if d > max_disp {
            max_disp = d;
        }
        pairs.push((xs[l].clone(), ys[r].clone()));
    }
    let chordal_bound = 2.0 * (std::f64::consts::PI * bound.to_f64().unwrap_or(0.0)).sin();
    Ok(ClassifyOutcome {
        pairs,
        max_displacement: max_disp,
        bound,
        chordal_bound,
    })
}

/// A diagonal model of an inductive system of finite-dimensional algebras:
/// block sizes per stage and unital multiplicity matrices between
/// consecutive stages. Beyond the listed embeddings the last one repeats.
#[derive(Clone, Debug)]
pub struct AfUnitaryModel {
    stage0_blocks: Vec<u64>,
    /// `embeddings[i][to][from]`: multiplicity of stage-i block `from`
    /// inside stage-(i+1) block `to`.
    embeddings: Vec<Vec<Vec<u64>>>,
}

impl AfUnitaryModel {
    pub fn new(stage0_blocks: Vec<u64>, embeddings: Vec<Vec<Vec<u64>>>) -> Result<AfUnitaryModel> {
        if stage0_blocks.is_empty() || stage0_blocks.contains(&0) {
            return Err(CuError::Invalid("stage-0 blocks must be nonempty and positive".into()));
        }
        if embeddings.is_empty() {
            return Err(CuError::Invalid("at least one embedding step required".into()));
        }
        let model = AfUnitaryModel { stage0_blocks, embeddings };
        // unitality: sizes must stay positive and consistent
        let mut sizes = model.stage0_blocks.clone();
        for i in 0..model.embeddings.len() {
            sizes = model.apply_embedding(i, &sizes)?;
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(CuError::Invalid(format!(
                    "embedding {i} produces an empty or zero block"
                )));
            }
        }
        Ok(model)
    }

    /// The CAR-style model: a single block of size `k`, doubled each step.
    pub fn car(k: u64) -> AfUnitaryModel {
        AfUnitaryModel {
            stage0_blocks: vec![k],
            embeddings: vec![vec![vec![2]]],
        }
    }

    fn embedding_at(&self, i: usize) -> &Vec<Vec<u64>> {
        &self.embeddings[i.min(self.embeddings.len() - 1)]
    }

    fn apply_embedding(&self, i: usize, sizes: &[u64]) -> Result<Vec<u64>> {
        let m = self.embedding_at(i);
        m.iter()
            .map(|row| {
                if row.len() != sizes.len() {
                    return Err(CuError::DimensionMismatch(format!(
                        "embedding {i} row width {} vs {} blocks",
                        row.len(),
                        sizes.len()
                    )));
                }
                Ok(row.iter().zip(sizes).map(|(m, s)| m * s).sum())
            })
            .collect()
    }

    pub fn block_sizes(&self, stage: usize) -> Result<Vec<u64>> {
        let mut sizes = self.stage0_blocks.clone();
        for i in 0..stage {
            sizes = self.apply_embedding(i, &sizes)?;
        }
        Ok(sizes)
    }

    /// Push a per-block unitary spectrum one stage forward: block `to`
    /// receives `m[to][from]` copies of every source block spectrum.
    pub fn push(&self, stage: usize, u: &[SpectrumMultiset]) -> Result<Vec<SpectrumMultiset>> {
        let m = self.embedding_at(stage);
        m.iter()
            .map(|row| {
                if row.len() != u.len() {
                    return Err(CuError::DimensionMismatch(format!(
                        "embedding row width {} vs {} blocks",
                        row.len(),
                        u.len()
                    )));
                }
                let mut pts: Vec<(Rat, usize)> = Vec::new();
                for (mult, spec) in row.iter().zip(u) {
                    if *mult == 0 {
                        continue;
                    }
                    for (c, m0) in spec.points() {
                        pts.push((c.clone(), m0 * *mult as usize));
                    }
                }
                SpectrumMultiset::new(pts)
            })
            .collect()
    }

    pub fn validate_unitary(&self, stage: usize, u: &[SpectrumMultiset]) -> Result<()> {
        let sizes = self.block_sizes(stage)?;
        if u.len() != sizes.len() {
            return Err(CuError::DimensionMismatch(format!(
                "{} block spectra for {} blocks",
                u.len(),
                sizes.len()
            )));
        }
        for (b, (spec, size)) in u.iter().zip(&sizes).enumerate() {
            if spec.size() as u64 != *size {
                return Err(CuError::DimensionMismatch(format!(
                    "block {b}: spectrum of size {} in a block of size {size}",
                    spec.size()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum AfOutcome {
    Found {
        stage: usize,
        level: usize,
        blocks: Vec<ClassifyOutcome>,
        overall_displacement: Rat,
        /// The asserted arc bound `1/2^{n-2}`.
        bound: Rat,
    },
    Unknown {
        horizon: usize,
        /// Per block, the discrete-semimetric outcome at the last stage.
        distinguishing: Vec<DdOutcome>,
    },
}

#[derive(Clone, Debug)]
pub struct AfTranscript {
    pub resolution: usize,
    pub outcome: AfOutcome,
}

/// The AF uniqueness pipeline in the diagonal model: push both unitaries
/// forward until every block satisfies the strict level-(n-1) comparison,
/// classify blockwise at that stage, and report the overall displacement,
/// which stays within `1/2^{n-2}`.
pub fn af_uniqueness_demo(
    model: &AfUnitaryModel,
    u0: &[SpectrumMultiset],
    v0: &[SpectrumMultiset],
    n: usize,
    horizon: usize,
) -> Result<AfTranscript> {
    if n < 2 {
        return Err(CuError::Precondition("resolution must be at least 2".into()));
    }
    model.validate_unitary(0, u0)?;
    model.validate_unitary(0, v0)?;
    let q2 = Supernatural::pow_of(2);
    let level = n - 1;
    let mut u = u0.to_vec();
    let mut v = v0.to_vec();
    for stage in 0..=horizon {
        let mut all = true;
        for (bu, bv) in u.iter().zip(&v) {
            let cmp = compare_spectral_level(
                &induced_morphism(bu),
                &induced_morphism(bv),
                &q2,
                level,
            )?;
            if !cmp.is_strict() {
                all = false;
                break;
            }
        }
        if all {
            let mut blocks = Vec::with_capacity(u.len());
            let mut overall = Rat::from_integer(BigInt::from(0));
            for (bu, bv) in u.iter().zip(&v) {
                let out = classify_step(bu, bv, level)?;
                if out.max_displacement > overall {
                    overall = out.max_displacement.clone();
                }
                blocks.push(out);
            }
            let bound = Rat::new(BigInt::from(1), BigInt::from(2u64).pow((n - 2) as u32));
            if overall > bound {
                return Err(CuError::TheoremViolation(format!(
                    "displacement {overall} above {bound}"
                )));
            }
            return Ok(AfTranscript {
                resolution: n,
                outcome: AfOutcome::Found {
                    stage,
                    level,
                    blocks,
                    overall_displacement: overall,
                    bound,
                },
            });
        }
        if stage < horizon {
            u = model.push(stage, &u)?;
            v = model.push(stage, &v)?;
        }
    }
    let distinguishing = u
        .iter()
        .zip(&v)
        .map(|(bu, bv)| dd_distance(&induced_morphism(bu), &induced_morphism(bv), &q2, level))
        .collect::<Result<Vec<_>>>()?;
    Ok(AfTranscript {
        resolution: n,
        outcome: AfOutcome::Unknown {
            horizon,
            distinguishing,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn spectrum(coords: &[(i64, i64)]) -> SpectrumMultiset {
        SpectrumMultiset::from_coords(
            &coords.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn induced_morphism_counts() {
        let s = SpectrumMultiset::new(vec![(rat(0, 1), 1)]).unwrap();
        let m = induced_morphism(&s);
        let top = crate::step::StepFunction::constant(Space::Circle, crate::extnat::Fin(1));
        assert_eq!(m.eval(&top).unwrap(), crate::extnat::Fin(1));

        let d = SpectrumMultiset::new(vec![(rat(1, 10), 2)]).unwrap();
        let md = induced_morphism(&d);
        let arc = crate::openset::OpenSet::new(
            Space::Circle,
            vec![vec![(rat(0, 1), rat(1, 4))]],
            Default::default(),
        )
        .unwrap();
        assert_eq!(
            md.eval(&crate::step::StepFunction::indicator(&arc)).unwrap(),
            crate::extnat::Fin(2)
        );
    }

    #[test]
    fn graph_edges_use_strict_threshold() {
        let x = spectrum(&[(0, 1)]);
        let g = build_graph(&x, &x, 3);
        assert_eq!(g.edges().count(), 1);

        let x = spectrum(&[(1, 10), (3, 10)]);
        let y = spectrum(&[(3, 20), (7, 20)]);
        let g = build_graph(&x, &y, 3);
        let edges: Vec<(usize, usize)> = g.edges().collect();
        // (0.1,0.15), (0.3,0.15), (0.3,0.35); (0.1,0.35) excluded since
        // 0.25 is not < 0.25
        assert_eq!(edges, vec![(0, 0), (1, 0), (1, 1)]);

        let g = build_graph(&x, &y, 12);
        assert_eq!(g.edges().count(), 0);
    }

    #[test]
    fn hall_examples() {
        // complete bipartite
        let g = BipartiteGraph::new(3, 3, vec![vec![0, 1, 2]; 3]);
        assert_eq!(hall_check(&g), HallResult::Ok);

        // both left vertices see only one right vertex
        let x = SpectrumMultiset::new(vec![(rat(1, 10), 2)]).unwrap();
        let y = spectrum(&[(1, 10), (6, 10)]);
        let g = build_graph(&x, &y, 3);
        assert_eq!(hall_check(&g), HallResult::Violating(vec![0, 1]));

        // empty edge set, nonempty left: a violating singleton
        let g = BipartiteGraph::new(2, 2, vec![vec![], vec![]]);
        assert_eq!(hall_check(&g), HallResult::Violating(vec![0]));
    }

    #[test]
    fn matching_examples() {
        let x = spectrum(&[(1, 10), (3, 10)]);
        let y = spectrum(&[(3, 20), (7, 20)]);
        let g = build_graph(&x, &y, 3);
        let m = max_matching(&g);
        assert_eq!(m.len(), 2);
        assert!(m.contains(&(0, 0)) && m.contains(&(1, 1)));

        let empty = BipartiteGraph::new(2, 2, vec![vec![], vec![]]);
        assert!(max_matching(&empty).is_empty());

        let star = BipartiteGraph::new(1, 3, vec![vec![0, 1, 2]]);
        assert_eq!(max_matching(&star).len(), 1);
        let star_rev = BipartiteGraph::new(3, 1, vec![vec![0], vec![0], vec![0]]);
        assert_eq!(max_matching(&star_rev).len(), 1);
    }

    #[test]
    fn hall_equivalent_to_saturating_matching_small() {
        // exhaustive over all bipartite graphs on 3+3 vertices
        for mask in 0u32..(1 << 9) {
            let adj: Vec<Vec<usize>> = (0..3)
                .map(|i| (0..3).filter(|j| mask >> (3 * i + j) & 1 == 1).collect())
                .collect();
            let g = BipartiteGraph::new(3, 3, adj);
            let hall_ok = hall_check(&g) == HallResult::Ok;
            let saturates = max_matching(&g).len() == 3;
            assert_eq!(hall_ok, saturates, "mask {mask:#b}");
        }
    }

    #[test]
    fn classify_examples() {
        let x = spectrum(&[(1, 10), (3, 10)]);
        let out = classify_step(&x, &x, 4).unwrap();
        assert_eq!(out.max_displacement, rat(0, 1));

        let y = spectrum(&[(3, 20), (7, 20)]);
        let out = classify_step(&x, &y, 3).unwrap();
        assert_eq!(out.max_displacement, rat(1, 20));
        assert_eq!(out.bound, rat(1, 4));
        let mut pairs = out.pairs.clone();
        pairs.sort();
        assert_eq!(
            pairs,
            vec![(rat(1, 10), rat(3, 20)), (rat(3, 10), rat(7, 20))]
        );

        // hypothesis failure at a resolution too fine for the pair
        let err = classify_step(&x, &y, 6).unwrap_err();
        assert!(matches!(err, CuError::Hypothesis { level: 6, .. }));
    }

    #[test]
    fn monotone_resolution() {
        let x = spectrum(&[(1, 16), (5, 16), (11, 16)]);
        let y = spectrum(&[(2, 16), (6, 16), (12, 16)]);
        let mut best = None;
        for n in (1..=4).rev() {
            match classify_step(&x, &y, n) {
                Ok(out) => {
                    best = Some(out);
                    // once it succeeds at n it succeeds at every coarser level
                    for m in 1..n {
                        assert!(classify_step(&x, &y, m).is_ok(), "failed at {m} < {n}");
                    }
                    break;
                }
                Err(CuError::Hypothesis { .. }) => continue,
                Err(e) => panic!("unexpected {e}"),
            }
        }
        assert!(best.is_some());
    }

    #[test]
    fn af_demo_on_the_car_model() {
        let model = AfUnitaryModel::car(1);
        // u = {0}, v = {1/2^k}: the stage machinery settles at stage 0 once
        // the resolution is at most k
        let k = 4usize;
        let u = vec![SpectrumMultiset::new(vec![(rat(0, 1), 1)]).unwrap()];
        let v = vec![SpectrumMultiset::new(vec![(rat(1, 16), 1)]).unwrap()];
        let t = af_uniqueness_demo(&model, &u, &v, k, 30).unwrap();
        match t.outcome {
            AfOutcome::Found {
                stage,
                level,
                overall_displacement,
                bound,
                ..
            } => {
                assert_eq!(stage, 0);
                assert_eq!(level, k - 1);
                assert_eq!(overall_displacement, rat(1, 16));
                assert_eq!(bound, rat(1, 4));
            }
            other => panic!("expected success, got {other:?}"),
        }

        // identical unitaries: stage 0, displacement 0
        let t = af_uniqueness_demo(&model, &u, &u, 5, 30).unwrap();
        match t.outcome {
            AfOutcome::Found {
                stage,
                overall_displacement,
                ..
            } => {
                assert_eq!(stage, 0);
                assert_eq!(overall_displacement, rat(0, 1));
            }
            other => panic!("expected success, got {other:?}"),
        }
    }

    #[test]
    fn af_demo_stage_advance_mixes_blocks() {
        // two one-dimensional blocks whose spectra are swapped: separated
        // at stage 0, merged (hence equal) from stage 1 on
        let model = AfUnitaryModel::new(vec![1, 1], vec![vec![vec![1, 1]]]).unwrap();
        let u = vec![
            SpectrumMultiset::new(vec![(rat(1, 10), 1)]).unwrap(),
            SpectrumMultiset::new(vec![(rat(3, 10), 1)]).unwrap(),
        ];
        let v = vec![
            SpectrumMultiset::new(vec![(rat(3, 10), 1)]).unwrap(),
            SpectrumMultiset::new(vec![(rat(1, 10), 1)]).unwrap(),
        ];
        let t = af_uniqueness_demo(&model, &u, &v, 5, 30).unwrap();
        match t.outcome {
            AfOutcome::Found {
                stage,
                overall_displacement,
                ..
            } => {
                assert_eq!(stage, 1);
                assert_eq!(overall_displacement, rat(0, 1));
            }
            other => panic!("expected success, got {other:?}"),
        }
    }

    #[test]
    fn af_demo_distinct_morphisms_stay_unknown() {
        let model = AfUnitaryModel::car(2);
        let u = vec![SpectrumMultiset::new(vec![(rat(0, 1), 2)]).unwrap()];
        let v = vec![SpectrumMultiset::new(vec![(rat(0, 1), 1), (rat(1, 2), 1)]).unwrap()];
        let t = af_uniqueness_demo(&model, &u, &v, 4, 6).unwrap();
        match t.outcome {
            AfOutcome::Unknown { distinguishing, .. } => {
                assert!(matches!(
                    distinguishing[0],
                    DdOutcome::Infinite | DdOutcome::Value { .. }
                ));
            }
            other => panic!("expected unknown, got {other:?}"),
        }
    }
}
