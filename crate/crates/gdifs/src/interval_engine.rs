//! Finite-depth interval combinatorics of an attractor component.
//!
//! Level-`k` intervals at a vertex are the images of the hulls under the
//! length-`k` path maps. Under the convex strong separation condition they
//! are pairwise disjoint and nested across levels, the complement within the
//! hull is a finite union of open gaps, and the self-similar measure built
//! from the Perron data assigns weight `r_p^s h_{t(p)} / h_u` to the interval
//! of path `p`. Everything here works with exact endpoints; only measure
//! weights are floating point.

use std::collections::BTreeMap;

use num_traits::Signed;
use thiserror::Error;

use crate::ifs_graph::{
    check_cssc_with, compute_hulls, enumerate_paths, EdgeId, GraphIfs, Hulls, VertexId,
};
use crate::rational::{to_f64, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("vertex {0} is out of range")]
    InvalidVertex(VertexId),
    #[error("depth must be at least 1")]
    DepthZero,
    #[error("depth {requested} exceeds the supported maximum {max}")]
    LevelTooDeep { requested: u32, max: u32 },
    #[error("separation fails at vertex {vertex}: intervals of edges {first} and {second} meet")]
    CsscViolated { vertex: VertexId, first: EdgeId, second: EdgeId },
    #[error("hull endpoints could not be computed exactly")]
    InexactHull,
    #[error("interval [{lo}, {hi}] is not contained in the hull")]
    IntervalOutsideHull { lo: Rational, hi: Rational },
    #[error("interval has zero length")]
    ZeroLengthInterval,
}

const MAX_DEPTH: u32 = 22;
const MAX_SUP_DEPTH: u32 = 14;
const MAX_CYCLE_LEN: u32 = 8;
const MAX_REFINE_DEPTH: u32 = 10;

/// One level-`k` interval: the image of the hull at `to` under the path map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub path: Vec<EdgeId>,
    pub to: VertexId,
}

#[derive(Debug, Clone)]
pub struct IntervalSet {
    pub vertex: VertexId,
    pub level: u32,
    /// Sorted by left endpoint; pairwise disjoint under separation.
    pub intervals: Vec<LevelInterval>,
}

fn checked_hulls(ifs: &GraphIfs) -> Result<Hulls, EngineError> {
    let hulls = compute_hulls(ifs);
    if !hulls.exact {
        return Err(EngineError::InexactHull);
    }
    Ok(hulls)
}

fn require_cssc(ifs: &GraphIfs, hulls: &Hulls) -> Result<(), EngineError> {
    let report = check_cssc_with(ifs, hulls);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(EngineError::CsscViolated {
            vertex: v.vertex,
            first: v.first,
            second: v.second,
        }),
    }
}

fn check_depth(k: u32, max: u32) -> Result<(), EngineError> {
    if k == 0 {
        Err(EngineError::DepthZero)
    } else if k > max {
        Err(EngineError::LevelTooDeep { requested: k, max })
    } else {
        Ok(())
    }
}

fn check_vertex(ifs: &GraphIfs, vertex: VertexId) -> Result<(), EngineError> {
    if vertex >= ifs.vertex_count() {
        Err(EngineError::InvalidVertex(vertex))
    } else {
        Ok(())
    }
}

fn raw_level_intervals(
    ifs: &GraphIfs,
    hulls: &Hulls,
    vertex: VertexId,
    k: u32,
) -> Vec<LevelInterval> {
    let mut intervals: Vec<LevelInterval> = enumerate_paths(ifs, vertex, k)
        .expect("depth checked positive")
        .into_iter()
        .map(|p| {
            let (lo, hi) = hulls.interval(p.to);
            let (lo, hi) = p.map.apply_interval(lo, hi);
            LevelInterval { lo, hi, path: p.edges, to: p.to }
        })
        .collect();
    intervals.sort_by(|a, b| (&a.lo, &a.hi).cmp(&(&b.lo, &b.hi)));
    intervals
}

/// The level-`k` intervals at `vertex`, sorted left to right.
pub fn level_intervals(ifs: &GraphIfs, vertex: VertexId, k: u32) -> Result<IntervalSet, EngineError> {
    check_vertex(ifs, vertex)?;
    check_depth(k, MAX_DEPTH)?;
    let hulls = checked_hulls(ifs)?;
    require_cssc(ifs, &hulls)?;
    Ok(IntervalSet { vertex, level: k, intervals: raw_level_intervals(ifs, &hulls, vertex, k) })
}

/// Multiset of gap lengths: the lengths of the bounded components of
/// `hull \ union of level-k intervals`. Gaps opened at earlier levels
/// persist, so this accumulates levels 1 through `k`.
pub type GapMultiset = BTreeMap<Rational, usize>;

pub fn gap_lengths(ifs: &GraphIfs, vertex: VertexId, k: u32) -> Result<GapMultiset, EngineError> {
    let set = level_intervals(ifs, vertex, k)?;
    let mut gaps = GapMultiset::new();
    for pair in set.intervals.windows(2) {
        let length = &pair[1].lo - &pair[0].hi;
        if length.is_positive() {
            *gaps.entry(length).or_insert(0) += 1;
        }
    }
    Ok(gaps)
}

fn scale_gaps(gaps: &GapMultiset, r: &Rational) -> GapMultiset {
    gaps.iter().map(|(g, &n)| (r * g, n)).collect()
}

fn merge_gaps(into: &mut GapMultiset, from: GapMultiset) {
    for (g, n) in from {
        *into.entry(g).or_insert(0) += n;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapMismatch {
    pub vertex: VertexId,
    pub length: Rational,
    pub direct_count: usize,
    pub recursive_count: usize,
}

#[derive(Debug, Clone)]
pub struct GapFixedPointReport {
    pub holds: bool,
    pub vertices_checked: usize,
    pub mismatch: Option<GapMismatch>,
}

/// Confirms the refinement identity: the gaps of level `k + 1` at `u` are
/// exactly the level-1 gaps at `u` together with the level-`k` gaps at each
/// edge head scaled by the edge ratio. Exact multiset equality.
pub fn verify_gap_fixed_point(ifs: &GraphIfs, k: u32) -> Result<GapFixedPointReport, EngineError> {
    check_depth(k, MAX_DEPTH - 1)?;
    for u in 0..ifs.vertex_count() {
        let direct = gap_lengths(ifs, u, k + 1)?;
        let mut recursive = gap_lengths(ifs, u, 1)?;
        for e in ifs.out_edges(u) {
            merge_gaps(&mut recursive, scale_gaps(&gap_lengths(ifs, e.to, k)?, &e.map.ratio));
        }
        if direct != recursive {
            let length = direct
                .keys()
                .chain(recursive.keys())
                .filter(|g| direct.get(*g) != recursive.get(*g))
                .min()
                .cloned()
                .expect("maps differ");
            let mismatch = GapMismatch {
                vertex: u,
                direct_count: direct.get(&length).copied().unwrap_or(0),
                recursive_count: recursive.get(&length).copied().unwrap_or(0),
                length,
            };
            return Ok(GapFixedPointReport {
                holds: false,
                vertices_checked: u + 1,
                mismatch: Some(mismatch),
            });
        }
    }
    Ok(GapFixedPointReport {
        holds: true,
        vertices_checked: ifs.vertex_count(),
        mismatch: None,
    })
}

/// Level intervals with measure weights, prepared for range queries.
struct DepthData {
    intervals: Vec<LevelInterval>,
    prefix: Vec<f64>,
}

impl DepthData {
    fn build(
        ifs: &GraphIfs,
        hulls: &Hulls,
        vertex: VertexId,
        k: u32,
        s: f64,
        h: &[f64],
    ) -> DepthData {
        let intervals = raw_level_intervals(ifs, hulls, vertex, k);
        let mut prefix = Vec::with_capacity(intervals.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for interval in &intervals {
            let ratio: Rational = interval
                .path
                .iter()
                .map(|id| &ifs.edge_by_id(*id).expect("path edge").map.ratio)
                .product();
            acc += to_f64(&ratio).powf(s) * h[interval.to] / h[vertex];
            prefix.push(acc);
        }
        DepthData { intervals, prefix }
    }

    /// Total weight of intervals contained in `[lo, hi]`.
    fn contained_weight(&self, lo: &Rational, hi: &Rational) -> f64 {
        let i0 = self.intervals.partition_point(|l| l.lo < *lo);
        let i1 = self.intervals.partition_point(|l| l.hi <= *hi);
        if i1 > i0 {
            self.prefix[i1] - self.prefix[i0]
        } else {
            0.0
        }
    }

    /// Total weight of intervals overlapping `(lo, hi)` in a set of positive
    /// length; single-point contact does not count.
    fn overlap_weight(&self, lo: &Rational, hi: &Rational) -> f64 {
        let j0 = self.intervals.partition_point(|l| l.hi <= *lo);
        let j1 = self.intervals.partition_point(|l| l.lo < *hi);
        if j1 > j0 {
            self.prefix[j1] - self.prefix[j0]
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Sandwiches the self-similar measure of the closed interval `[lo, hi]`
/// between the weight of level-`k` intervals inside it and the weight of
/// those meeting its interior.
pub fn measure_of_interval(
    ifs: &GraphIfs,
    s: f64,
    h: &[f64],
    vertex: VertexId,
    lo: &Rational,
    hi: &Rational,
    k: u32,
) -> Result<MeasureBounds, EngineError> {
    check_vertex(ifs, vertex)?;
    check_depth(k, MAX_DEPTH)?;
    let hulls = checked_hulls(ifs)?;
    require_cssc(ifs, &hulls)?;
    let (hull_lo, hull_hi) = hulls.interval(vertex);
    if lo < hull_lo || hi > hull_hi || lo > hi {
        return Err(EngineError::IntervalOutsideHull { lo: lo.clone(), hi: hi.clone() });
    }
    let data = DepthData::build(ifs, &hulls, vertex, k, s, h);
    Ok(MeasureBounds {
        lower: data.contained_weight(lo, hi),
        upper: data.overlap_weight(lo, hi),
    })
}

/// Measure bounds divided by `|J|^s`: the covering density of the interval.
pub fn density(
    ifs: &GraphIfs,
    s: f64,
    h: &[f64],
    vertex: VertexId,
    lo: &Rational,
    hi: &Rational,
    k: u32,
) -> Result<MeasureBounds, EngineError> {
    if lo == hi {
        return Err(EngineError::ZeroLengthInterval);
    }
    let bounds = measure_of_interval(ifs, s, h, vertex, lo, hi, k)?;
    let scale = to_f64(&(hi - lo)).powf(s);
    Ok(MeasureBounds { lower: bounds.lower / scale, upper: bounds.upper / scale })
}

#[derive(Debug, Clone)]
pub struct SupDensityReport {
    pub estimate: f64,
    pub witness: (Rational, Rational),
    pub candidates: usize,
}

/// Scans the natural candidates for the supremum of `mu(J) / |J|^s`: every
/// level-`j` interval for `j <= k`, and every span from one level-`j`
/// interval to the next. Densities are evaluated with the depth-`k` upper
/// bound, so the estimate can sit slightly above a true supremum of 1.
pub fn sup_density_estimate(
    ifs: &GraphIfs,
    s: f64,
    h: &[f64],
    vertex: VertexId,
    k: u32,
) -> Result<SupDensityReport, EngineError> {
    check_vertex(ifs, vertex)?;
    check_depth(k, MAX_SUP_DEPTH)?;
    let hulls = checked_hulls(ifs)?;
    require_cssc(ifs, &hulls)?;
    let data = DepthData::build(ifs, &hulls, vertex, k, s, h);

    let (hull_lo, hull_hi) = hulls.interval(vertex);
    let mut candidates: Vec<(Rational, Rational)> = vec![(hull_lo.clone(), hull_hi.clone())];
    for j in 1..=k {
        let level = raw_level_intervals(ifs, &hulls, vertex, j);
        for pair in level.windows(2) {
            candidates.push((pair[0].lo.clone(), pair[1].hi.clone()));
        }
        candidates.extend(level.into_iter().map(|l| (l.lo, l.hi)));
    }

    let mut best = f64::NEG_INFINITY;
    let mut witness = candidates[0].clone();
    for (lo, hi) in &candidates {
        let value = data.overlap_weight(lo, hi) / to_f64(&(hi - lo)).powf(s);
        if value > best {
            best = value;
            witness = (lo.clone(), hi.clone());
        }
    }
    Ok(SupDensityReport { estimate: best, witness, candidates: candidates.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrichotomyViolationKind {
    /// Hull intervals overlap without one containing the other.
    PartialOverlap,
    /// Hulls are nested but the finite refinements are not.
    RefinementMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrichotomyViolation {
    pub first: Vec<EdgeId>,
    pub second: Vec<EdgeId>,
    pub kind: TrichotomyViolationKind,
}

#[derive(Debug, Clone)]
pub struct TrichotomyReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub nested_pairs: usize,
    pub violations: Vec<TrichotomyViolation>,
}

/// For every pair of distinct cycle paths `p, q` at `vertex` with length at
/// most `max_len`, checks that the images `S_p(hull)` and `S_q(hull)` are
/// equal, disjoint, or properly nested — and that nesting is witnessed by
/// the depth-`refine_depth` refinement: each interval of `S_p` applied to
/// the level-`refine_depth` family must land inside one of `S_q`'s.
/// Separation is deliberately not assumed; this check is what distinguishes
/// genuine refinements from images that merely share territory.
pub fn verify_trichotomy(
    ifs: &GraphIfs,
    vertex: VertexId,
    max_len: u32,
    refine_depth: u32,
) -> Result<TrichotomyReport, EngineError> {
    check_vertex(ifs, vertex)?;
    check_depth(max_len, MAX_CYCLE_LEN)?;
    check_depth(refine_depth, MAX_REFINE_DEPTH)?;
    let hulls = checked_hulls(ifs)?;
    let (hull_lo, hull_hi) = hulls.interval(vertex);

    let mut cycles = Vec::new();
    for len in 1..=max_len {
        let paths = enumerate_paths(ifs, vertex, len).expect("length checked positive");
        cycles.extend(paths.into_iter().filter(|p| p.to == vertex));
    }
    let refinement = raw_level_intervals(ifs, &hulls, vertex, refine_depth);

    let mut pairs_checked = 0;
    let mut nested_pairs = 0;
    let mut violations = Vec::new();
    for i in 0..cycles.len() {
        for j in (i + 1)..cycles.len() {
            pairs_checked += 1;
            let (p, q) = (&cycles[i], &cycles[j]);
            if p.map == q.map {
                continue;
            }
            let (plo, phi) = p.map.apply_interval(hull_lo, hull_hi);
            let (qlo, qhi) = q.map.apply_interval(hull_lo, hull_hi);
            if phi < qlo || qhi < plo {
                continue;
            }
            let (inner, outer) = if qlo <= plo && phi <= qhi {
                (p, q)
            } else if plo <= qlo && qhi <= phi {
                (q, p)
            } else {
                violations.push(TrichotomyViolation {
                    first: p.edges.clone(),
                    second: q.edges.clone(),
                    kind: TrichotomyViolationKind::PartialOverlap,
                });
                continue;
            };
            nested_pairs += 1;
            if !refines(&inner.map, &outer.map, &refinement) {
                violations.push(TrichotomyViolation {
                    first: inner.edges.clone(),
                    second: outer.edges.clone(),
                    kind: TrichotomyViolationKind::RefinementMismatch,
                });
            }
        }
    }
    Ok(TrichotomyReport {
        holds: violations.is_empty(),
        pairs_checked,
        nested_pairs,
        violations,
    })
}

/// Every `inner` image of a refinement interval must land inside some
/// `outer` image. The outer images may overlap each other (separation is
/// not assumed), so containment is checked by scanning candidates.
fn refines(
    inner: &crate::ifs_graph::Similarity,
    outer: &crate::ifs_graph::Similarity,
    refinement: &[LevelInterval],
) -> bool {
    let mut outer_images: Vec<(Rational, Rational)> = refinement
        .iter()
        .map(|l| outer.apply_interval(&l.lo, &l.hi))
        .collect();
    outer_images.sort();
    refinement.iter().all(|l| {
        let (lo, hi) = inner.apply_interval(&l.lo, &l.hi);
        let candidates = outer_images.partition_point(|(olo, _)| *olo <= lo);
        outer_images[..candidates].iter().any(|(_, ohi)| *ohi >= hi)
    })
}
