//! Directed-graph iterated function systems on the real line.
//!
//! A system assigns to every edge `e: u -> v` an orientation-preserving
//! contracting similarity `S_e(x) = r_e x + t_e` with exact rational data.
//! The map carries the space at the edge's head `v` into the space at its
//! tail `u`, so a directed path labels a composition of similarities read
//! left to right. Attractors are the unique nonempty compact sets with
//! `F_u = U_e S_e(F_{t(e)})` over the out-edges of `u`.
//!
//! The module also recognises the canonical two-vertex family on the unit
//! interval: parameters `(a, g_u, b, c, g_v, d)` with `a + g_u + b = 1` and
//! `c + g_v + d = 1`, four edges (two loops, two cross edges) whose level-1
//! images leave a middle gap of length `g_u` resp. `g_v`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{to_f64, Rational};

pub type VertexId = usize;
pub type EdgeId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IfsError {
    #[error("a system needs at least one vertex")]
    NoVertices,
    #[error("edge {edge} touches vertex {vertex}, but the graph has {count} vertices")]
    InvalidVertex { edge: EdgeId, vertex: VertexId, count: usize },
    #[error("edge id {0} appears more than once")]
    DuplicateEdgeId(EdgeId),
    #[error("similarity ratio of edge {edge} must lie strictly between 0 and 1")]
    RatioOutOfRange { edge: EdgeId },
    #[error("the graph is not strongly connected")]
    NotStronglyConnected,
    #[error("vertex {vertex} has out-degree {found}; every vertex needs at least two out-edges")]
    OutDegreeTooSmall { vertex: VertexId, found: usize },
    #[error("family parameter {name} must be positive")]
    NonPositiveParameter { name: &'static str },
    #[error("family parameters at vertex {vertex} must sum to 1")]
    SumNotOne { vertex: &'static str },
    #[error("paths must have length at least 1")]
    ZeroPathLength,
}

/// `x -> ratio * x + translation` with `0 < ratio < 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Similarity {
    pub ratio: Rational,
    pub translation: Rational,
}

impl Similarity {
    pub fn new(ratio: Rational, translation: Rational) -> Self {
        Similarity { ratio, translation }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.ratio * x + &self.translation
    }

    pub fn apply_f64(&self, x: f64) -> f64 {
        to_f64(&self.ratio) * x + to_f64(&self.translation)
    }

    /// Image of `[lo, hi]`; order is preserved because the ratio is positive.
    pub fn apply_interval(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        (self.apply(lo), self.apply(hi))
    }

    /// `self . other`, the map applying `other` first.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        Similarity {
            ratio: &self.ratio * &other.ratio,
            translation: &self.ratio * &other.translation + &self.translation,
        }
    }

    /// The unique fixed point `t / (1 - r)` of a contraction.
    pub fn fixed_point(&self) -> Rational {
        &self.translation / (Rational::one() - &self.ratio)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub map: Similarity,
}

/// A validated system: strongly connected, out-degree at least two,
/// all ratios strictly inside (0, 1). Edges are kept sorted by id and all
/// per-vertex traversals run in id order, so derived enumerations are
/// deterministic.
#[derive(Debug, Clone)]
pub struct GraphIfs {
    vertex_count: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>, // indices into `edges`, ascending edge id
}

impl GraphIfs {
    pub fn new(vertex_count: usize, mut edges: Vec<Edge>) -> Result<Self, IfsError> {
        if vertex_count == 0 {
            return Err(IfsError::NoVertices);
        }
        let one = Rational::one();
        let mut seen = BTreeSet::new();
        for e in &edges {
            for vertex in [e.from, e.to] {
                if vertex >= vertex_count {
                    return Err(IfsError::InvalidVertex { edge: e.id, vertex, count: vertex_count });
                }
            }
            if !seen.insert(e.id) {
                return Err(IfsError::DuplicateEdgeId(e.id));
            }
            if !e.map.ratio.is_positive() || e.map.ratio >= one {
                return Err(IfsError::RatioOutOfRange { edge: e.id });
            }
        }
        edges.sort_by_key(|e| e.id);

        let mut out = vec![Vec::new(); vertex_count];
        let mut incoming = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            out[e.from].push(i);
            incoming[e.to].push(e.from);
        }
        let forward: Vec<Vec<VertexId>> = out
            .iter()
            .map(|ix| ix.iter().map(|&i| edges[i].to).collect())
            .collect();
        if reachable_from_zero(&forward) != vertex_count
            || reachable_from_zero(&incoming) != vertex_count
        {
            return Err(IfsError::NotStronglyConnected);
        }
        for (vertex, ix) in out.iter().enumerate() {
            if ix.len() < 2 {
                return Err(IfsError::OutDegreeTooSmall { vertex, found: ix.len() });
            }
        }
        Ok(GraphIfs { vertex_count, edges, out })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, vertex: VertexId) -> impl Iterator<Item = &Edge> {
        self.out[vertex].iter().map(move |&i| &self.edges[i])
    }

    pub fn edge_by_id(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok().map(|i| &self.edges[i])
    }
}

fn reachable_from_zero(adjacency: &[Vec<VertexId>]) -> usize {
    let mut seen = vec![false; adjacency.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 0;
    while let Some(u) = stack.pop() {
        count += 1;
        for &v in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    count
}

/// The two-vertex family on the unit interval. Vertex 0 plays the role of
/// `u`, vertex 1 of `v`; both attractor hulls are exactly [0, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalFamily {
    pub a: Rational,
    pub g_u: Rational,
    pub b: Rational,
    pub c: Rational,
    pub g_v: Rational,
    pub d: Rational,
}

impl CanonicalFamily {
    pub fn new(
        a: Rational,
        g_u: Rational,
        b: Rational,
        c: Rational,
        g_v: Rational,
        d: Rational,
    ) -> Result<Self, IfsError> {
        let family = CanonicalFamily { a, g_u, b, c, g_v, d };
        for (name, value) in family.parameters() {
            if !value.is_positive() {
                return Err(IfsError::NonPositiveParameter { name });
            }
        }
        let one = Rational::one();
        if &family.a + &family.g_u + &family.b != one {
            return Err(IfsError::SumNotOne { vertex: "u" });
        }
        if &family.c + &family.g_v + &family.d != one {
            return Err(IfsError::SumNotOne { vertex: "v" });
        }
        Ok(family)
    }

    pub fn parameters(&self) -> [(&'static str, &Rational); 6] {
        [
            ("a", &self.a),
            ("g_u", &self.g_u),
            ("b", &self.b),
            ("c", &self.c),
            ("g_v", &self.g_v),
            ("d", &self.d),
        ]
    }

    pub fn equal_cross_ratios(&self) -> bool {
        self.b == self.d
    }

    /// The same system with the roles of the two vertices exchanged.
    pub fn swapped(&self) -> CanonicalFamily {
        CanonicalFamily {
            a: self.c.clone(),
            g_u: self.g_v.clone(),
            b: self.d.clone(),
            c: self.a.clone(),
            g_v: self.g_u.clone(),
            d: self.b.clone(),
        }
    }

    /// Edges 1..4: loop at u, cross u -> v, loop at v, cross v -> u.
    pub fn to_ifs(&self) -> GraphIfs {
        let zero = Rational::zero;
        let edges = vec![
            Edge { id: 1, from: 0, to: 0, map: Similarity::new(self.a.clone(), zero()) },
            Edge {
                id: 2,
                from: 0,
                to: 1,
                map: Similarity::new(self.b.clone(), &self.a + &self.g_u),
            },
            Edge { id: 3, from: 1, to: 1, map: Similarity::new(self.c.clone(), zero()) },
            Edge {
                id: 4,
                from: 1,
                to: 0,
                map: Similarity::new(self.d.clone(), &self.c + &self.g_v),
            },
        ];
        GraphIfs::new(2, edges).expect("validated family parameters build a valid system")
    }

    /// Recognises a system of the canonical shape regardless of edge ids.
    pub fn from_ifs(ifs: &GraphIfs) -> Option<CanonicalFamily> {
        if ifs.vertex_count() != 2 || ifs.edges().len() != 4 {
            return None;
        }
        let mut slot = [[None, None], [None, None]];
        for e in ifs.edges() {
            let cell = &mut slot[e.from][e.to];
            if cell.is_some() {
                return None; // parallel edges never match the family shape
            }
            *cell = Some(&e.map);
        }
        let (loop_u, cross_uv) = (slot[0][0]?, slot[0][1]?);
        let (loop_v, cross_vu) = (slot[1][1]?, slot[1][0]?);
        if !loop_u.translation.is_zero() || !loop_v.translation.is_zero() {
            return None;
        }
        let a = loop_u.ratio.clone();
        let b = cross_uv.ratio.clone();
        let g_u = &cross_uv.translation - &a;
        let c = loop_v.ratio.clone();
        let d = cross_vu.ratio.clone();
        let g_v = &cross_vu.translation - &c;
        CanonicalFamily::new(a, g_u, b, c, g_v, d).ok()
    }
}

pub fn canonical_two_vertex(
    a: Rational,
    g_u: Rational,
    b: Rational,
    c: Rational,
    g_v: Rational,
    d: Rational,
) -> Result<GraphIfs, IfsError> {
    Ok(CanonicalFamily::new(a, g_u, b, c, g_v, d)?.to_ifs())
}

/// A directed path together with the composite similarity it labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathLabel {
    pub edges: Vec<EdgeId>,
    pub from: VertexId,
    pub to: VertexId,
    pub ratio: Rational,
    pub map: Similarity,
}

/// All paths of exactly `k` edges leaving `from`, ordered lexicographically
/// by edge id sequence. The composite map is `S_{e_1} . ... . S_{e_k}`.
pub fn enumerate_paths(ifs: &GraphIfs, from: VertexId, k: u32) -> Result<Vec<PathLabel>, IfsError> {
    if k == 0 {
        return Err(IfsError::ZeroPathLength);
    }
    let mut results = Vec::new();
    let mut prefix: Vec<EdgeId> = Vec::with_capacity(k as usize);
    walk(ifs, from, from, k, &mut prefix, &identity(), &mut results);
    Ok(results)
}

fn identity() -> Similarity {
    Similarity::new(Rational::one(), Rational::zero())
}

fn walk(
    ifs: &GraphIfs,
    from: VertexId,
    at: VertexId,
    remaining: u32,
    prefix: &mut Vec<EdgeId>,
    map: &Similarity,
    results: &mut Vec<PathLabel>,
) {
    if remaining == 0 {
        results.push(PathLabel {
            edges: prefix.clone(),
            from,
            to: at,
            ratio: map.ratio.clone(),
            map: map.clone(),
        });
        return;
    }
    for e in ifs.out_edges(at) {
        prefix.push(e.id);
        walk(ifs, from, e.to, remaining - 1, prefix, &map.compose(&e.map), results);
        prefix.pop();
    }
}

/// Convex hulls `[lo_u, hi_u]` of the attractor components.
#[derive(Debug, Clone)]
pub struct Hulls {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
    /// Whether the endpoint iteration reached an exact fixed point.
    pub exact: bool,
    pub iterations: u32,
}

impl Hulls {
    pub fn interval(&self, vertex: VertexId) -> (&Rational, &Rational) {
        (&self.lo[vertex], &self.hi[vertex])
    }

    pub fn length(&self, vertex: VertexId) -> Rational {
        &self.hi[vertex] - &self.lo[vertex]
    }
}

const EXACT_PHASE_CAP: u32 = 512;
const TOTAL_ITERATION_CAP: u32 = 10_000;
const HULL_TOLERANCE: f64 = 1e-12;

/// Iterates the endpoint map `lo_u <- min_e S_e(lo_{t(e)})`,
/// `hi_u <- max_e S_e(hi_{t(e)})` from the fixed points of the edge maps.
/// The iteration contracts at the worst ratio of the system, and for many
/// systems (the canonical family among them) it lands on the exact hull after
/// one step. Exact arithmetic is abandoned once denominators have had time to
/// blow up; the remaining steps run in floating point and the result is
/// flagged as approximate.
pub fn compute_hulls(ifs: &GraphIfs) -> Hulls {
    let m = ifs.vertex_count();
    let mut lo = vec![None::<Rational>; m];
    let mut hi = vec![None::<Rational>; m];
    for e in ifs.edges() {
        let p = e.map.fixed_point();
        let (l, h) = (&mut lo[e.from], &mut hi[e.from]);
        if l.as_ref().is_none_or(|cur| p < *cur) {
            *l = Some(p.clone());
        }
        if h.as_ref().is_none_or(|cur| p > *cur) {
            *h = Some(p);
        }
    }
    let mut lo: Vec<Rational> = lo.into_iter().map(|x| x.expect("out-degree >= 2")).collect();
    let mut hi: Vec<Rational> = hi.into_iter().map(|x| x.expect("out-degree >= 2")).collect();

    let mut iterations = 0;
    while iterations < EXACT_PHASE_CAP {
        let (next_lo, next_hi) = endpoint_step(ifs, &lo, &hi);
        iterations += 1;
        let fixed = next_lo == lo && next_hi == hi;
        let sup = sup_distance(&lo, &next_lo).max(sup_distance(&hi, &next_hi));
        lo = next_lo;
        hi = next_hi;
        if fixed {
            return Hulls { lo, hi, exact: true, iterations };
        }
        if sup <= HULL_TOLERANCE {
            return Hulls { lo, hi, exact: false, iterations };
        }
    }

    // Float phase for slowly converging systems.
    let mut flo: Vec<f64> = lo.iter().map(to_f64).collect();
    let mut fhi: Vec<f64> = hi.iter().map(to_f64).collect();
    while iterations < TOTAL_ITERATION_CAP {
        let mut next_lo = vec![f64::INFINITY; m];
        let mut next_hi = vec![f64::NEG_INFINITY; m];
        for e in ifs.edges() {
            next_lo[e.from] = next_lo[e.from].min(e.map.apply_f64(flo[e.to]));
            next_hi[e.from] = next_hi[e.from].max(e.map.apply_f64(fhi[e.to]));
        }
        iterations += 1;
        let sup = flo
            .iter()
            .zip(&next_lo)
            .chain(fhi.iter().zip(&next_hi))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        flo = next_lo;
        fhi = next_hi;
        if sup <= HULL_TOLERANCE {
            break;
        }
    }
    let back = |x: f64, fallback: &Rational| Rational::from_float(x).unwrap_or_else(|| fallback.clone());
    let lo = flo.iter().zip(&lo).map(|(&x, r)| back(x, r)).collect();
    let hi = fhi.iter().zip(&hi).map(|(&x, r)| back(x, r)).collect();
    Hulls { lo, hi, exact: false, iterations }
}

fn endpoint_step(
    ifs: &GraphIfs,
    lo: &[Rational],
    hi: &[Rational],
) -> (Vec<Rational>, Vec<Rational>) {
    let m = ifs.vertex_count();
    let mut next_lo = vec![None::<Rational>; m];
    let mut next_hi = vec![None::<Rational>; m];
    for e in ifs.edges() {
        let l = e.map.apply(&lo[e.to]);
        let h = e.map.apply(&hi[e.to]);
        if next_lo[e.from].as_ref().is_none_or(|cur| l < *cur) {
            next_lo[e.from] = Some(l);
        }
        if next_hi[e.from].as_ref().is_none_or(|cur| h > *cur) {
            next_hi[e.from] = Some(h);
        }
    }
    (
        next_lo.into_iter().map(|x| x.unwrap()).collect(),
        next_hi.into_iter().map(|x| x.unwrap()).collect(),
    )
}

fn sup_distance(a: &[Rational], b: &[Rational]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| to_f64(&(x - y)).abs())
        .fold(0.0, f64::max)
}

/// Two out-edges of the same vertex whose level-1 intervals touch or overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsscViolation {
    pub vertex: VertexId,
    pub first: EdgeId,
    pub second: EdgeId,
}

/// Outcome of the convex strong separation check: at every vertex the closed
/// intervals `S_e(hull(t(e)))` over the out-edges must be pairwise disjoint.
#[derive(Debug, Clone)]
pub struct CsscReport {
    pub holds: bool,
    /// False when the hull endpoints themselves are approximate.
    pub exact: bool,
    pub violations: Vec<CsscViolation>,
}

pub fn check_cssc(ifs: &GraphIfs) -> CsscReport {
    check_cssc_with(ifs, &compute_hulls(ifs))
}

pub fn check_cssc_with(ifs: &GraphIfs, hulls: &Hulls) -> CsscReport {
    let mut violations = Vec::new();
    for u in 0..ifs.vertex_count() {
        let mut images: Vec<(Rational, Rational, EdgeId)> = ifs
            .out_edges(u)
            .map(|e| {
                let (lo, hi) = hulls.interval(e.to);
                let (l, h) = e.map.apply_interval(lo, hi);
                (l, h, e.id)
            })
            .collect();
        images.sort();
        for pair in images.windows(2) {
            if pair[0].1 >= pair[1].0 {
                violations.push(CsscViolation {
                    vertex: u,
                    first: pair[0].2,
                    second: pair[1].2,
                });
            }
        }
    }
    CsscReport { holds: violations.is_empty(), exact: hulls.exact, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn edge(id: EdgeId, from: VertexId, to: VertexId, r: Rational, t: Rational) -> Edge {
        Edge { id, from, to, map: Similarity::new(r, t) }
    }

    /// Loops 1/4 and 1/7, cross ratios both 1/3, middle gaps 5/12 and 11/21.
    fn family_c() -> CanonicalFamily {
        CanonicalFamily::new(rat(1, 4), rat(5, 12), rat(1, 3), rat(1, 7), rat(11, 21), rat(1, 3))
            .unwrap()
    }

    #[test]
    fn rejects_two_vertices_joined_one_way() {
        let err = GraphIfs::new(
            2,
            vec![
                edge(1, 0, 1, rat(1, 3), rat_int(0)),
                edge(2, 0, 1, rat(1, 3), rat(2, 3)),
            ],
        )
        .unwrap_err();
        assert_eq!(err, IfsError::NotStronglyConnected);
    }

    #[test]
    fn rejects_single_loop_vertex() {
        let err = GraphIfs::new(1, vec![edge(1, 0, 0, rat(1, 2), rat_int(0))]).unwrap_err();
        assert_eq!(err, IfsError::OutDegreeTooSmall { vertex: 0, found: 1 });
    }

    #[test]
    fn rejects_bad_ratios_and_ids() {
        let build = |r: Rational| {
            GraphIfs::new(
                1,
                vec![edge(1, 0, 0, r, rat_int(0)), edge(2, 0, 0, rat(1, 3), rat(2, 3))],
            )
        };
        assert_eq!(build(rat_int(1)).unwrap_err(), IfsError::RatioOutOfRange { edge: 1 });
        assert_eq!(build(rat_int(0)).unwrap_err(), IfsError::RatioOutOfRange { edge: 1 });
        assert_eq!(build(rat(-1, 2)).unwrap_err(), IfsError::RatioOutOfRange { edge: 1 });

        let err = GraphIfs::new(
            1,
            vec![edge(7, 0, 0, rat(1, 3), rat_int(0)), edge(7, 0, 0, rat(1, 3), rat(2, 3))],
        )
        .unwrap_err();
        assert_eq!(err, IfsError::DuplicateEdgeId(7));

        let err = GraphIfs::new(
            1,
            vec![edge(1, 0, 1, rat(1, 3), rat_int(0)), edge(2, 0, 0, rat(1, 3), rat(2, 3))],
        )
        .unwrap_err();
        assert_eq!(err, IfsError::InvalidVertex { edge: 1, vertex: 1, count: 1 });
    }

    #[test]
    fn family_validation() {
        assert!(family_c().equal_cross_ratios());

        let err = CanonicalFamily::new(
            rat(1, 2),
            rat(1, 4),
            rat(1, 3),
            rat(1, 7),
            rat(11, 21),
            rat(1, 3),
        )
        .unwrap_err();
        assert_eq!(err, IfsError::SumNotOne { vertex: "u" });

        let err = CanonicalFamily::new(
            rat(1, 4),
            rat_int(0),
            rat(3, 4),
            rat(1, 7),
            rat(11, 21),
            rat(1, 3),
        )
        .unwrap_err();
        assert_eq!(err, IfsError::NonPositiveParameter { name: "g_u" });
    }

    #[test]
    fn family_round_trips_through_graph_form() {
        let family = family_c();
        let ifs = family.to_ifs();
        assert_eq!(CanonicalFamily::from_ifs(&ifs), Some(family.clone()));
        assert_eq!(family.swapped().swapped(), family);

        let swapped = family.swapped();
        assert_eq!(swapped.a, rat(1, 7));
        assert_eq!(swapped.g_u, rat(11, 21));
    }

    #[test]
    fn detection_rejects_translated_loops() {
        let ifs = GraphIfs::new(
            2,
            vec![
                edge(1, 0, 0, rat(1, 4), rat(1, 100)),
                edge(2, 0, 1, rat(1, 3), rat(2, 3)),
                edge(3, 1, 1, rat(1, 7), rat_int(0)),
                edge(4, 1, 0, rat(1, 3), rat(2, 3)),
            ],
        )
        .unwrap();
        assert_eq!(CanonicalFamily::from_ifs(&ifs), None);
    }

    #[test]
    fn path_enumeration_is_lexicographic() {
        let ifs = family_c().to_ifs();
        let level1: Vec<Vec<EdgeId>> =
            enumerate_paths(&ifs, 0, 1).unwrap().into_iter().map(|p| p.edges).collect();
        assert_eq!(level1, vec![vec![1], vec![2]]);

        let level2 = enumerate_paths(&ifs, 0, 2).unwrap();
        let edges: Vec<Vec<EdgeId>> = level2.iter().map(|p| p.edges.clone()).collect();
        assert_eq!(edges, vec![vec![1, 1], vec![1, 2], vec![2, 3], vec![2, 4]]);

        // S_2 . S_4 scales by bd = 1/9 and sends 0 to b(c + g_v) + a + g_u = 8/9.
        let cross = &level2[3];
        assert_eq!(cross.to, 0);
        assert_eq!(cross.ratio, rat(1, 9));
        assert_eq!(cross.map, Similarity::new(rat(1, 9), rat(8, 9)));

        assert_eq!(enumerate_paths(&ifs, 0, 3).unwrap().len(), 8);
        assert_eq!(enumerate_paths(&ifs, 0, 0).unwrap_err(), IfsError::ZeroPathLength);
    }

    #[test]
    fn hulls_of_the_family_are_the_unit_interval() {
        let hulls = compute_hulls(&family_c().to_ifs());
        assert!(hulls.exact);
        assert_eq!(hulls.interval(0), (&rat_int(0), &rat_int(1)));
        assert_eq!(hulls.interval(1), (&rat_int(0), &rat_int(1)));
        assert_eq!(hulls.length(0), rat_int(1));
    }

    #[test]
    fn hulls_of_single_vertex_systems() {
        let cantor = GraphIfs::new(
            1,
            vec![edge(1, 0, 0, rat(1, 3), rat_int(0)), edge(2, 0, 0, rat(1, 3), rat(2, 3))],
        )
        .unwrap();
        let hulls = compute_hulls(&cantor);
        assert!(hulls.exact);
        assert_eq!(hulls.interval(0), (&rat_int(0), &rat_int(1)));

        let spread = GraphIfs::new(
            1,
            vec![edge(1, 0, 0, rat(1, 2), rat_int(0)), edge(2, 0, 0, rat(1, 2), rat_int(1))],
        )
        .unwrap();
        let hulls = compute_hulls(&spread);
        assert!(hulls.exact);
        assert_eq!(hulls.interval(0), (&rat_int(0), &rat_int(2)));
    }

    #[test]
    fn separation_check_on_the_family() {
        let report = check_cssc(&family_c().to_ifs());
        assert!(report.holds);
        assert!(report.exact);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn separation_check_rejects_touching_intervals() {
        let touching = GraphIfs::new(
            1,
            vec![edge(1, 0, 0, rat(1, 2), rat_int(0)), edge(2, 0, 0, rat(1, 2), rat(1, 2))],
        )
        .unwrap();
        let report = check_cssc(&touching);
        assert!(!report.holds);
        assert_eq!(
            report.violations,
            vec![CsscViolation { vertex: 0, first: 1, second: 2 }]
        );
    }

    #[test]
    fn separation_check_rejects_overlapping_intervals() {
        // Level-1 images [0, 1/3], [4/27, 5/27], [2/3, 1]: the second sits
        // inside the first.
        let overlapping = GraphIfs::new(
            1,
            vec![
                edge(1, 0, 0, rat(1, 3), rat_int(0)),
                edge(2, 0, 0, rat(1, 27), rat(4, 27)),
                edge(3, 0, 0, rat(1, 3), rat(2, 3)),
            ],
        )
        .unwrap();
        let report = check_cssc(&overlapping);
        assert!(!report.holds);
        assert_eq!(report.violations[0], CsscViolation { vertex: 0, first: 1, second: 2 });
    }
}
