//! Structural analysis of the directed graph (simple cycles, simple paths,
//! chains) and certificates showing that an attractor of a multi-vertex
//! system is not the attractor of any single-vertex IFS on the line.
//!
//! Two families of exclusion rules are applied. The *full-measure* rules
//! need the measure conditions of the canonical two-vertex family to be
//! certified and a short list of parameters to be multiplicatively
//! independent; they exclude single-vertex systems outright, with or
//! without separation conditions. The *gap-set* rules compare gap-length
//! sets instead; they need only convex strong separation plus independence,
//! and exclude the attractor among single-vertex systems that themselves
//! satisfy convex strong separation.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dimension_solver::{solve_dimension, SolverError, DEFAULT_TOLERANCE};
use crate::gap_algebra::{is_multiplicatively_independent, AlgebraError, IndependenceReport};
use crate::ifs_graph::{
    check_cssc, CanonicalFamily, EdgeId, GraphIfs, IfsError, PathLabel, Similarity, VertexId,
};
use crate::interval_engine::{gap_lengths, EngineError};
use crate::measure_certifier::{certify, CertificationStatus, CertifierError, ConditionReport};
use crate::rational::{format_rational, Rational};

#[derive(Debug, thiserror::Error)]
pub enum ClassifierError {
    #[error("vertex {vertex} out of range for a {vertex_count}-vertex system")]
    InvalidVertex { vertex: VertexId, vertex_count: usize },
    #[error(transparent)]
    Graph(#[from] IfsError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Certifier(#[from] CertifierError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A cycle visiting no vertex twice, stored in its canonical rotation: the
/// traversal starts at the smallest vertex id on the cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleCycle {
    pub edges: Vec<EdgeId>,
    /// Vertices in traversal order from the canonical start; one per edge.
    pub vertices: Vec<VertexId>,
    pub ratio: Rational,
}

impl SimpleCycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Two cycles are attached when their vertex lists intersect.
    pub fn attached_to(&self, other: &SimpleCycle) -> bool {
        self.vertices.iter().any(|v| other.vertices.contains(v))
    }
}

/// All simple cycles, each in canonical rotation, sorted by length and then
/// lexicographically by edge ids. Every cycle is discovered exactly once by
/// rooting the search at its smallest vertex and only walking through larger
/// vertices.
pub fn simple_cycles(ifs: &GraphIfs) -> Vec<SimpleCycle> {
    let n = ifs.vertex_count();
    let mut found = Vec::new();
    for root in 0..n {
        let mut on_path = vec![false; n];
        let mut stack = Vec::new();
        cycle_search(ifs, root, root, &mut on_path, &mut stack, &mut found);
    }
    found.sort_by(|x, y| (x.edges.len(), &x.edges).cmp(&(y.edges.len(), &y.edges)));
    found
}

fn cycle_search(
    ifs: &GraphIfs,
    root: VertexId,
    at: VertexId,
    on_path: &mut [bool],
    stack: &mut Vec<EdgeId>,
    found: &mut Vec<SimpleCycle>,
) {
    for e in ifs.out_edges(at) {
        if e.to == root {
            stack.push(e.id);
            found.push(close_cycle(ifs, root, stack));
            stack.pop();
        } else if e.to > root && !on_path[e.to] {
            on_path[e.to] = true;
            stack.push(e.id);
            cycle_search(ifs, root, e.to, on_path, stack, found);
            stack.pop();
            on_path[e.to] = false;
        }
    }
}

fn close_cycle(ifs: &GraphIfs, root: VertexId, edges: &[EdgeId]) -> SimpleCycle {
    let mut vertices = Vec::with_capacity(edges.len());
    let mut ratio = Rational::one();
    let mut at = root;
    for &id in edges {
        let e = edge_by_id(ifs, id);
        vertices.push(at);
        ratio *= &e.map.ratio;
        at = e.to;
    }
    SimpleCycle { edges: edges.to_vec(), vertices, ratio }
}

fn edge_by_id(ifs: &GraphIfs, id: EdgeId) -> &crate::ifs_graph::Edge {
    let edges = ifs.edges();
    let idx = edges
        .binary_search_by_key(&id, |e| e.id)
        .expect("edge id recorded during the walk");
    &edges[idx]
}

/// All paths from `from` to `to` that visit no vertex twice, sorted by
/// length and then lexicographically by edge ids. With `from == to` the
/// result is empty; cycles are enumerated separately.
pub fn simple_paths(ifs: &GraphIfs, from: VertexId, to: VertexId) -> Vec<PathLabel> {
    debug_assert_ne!(from, to, "simple paths connect distinct vertices");
    let mut found = Vec::new();
    if from == to {
        return found;
    }
    let mut visited = vec![false; ifs.vertex_count()];
    visited[from] = true;
    let mut stack = Vec::new();
    path_search(ifs, from, from, to, &identity(), &mut visited, &mut stack, &mut found);
    found.sort_by(|x, y| (x.edges.len(), &x.edges).cmp(&(y.edges.len(), &y.edges)));
    found
}

fn identity() -> Similarity {
    Similarity::new(Rational::one(), Rational::zero())
}

#[allow(clippy::too_many_arguments)]
fn path_search(
    ifs: &GraphIfs,
    from: VertexId,
    at: VertexId,
    to: VertexId,
    map: &Similarity,
    visited: &mut [bool],
    stack: &mut Vec<EdgeId>,
    found: &mut Vec<PathLabel>,
) {
    for e in ifs.out_edges(at) {
        let extended = map.compose(&e.map);
        if e.to == to {
            stack.push(e.id);
            found.push(PathLabel {
                edges: stack.clone(),
                from,
                to,
                ratio: extended.ratio.clone(),
                map: extended.clone(),
            });
            stack.pop();
        } else if !visited[e.to] {
            visited[e.to] = true;
            stack.push(e.id);
            path_search(ifs, from, e.to, to, &extended, visited, stack, found);
            stack.pop();
            visited[e.to] = false;
        }
    }
}

/// A sequence of distinct simple cycles in which each cycle shares a vertex
/// with its immediate predecessor and successor and with no other cycle in
/// the sequence. The first cycle passes through the attachment vertex; no
/// later cycle does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub cycles: Vec<SimpleCycle>,
    pub vertex: VertexId,
}

impl Chain {
    pub fn contains(&self, cycle: &SimpleCycle) -> bool {
        self.cycles.contains(cycle)
    }
}

/// All chains of length at most `max_length` attached to `vertex`, in
/// depth-first order (every prefix of a listed chain is listed before it).
pub fn chains_attached(ifs: &GraphIfs, vertex: VertexId, max_length: usize) -> Vec<Chain> {
    debug_assert!(max_length >= 1, "a chain has at least one cycle");
    let cycles = simple_cycles(ifs);
    let mut found = Vec::new();
    let mut prefix: Vec<SimpleCycle> = Vec::new();
    for first in cycles.iter().filter(|c| c.contains_vertex(vertex)) {
        prefix.push(first.clone());
        found.push(Chain { cycles: prefix.clone(), vertex });
        extend_chain(&cycles, vertex, max_length, &mut prefix, &mut found);
        prefix.pop();
    }
    found
}

fn extend_chain(
    cycles: &[SimpleCycle],
    vertex: VertexId,
    max_length: usize,
    prefix: &mut Vec<SimpleCycle>,
    found: &mut Vec<Chain>,
) {
    if prefix.len() >= max_length {
        return;
    }
    for next in cycles {
        if next.contains_vertex(vertex) || prefix.contains(next) {
            continue;
        }
        let last = prefix.last().expect("prefix starts non-empty");
        if !next.attached_to(last) {
            continue;
        }
        // Attachment to anything before the immediate predecessor breaks
        // the chain shape.
        if prefix[..prefix.len() - 1].iter().any(|earlier| next.attached_to(earlier)) {
            continue;
        }
        prefix.push(next.clone());
        found.push(Chain { cycles: prefix.clone(), vertex });
        extend_chain(cycles, vertex, max_length, prefix, found);
        prefix.pop();
    }
}

/// Outcome of the subgraph search: three distinct simple cycles `c1`, `c2`,
/// `c3` such that `c1` passes through the vertex, `(c2, c3)` is a chain of
/// length two attached to the vertex, and no chain attached to the vertex
/// contains both `c1` and `c3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub found: bool,
    pub cycles: Option<(SimpleCycle, SimpleCycle, SimpleCycle)>,
}

pub fn cycle_triple_structure(ifs: &GraphIfs, vertex: VertexId) -> StructureReport {
    let cycles = simple_cycles(ifs);
    // Chains carry distinct cycles, so their length never exceeds the
    // number of simple cycles in the graph.
    let chains = chains_attached(ifs, vertex, cycles.len().max(1));
    for c1 in cycles.iter().filter(|c| c.contains_vertex(vertex)) {
        for chain in chains.iter().filter(|ch| ch.cycles.len() == 2) {
            let (c2, c3) = (&chain.cycles[0], &chain.cycles[1]);
            if c1 == c2 {
                continue; // the three cycles must be distinct
            }
            let blocked = chains.iter().any(|ch| ch.contains(c1) && ch.contains(c3));
            if !blocked {
                return StructureReport {
                    found: true,
                    cycles: Some((c1.clone(), c2.clone(), c3.clone())),
                };
            }
        }
    }
    StructureReport { found: false, cycles: None }
}

/// The independence hypothesis set for the gap-set argument at `vertex`:
/// every level-1 gap length at every vertex, every simple-cycle ratio, and
/// every simple-path ratio leaving `vertex`. Deduplicated and sorted
/// ascending. Requires exact hulls and convex strong separation, since gap
/// lengths are only defined under those.
pub fn independence_set(ifs: &GraphIfs, vertex: VertexId) -> Result<Vec<Rational>, ClassifierError> {
    if vertex >= ifs.vertex_count() {
        return Err(ClassifierError::InvalidVertex { vertex, vertex_count: ifs.vertex_count() });
    }
    let mut values: Vec<Rational> = Vec::new();
    for w in 0..ifs.vertex_count() {
        values.extend(gap_lengths(ifs, w, 1)?.into_keys());
    }
    for cycle in simple_cycles(ifs) {
        values.push(cycle.ratio);
    }
    for w in (0..ifs.vertex_count()).filter(|&w| w != vertex) {
        values.extend(simple_paths(ifs, vertex, w).into_iter().map(|p| p.ratio));
    }
    values.sort();
    values.dedup();
    Ok(values)
}

/// How far an exclusion verdict reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusionScope {
    /// Excluded among all single-vertex systems, with or without
    /// separation conditions.
    AllSystems,
    /// Excluded among single-vertex systems satisfying convex strong
    /// separation.
    CsscSystems,
}

impl std::fmt::Display for ExclusionScope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExclusionScope::AllSystems => "all single-vertex systems",
            ExclusionScope::CsscSystems => {
                "single-vertex systems with convex strong separation"
            }
        })
    }
}

/// The rule a certificate cites. Tags are stable identifiers used in
/// reports and machine output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CitedRule {
    /// Two-vertex family, certified unit measure, independent
    /// `{g_u, g_v, a, b, c, d}`.
    FullMeasureExclusion,
    /// Variant with equal cross ratios `b = d` and independent
    /// `{g_u, g_v, a, b, c}`.
    FullMeasureExclusionEqualRatios,
    /// Two-vertex family under separation, gap-set argument, `b = d`.
    GapSetExclusionEqualRatios,
    /// Two-vertex family under separation, gap-set argument, general ratios.
    GapSetExclusion,
    /// Any graph under separation containing the cycle-triple subgraph.
    SubgraphGapExclusion,
}

impl CitedRule {
    pub fn tag(&self) -> &'static str {
        match self {
            CitedRule::FullMeasureExclusion => "2GthmU",
            CitedRule::FullMeasureExclusionEqualRatios => "2GthmV",
            CitedRule::GapSetExclusionEqualRatios => "corC",
            CitedRule::GapSetExclusion => "corCb",
            CitedRule::SubgraphGapExclusion => "thmA",
        }
    }

    pub fn scope(&self) -> ExclusionScope {
        match self {
            CitedRule::FullMeasureExclusion | CitedRule::FullMeasureExclusionEqualRatios => {
                ExclusionScope::AllSystems
            }
            _ => ExclusionScope::CsscSystems,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NotOneVertexAttractor(ExclusionScope),
    Inconclusive,
    NotApplicable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::NotOneVertexAttractor(scope) => {
                write!(f, "not a one-vertex attractor (among {scope})")
            }
            Verdict::Inconclusive => f.write_str("inconclusive"),
            Verdict::NotApplicable => f.write_str("not applicable"),
        }
    }
}

/// The values whose multiplicative independence was tested, with named
/// roles when they come from the two-vertex family, and the outcome.
#[derive(Debug, Clone)]
pub struct IndependenceEvidence {
    pub names: Vec<String>,
    pub values: Vec<Rational>,
    pub report: IndependenceReport,
}

impl IndependenceEvidence {
    /// Renders a dependence witness as `name1^m1 * ... = 1`.
    pub fn relation(&self) -> Option<String> {
        let witness = self.report.witness.as_ref()?;
        let mut parts = Vec::new();
        for (name, m) in self.names.iter().zip(witness) {
            if m.is_zero() {
                continue;
            }
            if *m == BigInt::one() {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{m}"));
            }
        }
        Some(format!("{} = 1", parts.join(" * ")))
    }
}

/// A machine-checked classification of the attractor at one vertex.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub vertex: VertexId,
    pub verdict: Verdict,
    pub rule: Option<CitedRule>,
    /// Hausdorff dimension of the system, when the solve succeeds.
    pub dimension: Option<f64>,
    /// Measure-condition report, oriented so the queried vertex plays `u`.
    pub conditions: Option<ConditionReport>,
    pub independence: Option<IndependenceEvidence>,
    pub structure: Option<StructureReport>,
    pub reason: String,
}

/// Decides whether the attractor at `vertex` can be written off as not the
/// attractor of any single-vertex IFS on the line.
///
/// Single-vertex input is `NotApplicable`. The canonical two-vertex family
/// is tried against the full-measure rules first and falls back to the
/// gap-set rules when the measure conditions do not certify. Any other
/// graph goes through the subgraph rule, which needs the cycle-triple
/// structure and independence of the gap/ratio set.
pub fn classify_attractor(ifs: &GraphIfs, vertex: VertexId) -> Result<Certificate, ClassifierError> {
    if vertex >= ifs.vertex_count() {
        return Err(ClassifierError::InvalidVertex { vertex, vertex_count: ifs.vertex_count() });
    }
    if ifs.vertex_count() == 1 {
        return Ok(Certificate {
            vertex,
            verdict: Verdict::NotApplicable,
            rule: None,
            dimension: solve_dimension(ifs, DEFAULT_TOLERANCE).ok().map(|d| d.s),
            conditions: None,
            independence: None,
            structure: None,
            reason: "the system is itself a single-vertex IFS".into(),
        });
    }
    match CanonicalFamily::from_ifs(ifs) {
        Some(family) => classify_family(&family, vertex),
        None => classify_general(ifs, vertex),
    }
}

const FAMILY_NAMES: [&str; 6] = ["g_u", "g_v", "a", "b", "c", "d"];

fn classify_family(family: &CanonicalFamily, vertex: VertexId) -> Result<Certificate, ClassifierError> {
    // Orient the family so the queried vertex plays the role of `u`.
    let oriented = if vertex == 0 { family.clone() } else { family.swapped() };
    let report = certify(&oriented.to_ifs())?;
    let certified = report.status == CertificationStatus::Certified;

    let equal_ratios = oriented.equal_cross_ratios();
    let mut values = vec![
        oriented.g_u.clone(),
        oriented.g_v.clone(),
        oriented.a.clone(),
        oriented.b.clone(),
        oriented.c.clone(),
    ];
    if !equal_ratios {
        values.push(oriented.d.clone());
    }
    let names: Vec<String> =
        FAMILY_NAMES.iter().take(values.len()).map(|s| s.to_string()).collect();
    let independence = IndependenceEvidence {
        names,
        values: values.clone(),
        report: is_multiplicatively_independent(&values)?,
    };

    let (verdict, rule, reason) = if !independence.report.independent {
        let relation = independence.relation().unwrap_or_default();
        (
            Verdict::Inconclusive,
            None,
            format!("the parameter list is multiplicatively dependent: {relation}"),
        )
    } else if certified {
        let rule = if equal_ratios {
            CitedRule::FullMeasureExclusionEqualRatios
        } else {
            CitedRule::FullMeasureExclusion
        };
        (
            Verdict::NotOneVertexAttractor(rule.scope()),
            Some(rule),
            "measure conditions certified and the parameter list is multiplicatively \
             independent"
                .into(),
        )
    } else if check_cssc(&oriented.to_ifs()).holds {
        // Positive gaps keep the family separated, so this branch is the
        // normal fallback whenever certification fails.
        let rule = if equal_ratios {
            CitedRule::GapSetExclusionEqualRatios
        } else {
            CitedRule::GapSetExclusion
        };
        (
            Verdict::NotOneVertexAttractor(rule.scope()),
            Some(rule),
            "measure conditions not certified; the gap-set argument applies under \
             convex strong separation"
                .into(),
        )
    } else {
        (
            Verdict::Inconclusive,
            None,
            "measure conditions not certified and separation not established".into(),
        )
    };

    Ok(Certificate {
        vertex,
        verdict,
        rule,
        dimension: Some(report.s),
        conditions: Some(report.conditions),
        independence: Some(independence),
        structure: None,
        reason,
    })
}

fn classify_general(ifs: &GraphIfs, vertex: VertexId) -> Result<Certificate, ClassifierError> {
    let structure = cycle_triple_structure(ifs, vertex);
    let values = independence_set(ifs, vertex)?;
    let names: Vec<String> = values.iter().map(format_rational).collect();
    let independence = IndependenceEvidence {
        names,
        values: values.clone(),
        report: is_multiplicatively_independent(&values)?,
    };
    let dimension = solve_dimension(ifs, DEFAULT_TOLERANCE).ok().map(|d| d.s);

    let (verdict, rule, reason) = if structure.found && independence.report.independent {
        (
            Verdict::NotOneVertexAttractor(ExclusionScope::CsscSystems),
            Some(CitedRule::SubgraphGapExclusion),
            "cycle-triple structure present and the gap/ratio set is multiplicatively \
             independent"
                .into(),
        )
    } else if !structure.found {
        (
            Verdict::Inconclusive,
            None,
            "no cycle triple (c1, c2, c3) with the required chain structure was found".into(),
        )
    } else {
        let relation = independence.relation().unwrap_or_default();
        (
            Verdict::Inconclusive,
            None,
            format!("the gap/ratio set is multiplicatively dependent: {relation}"),
        )
    };

    Ok(Certificate {
        vertex,
        verdict,
        rule,
        dimension,
        conditions: None,
        independence: Some(independence),
        structure: Some(structure),
        reason,
    })
}
