//! Directed-graph iterated function systems on the real line: Hausdorff
//! dimension, exact measure certification, gap-length algebra, and
//! classification of attractors.

pub mod classifier;
pub mod dimension_solver;
pub mod document;
pub mod gap_algebra;
pub mod ifs_graph;
pub mod interval_engine;
pub mod measure_certifier;
pub mod rational;
pub mod render;

pub use classifier::{
    chains_attached, classify_attractor, cycle_triple_structure, independence_set, simple_cycles,
    simple_paths, Certificate, Chain, CitedRule, ClassifierError, ExclusionScope,
    IndependenceEvidence, SimpleCycle, StructureReport, Verdict,
};
pub use dimension_solver::{
    build_matrix, eigen_residual, perron_vector, solve_dimension, spectral_radius,
    DimensionResult, RatioMatrix, SolverError, DEFAULT_TOLERANCE,
};
pub use document::{DocumentError, IfsDocument};
pub use gap_algebra::{
    compare_gap_sets, enumerate_coset_union, factor_rational, is_multiplicatively_independent,
    one_vertex_gap_expression, two_vertex_gap_expression, AlgebraError, CompareMode, Coset,
    CosetUnion, ExponentVector, GapSetComparison, IndependenceReport,
};
pub use ifs_graph::{
    canonical_two_vertex, check_cssc, compute_hulls, enumerate_paths, CanonicalFamily, CsscReport,
    CsscViolation, Edge, EdgeId, GraphIfs, Hulls, IfsError, PathLabel, Similarity, VertexId,
};
pub use interval_engine::{
    density, gap_lengths, level_intervals, measure_of_interval, sup_density_estimate,
    verify_gap_fixed_point, verify_trichotomy, EngineError, GapFixedPointReport, GapMultiset,
    IntervalSet, LevelInterval, MeasureBounds, SupDensityReport, TrichotomyReport,
    TrichotomyViolation, TrichotomyViolationKind,
};
pub use measure_certifier::{
    certify, check_conditions, density_function, exact_measures, y_max_ratio, CertificationReport,
    CertificationStatus, CertifierError, ConditionReport, ConditionStatus, DensityFunction,
    FamilyVertex,
};
pub use rational::{
    decimal10, format_rational, parse_rational, rat, rat_int, Rational,
};
pub use render::{render_svg, RenderError, RenderSpec, MAX_RENDER_LEVELS};
