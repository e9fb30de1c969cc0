//! Randomized invariants of the library: exact path algebra, hull fixed
//! points, interval separation, eigen-consistency, gap accumulation,
//! measure-bound monotonicity, factoring round-trips, independence
//! order-invariance, graph structure well-formedness, and document
//! round-trips.

mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use gdifs::rational::{pow_exact, pow_f64, to_f64};
use gdifs::{
    build_matrix, chains_attached, classify_attractor, compute_hulls, eigen_residual,
    factor_rational, gap_lengths, is_multiplicatively_independent, level_intervals,
    measure_of_interval, rat, simple_cycles, solve_dimension, verify_gap_fixed_point,
    CanonicalFamily, CertificationStatus, ExclusionScope, IfsDocument, Rational, Verdict,
};

use common::{random_ifs, rng};

fn family_strategy() -> impl Strategy<Value = CanonicalFamily> {
    let row = || {
        (7i64..60)
            .prop_flat_map(|q| (Just(q), 1..q - 1))
            .prop_flat_map(|(q, i)| (Just(q), Just(i), i + 1..q))
    };
    (row(), row()).prop_map(|((q1, i1, j1), (q2, i2, j2))| {
        CanonicalFamily::new(
            rat(i1, q1),
            rat(j1 - i1, q1),
            rat(q1 - j1, q1),
            rat(i2, q2),
            rat(j2 - i2, q2),
            rat(q2 - j2, q2),
        )
        .expect("three positive parts per row")
    })
}

fn product_of_powers(values: &[Rational], exponents: &[BigInt]) -> Rational {
    values
        .iter()
        .zip(exponents)
        .map(|(v, m)| pow_exact(v, m.to_i32().expect("small witness exponent")))
        .product()
}

proptest! {
    /// A path's labelled ratio is the exact product of its edge ratios, and
    /// its composite map is the left-to-right composition of the edge maps.
    #[test]
    fn path_labels_carry_exact_products(family in family_strategy(), k in 1u32..=4) {
        let ifs = family.to_ifs();
        for path in gdifs::enumerate_paths(&ifs, 0, k).unwrap() {
            let mut ratio = Rational::one();
            let mut map = gdifs::Similarity::new(Rational::one(), rat(0, 1));
            for id in &path.edges {
                let edge = ifs.edges().iter().find(|e| e.id == *id).unwrap();
                ratio *= &edge.map.ratio;
                map = map.compose(&edge.map);
            }
            prop_assert_eq!(&ratio, &path.ratio);
            prop_assert_eq!(&map, &path.map);
        }
    }

    /// Hull endpoints satisfy the endpoint fixed-point equations exactly.
    #[test]
    fn family_hulls_are_exact_fixed_points(family in family_strategy()) {
        let ifs = family.to_ifs();
        let hulls = compute_hulls(&ifs);
        prop_assert!(hulls.exact);
        for u in 0..ifs.vertex_count() {
            let lo = ifs
                .out_edges(u)
                .map(|e| e.map.apply(hulls.interval(e.to).0))
                .min()
                .unwrap();
            let hi = ifs
                .out_edges(u)
                .map(|e| e.map.apply(hulls.interval(e.to).1))
                .max()
                .unwrap();
            prop_assert_eq!(&lo, hulls.interval(u).0);
            prop_assert_eq!(&hi, hulls.interval(u).1);
        }
    }

    /// Level intervals come out sorted with strictly positive gaps: the
    /// family's separation survives refinement.
    #[test]
    fn level_intervals_are_sorted_and_separated(family in family_strategy(), k in 1u32..=4) {
        let ifs = family.to_ifs();
        let set = level_intervals(&ifs, 0, k).unwrap();
        prop_assert_eq!(set.intervals.len(), 1 << k);
        for pair in set.intervals.windows(2) {
            prop_assert!(pair[0].hi < pair[1].lo);
        }
    }

    /// The solved dimension pins the spectral radius to 1 and the
    /// eigenvector to the closed-form ratio.
    #[test]
    fn dimension_solution_is_consistent(family in family_strategy()) {
        let ifs = family.to_ifs();
        let result = solve_dimension(&ifs, 1e-12).unwrap();
        prop_assert!(result.rho_residual.abs() <= 1e-11);
        let matrix = build_matrix(&ifs, result.s);
        prop_assert!(eigen_residual(&matrix, &result.h) <= 1e-9);
        let closed_form =
            (1.0 - pow_f64(&family.a, result.s)) / pow_f64(&family.b, result.s);
        prop_assert!((result.h[1] / result.h[0] - closed_form).abs() <= 1e-9);
    }

    /// Summing `r^s h_(t(path))` over all k-step paths from a vertex
    /// reproduces the eigenvector entry: the matrix identity `A^k h = h`.
    #[test]
    fn path_sums_reproduce_the_eigenvector(family in family_strategy(), k in 1u32..=5) {
        let ifs = family.to_ifs();
        let result = solve_dimension(&ifs, 1e-12).unwrap();
        for u in 0..ifs.vertex_count() {
            let sum: f64 = gdifs::enumerate_paths(&ifs, u, k)
                .unwrap()
                .iter()
                .map(|p| to_f64(&p.ratio).powf(result.s) * result.h[p.to])
                .sum();
            prop_assert!((sum - result.h[u]).abs() <= 1e-8 * result.h[u]);
        }
    }

    /// The normalized measure of the whole hull is 1 at every depth: mass
    /// is conserved by refinement.
    #[test]
    fn full_hull_mass_is_one(family in family_strategy(), k in 1u32..=5) {
        let ifs = family.to_ifs();
        let result = solve_dimension(&ifs, 1e-12).unwrap();
        let hulls = compute_hulls(&ifs);
        for u in 0..ifs.vertex_count() {
            let (lo, hi) = hulls.interval(u);
            let bounds = measure_of_interval(&ifs, result.s, &result.h, u, lo, hi, k).unwrap();
            prop_assert!((bounds.lower - 1.0).abs() <= 1e-8);
            prop_assert!((bounds.upper - 1.0).abs() <= 1e-8);
        }
    }

    /// Gaps persist: every gap of level k is still a gap of level k + 1.
    #[test]
    fn gaps_accumulate_across_levels(family in family_strategy(), k in 1u32..=3) {
        let ifs = family.to_ifs();
        for u in 0..ifs.vertex_count() {
            let coarse = gap_lengths(&ifs, u, k).unwrap();
            let fine = gap_lengths(&ifs, u, k + 1).unwrap();
            for (length, count) in coarse {
                prop_assert!(fine.get(&length).copied().unwrap_or(0) >= count);
            }
        }
    }

    /// The recursive gap identity holds for random families.
    #[test]
    fn gap_fixed_point_holds(family in family_strategy(), k in 1u32..=3) {
        let report = verify_gap_fixed_point(&family.to_ifs(), k).unwrap();
        prop_assert!(report.holds, "mismatch: {:?}", report.mismatch);
    }

    /// Measure bounds grow with the interval.
    #[test]
    fn measure_bounds_are_monotone(
        family in family_strategy(),
        cut in (1i64..15).prop_flat_map(|p| (Just(p), (p + 1)..16)),
    ) {
        let ifs = family.to_ifs();
        let result = solve_dimension(&ifs, 1e-12).unwrap();
        let (p, q) = cut;
        let (inner_lo, inner_hi) = (rat(p, 16), rat(q, 16));
        let (outer_lo, outer_hi) = (rat(p - 1, 16), rat(q + 1, 16));
        let inner =
            measure_of_interval(&ifs, result.s, &result.h, 0, &inner_lo, &inner_hi, 4).unwrap();
        let outer =
            measure_of_interval(&ifs, result.s, &result.h, 0, &outer_lo, &outer_hi, 4).unwrap();
        prop_assert!(inner.lower <= outer.lower);
        prop_assert!(inner.upper <= outer.upper);
        prop_assert!(inner.lower <= inner.upper);
    }

    /// Factoring a rational built from small primes recovers the exponents
    /// and reconstructs the value exactly.
    #[test]
    fn factoring_round_trips(exponents in proptest::collection::vec(-4i64..=4, 6)) {
        const PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];
        let value: Rational = PRIMES
            .iter()
            .zip(&exponents)
            .map(|(&p, &e)| pow_exact(&rat(p, 1), e as i32))
            .product();
        let factored = factor_rational(&value).unwrap();
        let expected: BTreeMap<u64, i64> = PRIMES
            .iter()
            .zip(&exponents)
            .filter(|(_, &e)| e != 0)
            .map(|(&p, &e)| (p as u64, e))
            .collect();
        prop_assert_eq!(&factored.entries, &expected);
        prop_assert_eq!(factored.reconstruct(), value);
    }

    /// Multiplicative independence does not depend on the order of the
    /// list, and every dependence witness reconstructs 1 exactly.
    #[test]
    fn independence_is_order_invariant(
        rows in proptest::collection::vec(
            proptest::collection::vec(-3i64..=3, 3)
                .prop_filter("value must not be 1", |row| row.iter().any(|&e| e != 0)),
            3,
        ),
        permutation in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        const PRIMES: [i64; 3] = [2, 3, 5];
        let values: Vec<Rational> = rows
            .iter()
            .map(|row| {
                PRIMES
                    .iter()
                    .zip(row)
                    .map(|(&p, &e)| pow_exact(&rat(p, 1), e as i32))
                    .product()
            })
            .collect();
        prop_assume!(values.iter().all(|v| !v.is_one()));
        let base = is_multiplicatively_independent(&values).unwrap();
        let shuffled: Vec<Rational> =
            permutation.iter().map(|&i| values[i].clone()).collect();
        let again = is_multiplicatively_independent(&shuffled).unwrap();
        prop_assert_eq!(base.independent, again.independent);
        if let Some(witness) = &base.witness {
            prop_assert!(witness.iter().any(|m| !m.is_zero()));
            prop_assert!(product_of_powers(&values, witness).is_one());
        }
        if let Some(witness) = &again.witness {
            prop_assert!(product_of_powers(&shuffled, witness).is_one());
        }
    }

    /// Documents survive a round trip through canonical emission.
    #[test]
    fn documents_round_trip(family in family_strategy()) {
        let ifs = family.to_ifs();
        let doc = IfsDocument::from_ifs(&ifs);
        let reparsed = IfsDocument::parse(&doc.emit()).unwrap();
        prop_assert_eq!(&reparsed, &doc);
        let rebuilt = reparsed.build().unwrap();
        prop_assert_eq!(rebuilt.edges(), ifs.edges());
    }

    /// Family-route classification is internally consistent: outright
    /// exclusion needs certification plus independence; the separation-only
    /// verdict needs independence; anything dependent is inconclusive.
    #[test]
    fn classification_is_sound_on_families(family in family_strategy()) {
        let ifs = family.to_ifs();
        let cert = classify_attractor(&ifs, 0).unwrap();
        let report = gdifs::certify(&ifs).unwrap();
        let evidence = cert.independence.as_ref().unwrap();
        match cert.verdict {
            Verdict::NotOneVertexAttractor(ExclusionScope::AllSystems) => {
                prop_assert_eq!(report.status, CertificationStatus::Certified);
                prop_assert!(evidence.report.independent);
            }
            Verdict::NotOneVertexAttractor(ExclusionScope::CsscSystems) => {
                prop_assert!(report.status != CertificationStatus::Certified);
                prop_assert!(evidence.report.independent);
            }
            Verdict::Inconclusive => {
                prop_assert!(!evidence.report.independent);
                prop_assert!(product_of_powers(
                    &evidence.values,
                    evidence.report.witness.as_ref().unwrap()
                )
                .is_one());
            }
            Verdict::NotApplicable => prop_assert!(false, "two-vertex input"),
        }
        let expected_tag = match (family.equal_cross_ratios(), &cert.verdict) {
            (true, Verdict::NotOneVertexAttractor(ExclusionScope::AllSystems)) => Some("2GthmV"),
            (false, Verdict::NotOneVertexAttractor(ExclusionScope::AllSystems)) => Some("2GthmU"),
            (true, Verdict::NotOneVertexAttractor(ExclusionScope::CsscSystems)) => Some("corC"),
            (false, Verdict::NotOneVertexAttractor(ExclusionScope::CsscSystems)) => Some("corCb"),
            _ => None,
        };
        prop_assert_eq!(cert.rule.map(|r| r.tag()), expected_tag);
    }
}

/// Hull endpoints of arbitrary systems satisfy the fixed-point equations,
/// exactly when flagged exact and to float tolerance otherwise.
#[test]
fn random_system_hulls_satisfy_the_endpoint_equations() {
    let mut rng = rng(11);
    for _ in 0..100 {
        let ifs = random_ifs(&mut rng);
        let hulls = compute_hulls(&ifs);
        for u in 0..ifs.vertex_count() {
            let lo = ifs
                .out_edges(u)
                .map(|e| e.map.apply(hulls.interval(e.to).0))
                .min()
                .unwrap();
            let hi = ifs
                .out_edges(u)
                .map(|e| e.map.apply(hulls.interval(e.to).1))
                .max()
                .unwrap();
            if hulls.exact {
                assert_eq!(&lo, hulls.interval(u).0);
                assert_eq!(&hi, hulls.interval(u).1);
            } else {
                assert!((to_f64(&lo) - to_f64(hulls.interval(u).0)).abs() <= 1e-9);
                assert!((to_f64(&hi) - to_f64(hulls.interval(u).1)).abs() <= 1e-9);
            }
        }
    }
}

/// Cycle and chain enumeration is well-formed on random graphs.
#[test]
fn cycles_and_chains_are_well_formed() {
    let mut rng = rng(13);
    for _ in 0..100 {
        let ifs = random_ifs(&mut rng);
        let n = ifs.vertex_count();
        let cycles = simple_cycles(&ifs);
        // A ring with one loop per vertex has the loops plus the ring
        // itself; a single vertex carries two loops.
        let expected = if n == 1 { 2 } else { n + 1 };
        assert_eq!(cycles.len(), expected);
        for cycle in &cycles {
            let mut vertices = cycle.vertices.clone();
            assert_eq!(cycle.vertices[0], *cycle.vertices.iter().min().unwrap());
            vertices.sort_unstable();
            vertices.dedup();
            assert_eq!(vertices.len(), cycle.vertices.len(), "vertices repeat");
            let mut ratio = Rational::one();
            for (i, id) in cycle.edges.iter().enumerate() {
                let edge = ifs.edges().iter().find(|e| e.id == *id).unwrap();
                assert_eq!(edge.from, cycle.vertices[i]);
                let next = cycle.vertices.get(i + 1).copied().unwrap_or(cycle.vertices[0]);
                assert_eq!(edge.to, next);
                ratio *= &edge.map.ratio;
            }
            assert_eq!(ratio, cycle.ratio);
        }

        for vertex in 0..n {
            for chain in chains_attached(&ifs, vertex, cycles.len().max(1)) {
                assert!(chain.cycles[0].contains_vertex(vertex));
                for later in &chain.cycles[1..] {
                    assert!(!later.contains_vertex(vertex));
                }
                for (i, x) in chain.cycles.iter().enumerate() {
                    for (j, y) in chain.cycles.iter().enumerate().skip(i + 1) {
                        assert_ne!(x, y, "cycles repeat in a chain");
                        let attached = x.attached_to(y);
                        if j == i + 1 {
                            assert!(attached, "consecutive cycles must touch");
                        } else {
                            assert!(!attached, "non-adjacent cycles must not touch");
                        }
                    }
                }
            }
        }
    }
}

/// Graph-form documents also survive the round trip.
#[test]
fn random_graph_documents_round_trip() {
    let mut rng = rng(17);
    for _ in 0..100 {
        let ifs = random_ifs(&mut rng);
        let doc = IfsDocument::from_ifs(&ifs);
        let reparsed = IfsDocument::parse(&doc.emit()).unwrap();
        assert_eq!(reparsed, doc);
        assert_eq!(reparsed.build().unwrap().edges(), ifs.edges());
    }
}
