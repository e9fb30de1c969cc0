//! Seeded generators shared by the property and acceptance suites.
//! Each test binary compiles this module separately, so not every helper
//! is used by every binary.
#![allow(dead_code)]

use gdifs::{rat, CanonicalFamily, Edge, GraphIfs, Similarity};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random member of the canonical two-vertex family: each row splits a
/// denominator into three positive parts summing to one.
pub fn random_family(rng: &mut ChaCha8Rng) -> CanonicalFamily {
    let row = |rng: &mut ChaCha8Rng| {
        let q = rng.random_range(7..60i64);
        let i = rng.random_range(1..q - 1);
        let j = rng.random_range(i + 1..q);
        (rat(i, q), rat(j - i, q), rat(q - j, q))
    };
    let (a, g_u, b) = row(rng);
    let (c, g_v, d) = row(rng);
    CanonicalFamily::new(a, g_u, b, c, g_v, d).expect("three positive parts sum to one")
}

/// A random valid system on one to three vertices: a ring plus one loop per
/// vertex (two loops for a single vertex), random ratios and translations.
/// Strongly connected with out-degree two everywhere; separation is not
/// arranged.
pub fn random_ifs(rng: &mut ChaCha8Rng) -> GraphIfs {
    let n = rng.random_range(1..=3usize);
    let mut edges = Vec::new();
    let mut id = 1u32;
    for v in 0..n {
        for to in [v, (v + 1) % n] {
            let q = rng.random_range(5..12i64);
            let p = rng.random_range(1..q);
            let translation = rat(rng.random_range(0..8i64), 4);
            edges.push(Edge { id, from: v, to, map: Similarity::new(rat(p, q), translation) });
            id += 1;
        }
    }
    GraphIfs::new(n, edges).expect("a ring with loops is strongly connected, out-degree two")
}
