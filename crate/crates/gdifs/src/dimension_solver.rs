//! Hausdorff dimension of the attractor system.
//!
//! For `t >= 0` the system defines a nonnegative matrix `A(t)` whose `(u, v)`
//! entry is the sum of `r_e^t` over the edges `u -> v`. Strong connectivity
//! makes `A(t)` irreducible, its spectral radius is strictly decreasing in
//! `t`, and the dimension of every attractor component is the unique `s`
//! with `rho(A(s)) = 1`. The Perron eigenvector at `s`, normalised against
//! the hull length of vertex 0, carries the exact Hausdorff measures of the
//! components when a later certification succeeds.

use thiserror::Error;

use crate::ifs_graph::{compute_hulls, GraphIfs};
use crate::rational::to_f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("spectral radius still at least 1 at exponent {t_max}; no dimension bracket below 64")]
    BracketFailure { t_max: f64 },
    #[error("tolerance {tol} is below the supported minimum 1e-14")]
    ToleranceTooTight { tol: f64 },
    #[error("spectral radius at the supplied exponent is {rho}, not 1")]
    NotAtEigenvalueOne { rho: f64 },
}

/// The ratio data of `A(t)` with `t` left symbolic: entry `(u, v)` holds the
/// list of edge ratios from `u` to `v`.
#[derive(Debug, Clone)]
pub struct RatioMatrix {
    size: usize,
    ratios: Vec<Vec<Vec<f64>>>,
}

impl RatioMatrix {
    pub fn from_ifs(ifs: &GraphIfs) -> Self {
        let size = ifs.vertex_count();
        let mut ratios = vec![vec![Vec::new(); size]; size];
        for e in ifs.edges() {
            ratios[e.from][e.to].push(to_f64(&e.map.ratio));
        }
        RatioMatrix { size, ratios }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entrywise evaluation `sum r^t`.
    pub fn eval(&self, t: f64) -> Vec<Vec<f64>> {
        self.ratios
            .iter()
            .map(|row| row.iter().map(|cell| cell.iter().map(|r| r.powf(t)).sum()).collect())
            .collect()
    }
}

pub fn build_matrix(ifs: &GraphIfs, t: f64) -> Vec<Vec<f64>> {
    RatioMatrix::from_ifs(ifs).eval(t)
}

/// Spectral radius of a nonnegative irreducible matrix. Sizes 1 and 2 use
/// closed forms; larger sizes run power iteration on `A + I` (the shift keeps
/// periodic matrices such as permutations convergent) with Collatz-Wielandt
/// bounds as the stopping rule.
pub fn spectral_radius(matrix: &[Vec<f64>]) -> f64 {
    match matrix.len() {
        0 => 0.0,
        1 => matrix[0][0],
        2 => {
            let tr = matrix[0][0] + matrix[1][1];
            let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
            let disc = (tr * tr - 4.0 * det).max(0.0);
            0.5 * (tr + disc.sqrt())
        }
        n => {
            let mut v = vec![1.0f64; n];
            let mut estimate = 0.0;
            for _ in 0..200_000 {
                let mut w = vec![0.0; n];
                for i in 0..n {
                    w[i] = v[i] + matrix[i].iter().zip(&v).map(|(a, x)| a * x).sum::<f64>();
                }
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for i in 0..n {
                    let q = w[i] / v[i];
                    lo = lo.min(q);
                    hi = hi.max(q);
                }
                estimate = 0.5 * (lo + hi) - 1.0;
                if hi - lo <= 1e-14 * hi {
                    return estimate;
                }
                let norm = w.iter().fold(0.0f64, |acc, x| acc.max(*x));
                for (vi, wi) in v.iter_mut().zip(&w) {
                    *vi = wi / norm;
                }
            }
            estimate
        }
    }
}

/// `max_i |(Ah)_i - h_i|`, the certificate that `h` is an eigenvector at 1.
pub fn eigen_residual(matrix: &[Vec<f64>], h: &[f64]) -> f64 {
    matrix
        .iter()
        .zip(h)
        .map(|(row, hi)| (row.iter().zip(h).map(|(a, x)| a * x).sum::<f64>() - hi).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct DimensionResult {
    pub s: f64,
    /// `|rho(A(s)) - 1|` at the returned exponent.
    pub rho_residual: f64,
    /// Perron eigenvector, `h[0] = |hull(0)|^s`.
    pub h: Vec<f64>,
    pub bracket: (f64, f64),
    pub bisection_iterations: u32,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
const MIN_TOLERANCE: f64 = 1e-14;
const BRACKET_LIMIT: f64 = 64.0;

/// Solves `rho(A(s)) = 1` by bracketed bisection. The initial bracket starts
/// at [0, 1] and doubles its upper end while the radius stays at or above 1.
pub fn solve_dimension(ifs: &GraphIfs, tol: f64) -> Result<DimensionResult, SolverError> {
    if tol < MIN_TOLERANCE {
        return Err(SolverError::ToleranceTooTight { tol });
    }
    let matrix = RatioMatrix::from_ifs(ifs);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while spectral_radius(&matrix.eval(hi)) >= 1.0 {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_LIMIT {
            return Err(SolverError::BracketFailure { t_max: hi });
        }
    }
    let bracket = (lo, hi);

    let mut iterations = 0u32;
    let (mut s, mut residual);
    loop {
        s = 0.5 * (lo + hi);
        let rho = spectral_radius(&matrix.eval(s));
        residual = (rho - 1.0).abs();
        if rho >= 1.0 {
            lo = s;
        } else {
            hi = s;
        }
        iterations += 1;
        if (hi - lo <= tol && residual <= tol) || iterations >= 200 {
            break;
        }
    }
    let h = perron_vector(ifs, s)?;
    Ok(DimensionResult { s, rho_residual: residual, h, bracket, bisection_iterations: iterations })
}

/// Perron eigenvector of `A(s)` when `rho(A(s))` is within 1e-9 of 1,
/// normalised so that `h[0] = |hull(0)|^s`. Power iteration runs on `A + I`
/// for the same reason as in `spectral_radius`.
pub fn perron_vector(ifs: &GraphIfs, s: f64) -> Result<Vec<f64>, SolverError> {
    let matrix = build_matrix(ifs, s);
    let rho = spectral_radius(&matrix);
    if (rho - 1.0).abs() > 1e-9 {
        return Err(SolverError::NotAtEigenvalueOne { rho });
    }
    let n = matrix.len();
    let mut v = vec![1.0f64; n];
    if n > 1 {
        for _ in 0..1_000_000 {
            let mut w = vec![0.0; n];
            for i in 0..n {
                w[i] = v[i] + matrix[i].iter().zip(&v).map(|(a, x)| a * x).sum::<f64>();
            }
            let norm = w.iter().fold(0.0f64, |acc, x| acc.max(*x));
            let mut delta = 0.0f64;
            for (vi, wi) in v.iter_mut().zip(&w) {
                let next = wi / norm;
                delta = delta.max((next - *vi).abs());
                *vi = next;
            }
            if delta <= 1e-15 {
                break;
            }
        }
    }
    let hulls = compute_hulls(ifs);
    let scale = to_f64(&hulls.length(0)).powf(s) / v[0];
    Ok(v.into_iter().map(|x| x * scale).collect())
}
