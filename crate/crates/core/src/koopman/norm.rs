use nalgebra::DMatrix;
use num_complex::Complex64;

use super::KoopmanOperator;
use crate::{Error, Result};

/// Below this dimension norms come from a dense singular value
/// decomposition instead of power iteration.
pub const DENSE_NORM_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormSettings {
    /// Stop when successive Rayleigh estimates differ by at most this
    /// fraction.
    pub relative_tolerance: f64,
    pub max_iterations: usize,
    pub dense_limit: usize,
}

impl Default for NormSettings {
    fn default() -> Self {
        Self { relative_tolerance: 1e-10, max_iterations: 100_000, dense_limit: DENSE_NORM_LIMIT }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub norm: f64,
    /// Power iterations used; 0 for the dense path.
    pub iterations: usize,
    pub converged: bool,
}

/// Operator norm for the weighted inner product, failing if power
/// iteration hits its cap.
pub fn operator_norm(op: &KoopmanOperator) -> Result<NormEstimate> {
    let est = operator_norm_with(op, &NormSettings::default());
    if est.converged {
        Ok(est)
    } else {
        Err(Error::IterationCapExceeded(est.iterations))
    }
}

/// Largest singular value of `S = D^{1/2} K D^{-1/2}`, `D = diag(mu)`,
/// which is the norm of `K` on weighted L².
pub fn operator_norm_with(op: &KoopmanOperator, settings: &NormSettings) -> NormEstimate {
    let n = op.dim();
    if n == 0 {
        return NormEstimate { norm: 0.0, iterations: 0, converged: true };
    }
    let sqrt_mu: Vec<f64> = op.space().float_weights().iter().map(|w| w.sqrt()).collect();
    let s: Vec<Vec<(usize, Complex64)>> = op
        .rows()
        .iter()
        .enumerate()
        .map(|(x, row)| row.iter().map(|(y, v)| (*y, v * (sqrt_mu[x] / sqrt_mu[*y]))).collect())
        .collect();
    if n < settings.dense_limit {
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for (x, row) in s.iter().enumerate() {
            for (y, v) in row {
                m[(x, *y)] = *v;
            }
        }
        let sv = m.singular_values();
        return NormEstimate { norm: sv.iter().copied().fold(0.0, f64::max), iterations: 0, converged: true };
    }
    power_iteration(&s, settings)
}

/// Power iteration on `S^H S` from all-ones plus a fixed small complex
/// perturbation, so the start is never orthogonal to a top singular
/// vector by symmetry alone.
fn power_iteration(s: &[Vec<(usize, Complex64)>], settings: &NormSettings) -> NormEstimate {
    let n = s.len();
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut v: Vec<Complex64> =
        (0..n).map(|k| Complex64::new(1.0, 0.0) + 0.1 * Complex64::from_polar(1.0, golden * k as f64)).collect();
    normalize(&mut v);
    let mut previous = f64::NAN;
    for iteration in 1..=settings.max_iterations {
        let sv: Vec<Complex64> = s.iter().map(|row| row.iter().map(|(y, a)| a * v[*y]).sum()).collect();
        let rayleigh: f64 = sv.iter().map(|z| z.norm_sqr()).sum();
        let mut next = vec![Complex64::default(); n];
        for (x, row) in s.iter().enumerate() {
            for (y, a) in row {
                next[*y] += a.conj() * sv[x];
            }
        }
        if rayleigh == 0.0 || normalize(&mut next) == 0.0 {
            return NormEstimate { norm: 0.0, iterations: iteration, converged: true };
        }
        v = next;
        if (rayleigh - previous).abs() <= settings.relative_tolerance * rayleigh {
            return NormEstimate { norm: rayleigh.sqrt(), iterations: iteration, converged: true };
        }
        previous = rayleigh;
    }
    NormEstimate { norm: previous.sqrt(), iterations: settings.max_iterations, converged: false }
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let len = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if len > 0.0 {
        for z in v.iter_mut() {
            *z /= len;
        }
    }
    len
}
