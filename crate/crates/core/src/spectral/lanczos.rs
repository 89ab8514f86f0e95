//! Lanczos iteration on the augmentation ideal, with full
//! reorthogonalization and explicit deflation of the all-ones vector.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use super::{ConvolutionOperator, SpectralConfig};
use crate::error::{Error, Result};
use crate::seed;

/// How often (in Krylov dimensions) the tridiagonal matrix is diagonalized.
const CHECK_EVERY: usize = 8;

pub(super) struct LanczosRun {
    pub min: f64,
    pub max: f64,
    pub iterations: usize,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `v ← v − (⟨v,e⟩/n) e`.
fn deflate(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Extreme Ritz values of the tridiagonal matrix and their residuals.
fn ritz(alpha: &[f64], beta: &[f64], last_beta: f64) -> (f64, f64, f64) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (mut lo, mut hi) = (0, 0);
    for i in 0..m {
        if eig.eigenvalues[i] < eig.eigenvalues[lo] {
            lo = i;
        }
        if eig.eigenvalues[i] > eig.eigenvalues[hi] {
            hi = i;
        }
    }
    let res = |i: usize| (last_beta * eig.eigenvectors[(m - 1, i)]).abs();
    (eig.eigenvalues[lo], eig.eigenvalues[hi], res(lo).max(res(hi)))
}

pub(super) fn extreme_on_ideal(op: &ConvolutionOperator<'_>, cfg: &SpectralConfig) -> Result<LanczosRun> {
    let n = op.dim();
    if n <= 1 {
        return Ok(LanczosRun {
            min: 0.0,
            max: 0.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    let ideal_dim = n - 1;
    let scale = (op.subset_size() as f64).max(1.0);
    let mut rng = seed::stream(cfg.seed, &[0x1A2C], 0);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    deflate(&mut q);
    if normalize(&mut q) == 0.0 {
        q = vec![-1.0 / n as f64; n];
        q[0] += 1.0;
        normalize(&mut q);
    }

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut last = (0.0, 0.0, f64::INFINITY);
    loop {
        let j = alpha.len();
        let mut w = op.apply(&basis[j]);
        deflate(&mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(&w, v);
                for (x, y) in w.iter_mut().zip(v) {
                    *x -= c * y;
                }
            }
        }
        let b = dot(&w, &w).sqrt();
        let m = alpha.len();
        let breakdown = b <= 1e-12 * scale;
        let exhausted = m >= ideal_dim;
        if breakdown || exhausted || m.is_multiple_of(CHECK_EVERY) || m >= cfg.max_iterations {
            let last_beta = if breakdown || exhausted { 0.0 } else { b };
            last = ritz(&alpha, &beta, last_beta);
            if breakdown || exhausted || last.2 <= cfg.tolerance * scale {
                return Ok(LanczosRun {
                    min: last.0,
                    max: last.1,
                    iterations: m,
                    residual: last.2,
                });
            }
        }
        if m >= cfg.max_iterations {
            return Err(Error::NonConvergence {
                iterations: m,
                residual: last.2,
            });
        }
        beta.push(b);
        for x in w.iter_mut() {
            *x /= b;
        }
        basis.push(w);
    }
}
