use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::operator::DenseOperator;
use super::point::Point;
use crate::error::{Error, Result};

pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-12;
pub const DEFAULT_SPECTRAL_MAX_ITERS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;

/// Power-iteration estimate of the largest eigenvalue of `A*A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub value: f64,
    pub iterations_used: usize,
    pub converged: bool,
    pub tolerance: f64,
}

/// Estimates the spectral radius of the Gram operator `op* ∘ op`.
///
/// Starts from a seeded uniform random vector and stops once two successive
/// Rayleigh quotients differ by less than `tol`. A zero operator yields an
/// exact, converged 0.
pub fn spectral_radius_gram(
    op: &DenseOperator,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<SpectralEstimate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be positive".into(),
        });
    }
    if op.is_zero() {
        return Ok(SpectralEstimate {
            value: 0.0,
            iterations_used: 0,
            converged: true,
            tolerance: tol,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<f64> = (0..op.domain_dim())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    let mut v = normalized(Point::from_vec_unchecked(start));

    let mut estimate = f64::NAN;
    for iter in 1..=max_iters {
        let gv = op.apply_adjoint(&op.apply(&v)?)?;
        let rayleigh = v.inner(&gv)?;
        let gv_norm = gv.norm();
        if gv_norm == 0.0 {
            // v landed in the kernel; the top eigenvalue is still positive, so restart.
            let restart: Vec<f64> = (0..op.domain_dim())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            v = normalized(Point::from_vec_unchecked(restart));
            continue;
        }
        if (rayleigh - estimate).abs() < tol {
            return Ok(SpectralEstimate {
                value: rayleigh.max(0.0),
                iterations_used: iter,
                converged: true,
                tolerance: tol,
            });
        }
        estimate = rayleigh;
        v = gv.scale(1.0 / gv_norm);
    }

    Ok(SpectralEstimate {
        value: if estimate.is_nan() {
            0.0
        } else {
            estimate.max(0.0)
        },
        iterations_used: max_iters,
        converged: false,
        tolerance: tol,
    })
}

/// Spectral radius with the default tolerance, iteration cap and seed; fails
/// if power iteration does not converge.
pub fn gram_radius(op: &DenseOperator) -> Result<f64> {
    let est = spectral_radius_gram(
        op,
        DEFAULT_SPECTRAL_TOL,
        DEFAULT_SPECTRAL_MAX_ITERS,
        DEFAULT_SEED,
    )?;
    if est.converged {
        Ok(est.value)
    } else {
        Err(Error::SpectralNotConverged {
            iterations: est.iterations_used,
            estimate: est.value,
        })
    }
}

/// Exclusive upper bound `2 / (L1 + L2)` on admissible step sizes.
pub fn step_size_bound(l1: f64, l2: f64) -> Result<f64> {
    let sum = l1 + l2;
    if !(sum > 0.0) || l1 < 0.0 || l2 < 0.0 {
        return Err(Error::InvalidParameter {
            name: "L1 + L2",
            value: sum,
            reason: "spectral radii must be nonnegative with a positive sum".into(),
        });
    }
    Ok(2.0 / sum)
}

fn normalized(p: Point) -> Point {
    let n = p.norm();
    if n == 0.0 {
        Point::filled(p.dim(), 1.0 / (p.dim() as f64).sqrt())
    } else {
        p.scale(1.0 / n)
    }
}
