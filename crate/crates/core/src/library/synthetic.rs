use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::SffpepProblem;
use crate::error::{Error, Result};
use crate::hilbert::{ConvexSet, DenseOperator, Point, QuasiNonexpansiveMap};

/// Parameters of a seeded synthetic instance with a known solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub seed: u64,
    /// Target ratio of largest to smallest singular value of `A`.
    pub conditioning: f64,
    pub contraction_rho: f64,
}

/// Orthonormal columns (each a `Vec` of length `n`) spanning a random
/// `k`-dimensional subspace of ℝⁿ, `k ≤ n`.
fn random_orthonormal(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for q in &cols {
                let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= d * qi);
            }
        }
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|c| *c /= norm);
            cols.push(v);
        }
    }
    cols
}

/// Builds an instance on which the convergence hypotheses hold by construction.
///
/// `C`, `Q` are nonnegative orthants containing `x*`, `y*` in their interior;
/// `A = U diag(s) Vᵀ` with singular values spread geometrically from 1 down
/// to `1/conditioning`; `B` is a random matrix with a rank-one correction so
/// that `By* = Ax*`; `U`, `T` contract toward `x*`, `y*` with ratio `ρ`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SffpepProblem> {
    if spec.n1 == 0 || spec.n2 == 0 || spec.n3 == 0 {
        return Err(Error::InvalidProblem(
            "synthetic dimensions must be at least 1".into(),
        ));
    }
    if !(spec.conditioning.is_finite() && spec.conditioning >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "conditioning",
            value: spec.conditioning,
            reason: "must be at least 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let x_star = Point::new((0..spec.n1).map(|_| rng.gen_range(0.5..2.0)).collect())?;
    let y_star = Point::new((0..spec.n2).map(|_| rng.gen_range(0.5..2.0)).collect())?;

    let rank = spec.n1.min(spec.n3);
    let left = random_orthonormal(&mut rng, spec.n3, rank);
    let right = random_orthonormal(&mut rng, spec.n1, rank);
    let singular: Vec<f64> = (0..rank)
        .map(|i| {
            if rank == 1 {
                1.0
            } else {
                spec.conditioning.powf(-(i as f64) / (rank - 1) as f64)
            }
        })
        .collect();
    let mut a_entries = vec![0.0; spec.n3 * spec.n1];
    for (k, s) in singular.iter().enumerate() {
        for r in 0..spec.n3 {
            for c in 0..spec.n1 {
                a_entries[r * spec.n1 + c] += s * left[k][r] * right[k][c];
            }
        }
    }
    let a = DenseOperator::from_row_major(spec.n3, spec.n1, a_entries)?;

    let b0: Vec<f64> = (0..spec.n3 * spec.n2)
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    let b0 = DenseOperator::from_row_major(spec.n3, spec.n2, b0)?;
    let ystar_sq = y_star.norm_squared();
    if ystar_sq == 0.0 {
        return Err(Error::InvalidProblem(
            "y* = 0 admits no rank-one correction".into(),
        ));
    }
    let gap = a.apply(&x_star)?.sub(&b0.apply(&y_star)?)?;
    let mut b_entries = Vec::with_capacity(spec.n3 * spec.n2);
    for r in 0..spec.n3 {
        for c in 0..spec.n2 {
            b_entries.push(b0.get(r, c) + gap.coords()[r] * y_star.coords()[c] / ystar_sq);
        }
    }
    let b = DenseOperator::from_row_major(spec.n3, spec.n2, b_entries)?;

    let u = QuasiNonexpansiveMap::contraction_toward(x_star.clone(), spec.contraction_rho)?;
    let t = QuasiNonexpansiveMap::contraction_toward(y_star.clone(), spec.contraction_rho)?;
    SffpepProblem::new(
        ConvexSet::nonnegative_orthant(spec.n1),
        ConvexSet::nonnegative_orthant(spec.n2),
        u,
        t,
        a,
        b,
    )?
    .with_known_solution(x_star, y_star)
}
