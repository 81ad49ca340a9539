use crate::algorithms::{SffpepProblem, SpectralRadii};
use crate::error::{Error, Result};
use crate::hilbert::{ConvexSet, DenseOperator, Point, QuasiNonexpansiveMap};

/// The scalar worked example: `C = Q = [0, ∞)`, `A = 1`, `B = 4`,
/// `U(x) = (x² + 5)/(1 + x)`, `T(y) = (y + 5)/5`, solution `(5, 5/4)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperExample {
    pub problem: SffpepProblem,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    /// The example's nominal `λ = 1` lies outside `(0, 2/17)`.
    pub inadmissible_lambda: bool,
    pub tabulated_starts: [(f64, f64); 2],
}

pub fn build_paper_example() -> PaperExample {
    let half_line =
        || ConvexSet::boxed(vec![0.0], vec![f64::INFINITY]).expect("[0, inf) is a valid box");
    let problem = SffpepProblem::new(
        half_line(),
        half_line(),
        QuasiNonexpansiveMap::paper_rational(1),
        QuasiNonexpansiveMap::paper_affine(1),
        DenseOperator::scalar(1.0),
        DenseOperator::scalar(4.0),
    )
    .and_then(|p| p.with_known_solution(Point::scalar(5.0), Point::scalar(1.25)))
    .expect("example problem is well formed");
    let lambda = 1.0;
    // L1 = 1, L2 = 16 exactly for the scalar operators.
    let bound = SpectralRadii { l1: 1.0, l2: 16.0 }
        .lambda_bound(crate::algorithms::SchemeId::Sffpep, Default::default())
        .expect("positive radii");
    PaperExample {
        problem,
        lambda,
        alpha: 0.2,
        beta: 0.125,
        inadmissible_lambda: !(lambda < bound),
        tabulated_starts: [(10.0, 15.0), (5.0, 1.25)],
    }
}

/// One step of the tabulated scalar recurrence:
///
/// ```text
/// zₙ = xₙ,  wₙ = 7/8·zₙ + 1/8·(zₙ² + 5)/(zₙ + 1),  xₙ₊₁ = 4/5·zₙ + 1/5·(wₙ² + 5)/(wₙ + 1)
/// uₙ = yₙ,  rₙ = 7/8·uₙ + 1/8·(uₙ + 5)/5,           yₙ₊₁ = 4/5·uₙ + 1/5·(rₙ + 5)/5
/// ```
///
/// This is the general step with the gradient correction removed (`λ = 0`),
/// not with the example's stated `λ = 1`. It is kept here for reproducing the
/// reference tables and is not used by the solvers.
pub fn paper_recurrence_step(x: f64, y: f64) -> Result<(f64, f64)> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            map: "tabulated recurrence (x^2+5)/(x+1)",
            value: x,
            index: 0,
        });
    }
    let z = x;
    let w = 7.0 / 8.0 * z + 1.0 / 8.0 * ((z * z + 5.0) / (z + 1.0));
    let x_next = 4.0 / 5.0 * z + 1.0 / 5.0 * ((w * w + 5.0) / (w + 1.0));

    let u = y;
    let r = 7.0 / 8.0 * u + 1.0 / 8.0 * ((u + 5.0) / 5.0);
    let y_next = 4.0 / 5.0 * u + 1.0 / 5.0 * ((r + 5.0) / 5.0);

    if !(x_next.is_finite() && y_next.is_finite()) {
        return Err(Error::NumericOverflow {
            context: "tabulated recurrence",
        });
    }
    Ok((x_next, y_next))
}

/// Rows `(n, xₙ, yₙ)` for `n = 0..=n_steps`.
pub fn paper_recurrence_run(x0: f64, y0: f64, n_steps: usize) -> Result<Vec<(usize, f64, f64)>> {
    let mut rows = Vec::with_capacity(n_steps + 1);
    let (mut x, mut y) = (x0, y0);
    if !(x0 >= 0.0) {
        return Err(Error::Domain {
            map: "tabulated recurrence (x^2+5)/(x+1)",
            value: x0,
            index: 0,
        });
    }
    rows.push((0, x, y));
    for n in 1..=n_steps {
        (x, y) = paper_recurrence_step(x, y)?;
        rows.push((n, x, y));
    }
    Ok(rows)
}
