//! Residuals, Lyapunov monitoring and sampling-based certification of
//! mapping properties.
//!
//! The property checks are certifications over finitely many seeded samples,
//! not proofs. Demiclosedness and semi-compactness concern limits of
//! sequences and have no sampling test, so they are not in the catalog.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algorithms::{SffpepProblem, TraceRecord};
use crate::error::{ensure_dims, Error, Result};
use crate::hilbert::{ConvexSet, DenseOperator, Point, QuasiNonexpansiveMap};

/// Absolute slack for first-order inequalities and fixed-point checks.
pub const PROPERTY_SLACK: f64 = 1e-12;
/// Coupling tolerance for a claimed solution.
pub const CONSISTENCY_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 10_000;

pub fn coupling_residual(
    a: &DenseOperator,
    b: &DenseOperator,
    x: &Point,
    y: &Point,
) -> Result<f64> {
    ensure_dims(
        "coupling residual codomains",
        a.codomain_dim(),
        b.codomain_dim(),
    )?;
    Ok(a.apply(x)?.sub(&b.apply(y)?)?.norm())
}

pub fn fixed_point_residual(m: &QuasiNonexpansiveMap, x: &Point) -> Result<f64> {
    m.apply(x)?.distance(x)
}

/// `‖x − x*‖² + ‖y − y*‖²`.
pub fn lyapunov_value(x: &Point, y: &Point, x_star: &Point, y_star: &Point) -> Result<f64> {
    Ok(x.sub(x_star)?.norm_squared() + y.sub(y_star)?.norm_squared())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovTrace {
    pub values: Vec<f64>,
    pub monotone: bool,
    /// First `k` with `values[k+1] > values[k] + slack`.
    pub first_violation: Option<usize>,
    pub slack: f64,
}

pub fn check_lyapunov_values(values: Vec<f64>, slack: f64) -> LyapunovTrace {
    let first_violation = values.windows(2).position(|w| w[1] > w[0] + slack);
    LyapunovTrace {
        monotone: first_violation.is_none(),
        first_violation,
        values,
        slack,
    }
}

/// Checks that the recorded Lyapunov values never increase by more than `slack`.
pub fn check_lyapunov(trace: &[TraceRecord], slack: f64) -> Result<LyapunovTrace> {
    let values = trace
        .iter()
        .enumerate()
        .map(|(index, r)| r.lyapunov.ok_or(Error::MissingLyapunov { index }))
        .collect::<Result<Vec<_>>>()?;
    Ok(check_lyapunov_values(values, slack))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Property {
    QuasiNonexpansive,
    FirmlyQuasiNonexpansive,
    ProjectionNonexpansive,
    FixedPointConsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Sample index within the run (0 for deterministic checks).
    pub index: usize,
    pub label: String,
    pub witness: Vec<Point>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheckReport {
    pub property: Property,
    pub subject: String,
    pub samples: usize,
    pub seed: u64,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl PropertyCheckReport {
    fn new(
        property: Property,
        subject: String,
        samples: usize,
        seed: u64,
        violations: Vec<Violation>,
    ) -> Self {
        PropertyCheckReport {
            property,
            subject,
            samples,
            seed,
            passed: violations.is_empty(),
            violations,
        }
    }
}

/// Uniform sampler on an axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxSampler {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxSampler {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        ensure_dims("sampler bounds", lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(Error::InvalidProblem(
                "sampler needs at least one coordinate".into(),
            ));
        }
        for (index, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::EmptyBox {
                    index,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(BoxSampler { lower, upper })
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Point {
        Point::from_vec_unchecked(
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(&lo, &hi)| if lo == hi { lo } else { rng.gen_range(lo..=hi) })
                .collect(),
        )
    }
}

fn fixed_point_violation(m: &QuasiNonexpansiveMap, q: &Point) -> Result<Option<Violation>> {
    let residual = fixed_point_residual(m, q)?;
    Ok((residual > PROPERTY_SLACK).then(|| Violation {
        index: 0,
        label: format!("{} does not fix the claimed point", m.kind.name()),
        witness: vec![q.clone()],
        lhs: residual,
        rhs: PROPERTY_SLACK,
        margin: residual - PROPERTY_SLACK,
    }))
}

/// Evaluates `(‖Tx − q‖, ‖x − q‖)`.
pub fn quasi_nonexpansive_sides(
    m: &QuasiNonexpansiveMap,
    q: &Point,
    x: &Point,
) -> Result<(f64, f64)> {
    Ok((m.apply(x)?.distance(q)?, x.distance(q)?))
}

/// Evaluates `(‖Tx − q‖², ‖x − q‖² − ‖Tx − x‖²)`.
pub fn firm_sides(m: &QuasiNonexpansiveMap, q: &Point, x: &Point) -> Result<(f64, f64)> {
    let tx = m.apply(x)?;
    Ok((
        tx.sub(q)?.norm_squared(),
        x.sub(q)?.norm_squared() - tx.sub(x)?.norm_squared(),
    ))
}

fn sampled_map_check(
    property: Property,
    m: &QuasiNonexpansiveMap,
    q: &Point,
    sampler: &BoxSampler,
    n_samples: usize,
    seed: u64,
) -> Result<PropertyCheckReport> {
    ensure_dims("sampler and fixed point", sampler.dim(), q.dim())?;
    let subject = format!("{} about q = {}", m.kind.name(), q);
    if let Some(v) = fixed_point_violation(m, q)? {
        return Ok(PropertyCheckReport::new(
            Property::FixedPointConsistent,
            subject,
            0,
            seed,
            vec![v],
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for index in 0..n_samples {
        let x = sampler.sample(&mut rng);
        let (lhs, rhs, slack) = match property {
            Property::FirmlyQuasiNonexpansive => {
                let (lhs, rhs) = firm_sides(m, q, &x)?;
                // Squared quantities: the slack scales with their magnitude.
                (lhs, rhs, PROPERTY_SLACK * (1.0 + x.sub(q)?.norm_squared()))
            }
            _ => {
                let (lhs, rhs) = quasi_nonexpansive_sides(m, q, &x)?;
                (lhs, rhs, PROPERTY_SLACK)
            }
        };
        if lhs > rhs + slack {
            violations.push(Violation {
                index,
                label: "inequality violated".into(),
                witness: vec![x],
                lhs,
                rhs,
                margin: lhs - rhs,
            });
        }
    }
    Ok(PropertyCheckReport::new(
        property, subject, n_samples, seed, violations,
    ))
}

/// Samples `x` and records every `‖Tx − q‖ > ‖x − q‖ + 1e-12`.
///
/// If `q` is not fixed by `m` the report is a failed
/// [`Property::FixedPointConsistent`] check instead. Samples outside the
/// map's domain are an error.
pub fn check_quasi_nonexpansive(
    m: &QuasiNonexpansiveMap,
    q: &Point,
    sampler: &BoxSampler,
    n_samples: usize,
    seed: u64,
) -> Result<PropertyCheckReport> {
    sampled_map_check(Property::QuasiNonexpansive, m, q, sampler, n_samples, seed)
}

/// Samples `x` and records every `‖Tx − q‖² > ‖x − q‖² − ‖Tx − x‖²` beyond slack.
pub fn check_firmly_quasi_nonexpansive(
    m: &QuasiNonexpansiveMap,
    q: &Point,
    sampler: &BoxSampler,
    n_samples: usize,
    seed: u64,
) -> Result<PropertyCheckReport> {
    sampled_map_check(
        Property::FirmlyQuasiNonexpansive,
        m,
        q,
        sampler,
        n_samples,
        seed,
    )
}

/// Samples pairs `(x, y)` and records every `‖Px − Py‖ > ‖x − y‖ + 1e-12`.
pub fn check_projection_nonexpansive(
    set: &ConvexSet,
    sampler: &BoxSampler,
    n_pairs: usize,
    seed: u64,
) -> Result<PropertyCheckReport> {
    ensure_dims("sampler and set", sampler.dim(), set.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for index in 0..n_pairs {
        let x = sampler.sample(&mut rng);
        let y = sampler.sample(&mut rng);
        let lhs = set.project(&x)?.distance(&set.project(&y)?)?;
        let rhs = x.distance(&y)?;
        if lhs > rhs + PROPERTY_SLACK {
            violations.push(Violation {
                index,
                label: "projection expanded a pair".into(),
                witness: vec![x, y],
                lhs,
                rhs,
                margin: lhs - rhs,
            });
        }
    }
    Ok(PropertyCheckReport::new(
        Property::ProjectionNonexpansive,
        set.name().to_string(),
        n_pairs,
        seed,
        violations,
    ))
}

/// Verifies a problem's claimed solution: `x* ∈ C`, `Ux* = x*`, `y* ∈ Q`,
/// `Ty* = y*` and `‖Ax* − By*‖ ≤ 1e-10`. Failures become violations.
pub fn check_problem_consistency(p: &SffpepProblem) -> PropertyCheckReport {
    let subject = "claimed solution".to_string();
    let Some((xs, ys)) = p.known_solution() else {
        let v = Violation {
            index: 0,
            label: "problem carries no known solution".into(),
            witness: vec![],
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
        };
        return PropertyCheckReport::new(Property::FixedPointConsistent, subject, 0, 0, vec![v]);
    };
    let mut violations = Vec::new();
    let mut push = |label: String, witness: Vec<Point>, lhs: f64, rhs: f64| {
        violations.push(Violation {
            index: 0,
            label,
            witness,
            lhs,
            rhs,
            margin: lhs - rhs,
        })
    };
    let mut membership = |set: &ConvexSet, pt: &Point, name: &str| match set
        .project(pt)
        .and_then(|pp| pp.distance(pt))
    {
        Ok(d) if d <= CONSISTENCY_TOL => {}
        Ok(d) => push(
            format!("{name} not in {}", set.name()),
            vec![pt.clone()],
            d,
            CONSISTENCY_TOL,
        ),
        Err(e) => push(
            format!("{name}: {e}"),
            vec![pt.clone()],
            f64::NAN,
            CONSISTENCY_TOL,
        ),
    };
    membership(&p.c, xs, "x*");
    membership(&p.q, ys, "y*");
    for (m, pt, name) in [(&p.u, xs, "U x* = x*"), (&p.t, ys, "T y* = y*")] {
        match fixed_point_residual(m, pt) {
            Ok(r) if r <= CONSISTENCY_TOL => {}
            Ok(r) => push(
                format!("{name} fails"),
                vec![pt.clone()],
                r,
                CONSISTENCY_TOL,
            ),
            Err(e) => push(
                format!("{name}: {e}"),
                vec![pt.clone()],
                f64::NAN,
                CONSISTENCY_TOL,
            ),
        }
    }
    match coupling_residual(&p.a, &p.b, xs, ys) {
        Ok(r) if r <= CONSISTENCY_TOL => {}
        Ok(r) => push(
            "A x* = B y* fails".into(),
            vec![xs.clone(), ys.clone()],
            r,
            CONSISTENCY_TOL,
        ),
        Err(e) => push(
            format!("A x* = B y*: {e}"),
            vec![xs.clone(), ys.clone()],
            f64::NAN,
            CONSISTENCY_TOL,
        ),
    }
    PropertyCheckReport::new(Property::FixedPointConsistent, subject, 0, 0, violations)
}
