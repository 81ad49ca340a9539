use serde::{Deserialize, Serialize};

use super::problem::{IterateState, SchemeId, SffpepProblem};
use super::schedule::Schedule;
use super::schemes;
use crate::error::{Error, Result};
use crate::hilbert::{gram_radius, step_size_bound, DenseOperator, Point};

/// Which exclusive bound on `λ` the Moudafi-family schemes use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepBoundRule {
    /// `2/(L1 + L2)`.
    #[default]
    Sum,
    /// `2/(L1·L2)`.
    Product,
}

/// Spectral radii of `A*A` and `B*B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadii {
    pub l1: f64,
    pub l2: f64,
}

impl SpectralRadii {
    pub fn of(p: &SffpepProblem) -> Result<Self> {
        Ok(SpectralRadii {
            l1: gram_radius(&p.a)?,
            l2: gram_radius(&p.b)?,
        })
    }

    /// Exclusive upper bound on `λ` for `scheme`. May be `+∞`.
    pub fn lambda_bound(&self, scheme: SchemeId, rule: StepBoundRule) -> Result<f64> {
        let bound = match scheme {
            SchemeId::Sffpep | SchemeId::Corollary | SchemeId::Landweber => {
                step_size_bound(self.l1, self.l2)?
            }
            SchemeId::Moudafi | SchemeId::Yuan | SchemeId::Chidume => match rule {
                StepBoundRule::Sum => step_size_bound(self.l1, self.l2)?,
                StepBoundRule::Product => 2.0 / (self.l1 * self.l2),
            },
            SchemeId::Byrne => 2.0 / self.l1,
            SchemeId::Chen => 1.0 / (2.0 * self.l1),
        };
        Ok(bound)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    pub lambda: Schedule,
    pub alpha: Schedule,
    pub beta: Schedule,
    pub max_iters: usize,
    pub residual_tol: f64,
    pub validate_lambda: bool,
    pub step_bound_rule: StepBoundRule,
}

impl SolverParams {
    /// Constant `λ`, `α`, `β` with `α, β ∈ (0, 1)`. The `λ` schedule carries
    /// no bound of its own; [`solve`] checks it against the scheme's bound
    /// when `validate_lambda` is set.
    pub fn constant(
        lambda: f64,
        alpha: f64,
        beta: f64,
        max_iters: usize,
        residual_tol: f64,
    ) -> Result<Self> {
        Ok(SolverParams {
            lambda: Schedule::constant(lambda, 0.0, f64::INFINITY, "lambda")?,
            alpha: Schedule::constant(alpha, 0.0, 1.0, "alpha")?,
            beta: Schedule::constant(beta, 0.0, 1.0, "beta")?,
            max_iters,
            residual_tol,
            validate_lambda: true,
            step_bound_rule: StepBoundRule::Sum,
        })
    }
}

/// Parameters with `λ = λ_fraction · 2/(L1 + L2)`.
pub fn make_params(
    p: &SffpepProblem,
    lambda_fraction: f64,
    alpha: f64,
    beta: f64,
    max_iters: usize,
    tol: f64,
) -> Result<SolverParams> {
    make_params_for(
        p,
        SchemeId::Sffpep,
        StepBoundRule::Sum,
        lambda_fraction,
        alpha,
        beta,
        max_iters,
        tol,
    )
}

/// Like [`make_params`], scaling the bound that applies to `scheme`.
#[allow(clippy::too_many_arguments)]
pub fn make_params_for(
    p: &SffpepProblem,
    scheme: SchemeId,
    rule: StepBoundRule,
    lambda_fraction: f64,
    alpha: f64,
    beta: f64,
    max_iters: usize,
    tol: f64,
) -> Result<SolverParams> {
    if !(lambda_fraction > 0.0 && lambda_fraction < 1.0) {
        return Err(Error::InvalidParameter {
            name: "lambda_fraction",
            value: lambda_fraction,
            reason: "must lie in (0, 1); the step-size bound 0 < lambda < 2/(L1+L2) is exclusive"
                .into(),
        });
    }
    let radii = SpectralRadii::of(p)?;
    let bound = radii.lambda_bound(scheme, rule)?;
    if !bound.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lambda_fraction",
            value: lambda_fraction,
            reason: format!(
                "the {scheme} step bound is unbounded for this problem; give lambda directly"
            ),
        });
    }
    let mut params = SolverParams::constant(lambda_fraction * bound, alpha, beta, max_iters, tol)?;
    params.lambda.upper = bound;
    params.step_bound_rule = rule;
    Ok(params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    ResidualTolMet,
    MaxIters,
    NumericError,
}

/// Diagnostics recorded at iteration `n`, measured at `(xₙ, yₙ)` and the
/// intermediates `zₙ`, `uₙ` of the step taken from it.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub n: usize,
    pub coupling_residual: f64,
    pub fix_residual_u: f64,
    pub fix_residual_t: f64,
    pub lyapunov: Option<f64>,
    pub x: Point,
    pub y: Point,
}

impl TraceRecord {
    pub fn composite_residual(&self) -> f64 {
        self.coupling_residual
            .max(self.fix_residual_u)
            .max(self.fix_residual_t)
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// On `ResidualTolMet`, the iterate `(xₙ, yₙ)` whose record met the
    /// tolerance, with that step's intermediates. Otherwise the last
    /// iterate computed.
    pub final_state: IterateState,
    pub trace: Vec<TraceRecord>,
    pub termination: Termination,
    pub iterations: usize,
    pub error: Option<Error>,
}

impl SolveResult {
    pub fn last_record(&self) -> Option<&TraceRecord> {
        self.trace.last()
    }
}

struct StepParams {
    lambda: f64,
    alpha: f64,
    beta: f64,
}

/// One step of `scheme` on the full iterate state. Parameters a scheme does
/// not use are ignored; no bounds are checked here.
pub fn scheme_step(
    p: &SffpepProblem,
    scheme: SchemeId,
    s: &IterateState,
    lambda: f64,
    alpha: f64,
    beta: f64,
) -> Result<IterateState> {
    match scheme {
        SchemeId::Sffpep => schemes::sffpep_iterate(p, s, lambda, alpha, beta),
        SchemeId::Corollary => schemes::corollary_iterate(p, s, lambda, alpha),
        SchemeId::Moudafi => schemes::moudafi_alshemas_iterate(p, s, lambda),
        SchemeId::Landweber => schemes::landweber_iterate(p, s, lambda),
        SchemeId::Byrne => schemes::byrne_state_step(p, s, lambda),
        SchemeId::Yuan => schemes::yuan_iterate(p, s, lambda, alpha),
        SchemeId::Chidume => schemes::chidume_iterate(p, s, lambda, alpha),
        SchemeId::Chen => schemes::chen_state_step(p, s, lambda, alpha, beta),
    }
}

fn record(p: &SffpepProblem, current: &IterateState, next: &IterateState) -> Result<TraceRecord> {
    let coupling_residual = p.coupling(&current.x, &current.y)?.norm();
    let fix_residual_u = p.u.apply(&next.z)?.distance(&next.z)?;
    let fix_residual_t = p.t.apply(&next.u)?.distance(&next.u)?;
    let lyapunov = match p.known_solution() {
        Some((xs, ys)) => {
            Some(current.x.sub(xs)?.norm_squared() + current.y.sub(ys)?.norm_squared())
        }
        None => None,
    };
    if !(coupling_residual.is_finite() && fix_residual_u.is_finite() && fix_residual_t.is_finite())
    {
        return Err(Error::NumericOverflow {
            context: "residuals",
        });
    }
    Ok(TraceRecord {
        n: current.n,
        coupling_residual,
        fix_residual_u,
        fix_residual_t,
        lyapunov,
        x: current.x.clone(),
        y: current.y.clone(),
    })
}

/// Iterates `scheme` from `(x0, y0)` until the composite residual
/// `max(‖Axₙ − Byₙ‖, ‖Uzₙ − zₙ‖, ‖Tuₙ − uₙ‖)` drops to `residual_tol` or
/// `max_iters` steps have run.
///
/// Invalid parameters and dimension errors are returned as `Err` before any
/// step runs. Failures inside a step end the run with
/// [`Termination::NumericError`] and the partial trace.
pub fn solve(
    p: &SffpepProblem,
    params: &SolverParams,
    scheme: SchemeId,
    x0: Point,
    y0: Point,
) -> Result<SolveResult> {
    let mut state = IterateState::start(x0, y0);
    state.check_dims(p)?;
    if !(params.residual_tol >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "residual_tol",
            value: params.residual_tol,
            reason: "must be nonnegative".into(),
        });
    }
    if matches!(scheme, SchemeId::Byrne | SchemeId::Chen) && p.q.dim() != p.n3() {
        return Err(Error::DimensionMismatch {
            context: "Q and codomain of A (required by this scheme)",
            left: p.q.dim(),
            right: p.n3(),
        });
    }
    if matches!(scheme, SchemeId::Byrne | SchemeId::Chen) && p.b != DenseOperator::identity(p.n2())
    {
        return Err(Error::InvalidProblem(format!(
            "the {scheme} scheme solves split feasibility problems and requires B = I"
        )));
    }
    let lambda_bound = if params.validate_lambda {
        Some(SpectralRadii::of(p)?.lambda_bound(scheme, params.step_bound_rule)?)
    } else {
        None
    };

    // Parameters are validated up front for every iteration index that a
    // non-constant schedule can distinguish.
    let params_at = |n: usize| -> Result<StepParams> {
        let lambda = if params.validate_lambda {
            let l = params.lambda.checked(n, "lambda")?;
            let bound = lambda_bound.unwrap_or(f64::INFINITY);
            if !(l > 0.0 && l < bound) {
                return Err(Error::InvalidParameter {
                    name: "lambda",
                    value: l,
                    reason: format!(
                        "step size must satisfy 0 < lambda < {bound} (the exclusive bound for the {scheme} scheme; 2/(L1+L2) for the coupled schemes)"
                    ),
                });
            }
            l
        } else {
            params.lambda.at(n)
        };
        let alpha = if scheme.uses_alpha() {
            params.alpha.checked(n, "alpha")?
        } else {
            params.alpha.at(n)
        };
        let beta = if scheme.uses_beta() {
            params.beta.checked(n, "beta")?
        } else {
            params.beta.at(n)
        };
        Ok(StepParams {
            lambda,
            alpha,
            beta,
        })
    };
    if params.max_iters > 0 {
        params_at(1)?;
    }
    if params.validate_lambda {
        params.lambda.validate("lambda")?;
    }
    if scheme.uses_alpha() {
        params.alpha.validate("alpha")?;
    }
    if scheme.uses_beta() {
        params.beta.validate("beta")?;
    }

    let mut trace = Vec::new();
    for k in 0..params.max_iters {
        let sp = params_at(k + 1)?;
        let outcome =
            scheme_step(p, scheme, &state, sp.lambda, sp.alpha, sp.beta).and_then(|next| {
                let rec = record(p, &state, &next)?;
                Ok((next, rec))
            });
        let (next, rec) = match outcome {
            Ok(v) => v,
            Err(e) => {
                return Ok(SolveResult {
                    final_state: state,
                    iterations: trace.len(),
                    trace,
                    termination: Termination::NumericError,
                    error: Some(e),
                });
            }
        };
        let met = rec.composite_residual() <= params.residual_tol;
        trace.push(rec);
        if met {
            let final_state = IterateState {
                n: state.n,
                x: state.x,
                y: state.y,
                z: next.z,
                w: next.w,
                u: next.u,
                r: next.r,
            };
            return Ok(SolveResult {
                final_state,
                iterations: trace.len(),
                trace,
                termination: Termination::ResidualTolMet,
                error: None,
            });
        }
        state = next;
    }
    Ok(SolveResult {
        final_state: state,
        iterations: trace.len(),
        trace,
        termination: Termination::MaxIters,
        error: None,
    })
}
