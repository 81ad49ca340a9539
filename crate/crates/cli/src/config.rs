//! JSON run configuration and its translation into solver inputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use splitsolve::algorithms::{
    make_params_for, SchemeId, SffpepProblem, SolverParams, SpectralRadii, StepBoundRule,
};
use splitsolve::hilbert::{
    AffineSubspace, ConvexSet, DenseOperator, MapKind, Point, QuasiNonexpansiveMap,
};
use splitsolve::library::{build_paper_example, generate_synthetic, SyntheticSpec};

use crate::error::CliError;

pub const DEFAULT_MAX_ITERS: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_CONDITIONING: f64 = 10.0;
pub const DEFAULT_RELAXATION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    #[serde(default = "default_scheme")]
    pub scheme: SchemeId,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<StartConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckConfig>>,
}

fn default_scheme() -> SchemeId {
    SchemeId::Sffpep
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
#[allow(clippy::large_enum_variant)]
pub enum ProblemConfig {
    // Empty braces (not a unit variant) so that stray keys are rejected.
    PaperExample {},
    Synthetic {
        n1: usize,
        n2: usize,
        n3: usize,
        /// Falls back to the run seed when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default = "default_conditioning")]
        conditioning: f64,
        contraction_rho: f64,
    },
    Inline {
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        c: SetConfig,
        q: SetConfig,
        u: MapConfig,
        t: MapConfig,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        known_solution: Option<PairConfig>,
    },
}

fn default_conditioning() -> f64 {
    DEFAULT_CONDITIONING
}

/// A pair `(x, y)` of coordinate lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub type StartConfig = PairConfig;

/// Set descriptors. Box bounds use `null` for an open side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetConfig {
    WholeSpace {
        dim: usize,
    },
    NonnegativeOrthant {
        dim: usize,
    },
    Box {
        lower: Vec<Option<f64>>,
        upper: Vec<Option<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    HalfSpace {
        normal: Vec<f64>,
        offset: f64,
    },
    Affine {
        basis: Vec<Vec<f64>>,
        shift: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MapConfig {
    Identity {},
    PaperRational {},
    PaperAffine {},
    ContractionToward { anchor: Vec<f64>, ratio: f64 },
    Projection { set: SetConfig },
    Relaxed { base: Box<MapConfig>, theta: f64 },
    Scaled { factor: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_fraction: Option<f64>,
    #[serde(default = "default_relaxation")]
    pub alpha: f64,
    #[serde(default = "default_relaxation")]
    pub beta: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_true")]
    pub validate_lambda: bool,
    #[serde(default)]
    pub step_bound: StepBoundRule,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            lambda: None,
            lambda_fraction: None,
            alpha: DEFAULT_RELAXATION,
            beta: DEFAULT_RELAXATION,
            max_iters: DEFAULT_MAX_ITERS,
            tol: DEFAULT_TOL,
            validate_lambda: true,
            step_bound: StepBoundRule::Sum,
        }
    }
}

fn default_relaxation() -> f64 {
    DEFAULT_RELAXATION
}

fn default_max_iters() -> usize {
    DEFAULT_MAX_ITERS
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

/// Which map a property check targets: one of the problem's (`"u"`, `"t"`)
/// or an inline descriptor.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MapTarget {
    Problem(ProblemMap),
    Inline(MapConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemMap {
    U,
    T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SetTarget {
    Problem(ProblemSet),
    Inline(SetConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemSet {
    C,
    Q,
}

// Hand-written so that errors inside an inline descriptor keep naming the
// offending key instead of collapsing into "no variant matched".
impl<'de> Deserialize<'de> for MapTarget {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        if value.is_string() {
            ProblemMap::deserialize(value)
                .map(MapTarget::Problem)
                .map_err(serde::de::Error::custom)
        } else {
            MapConfig::deserialize(value)
                .map(MapTarget::Inline)
                .map_err(serde::de::Error::custom)
        }
    }
}

impl<'de> Deserialize<'de> for SetTarget {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        if value.is_string() {
            ProblemSet::deserialize(value)
                .map(SetTarget::Problem)
                .map_err(serde::de::Error::custom)
        } else {
            SetConfig::deserialize(value)
                .map(SetTarget::Inline)
                .map_err(serde::de::Error::custom)
        }
    }
}

/// Sampling box for a property check; defaults depend on the check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "property", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CheckConfig {
    QuasiNonexpansive {
        map: MapTarget,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fixed_point: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sampler: Option<SamplerConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<usize>,
    },
    FirmlyQuasiNonexpansive {
        map: MapTarget,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fixed_point: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sampler: Option<SamplerConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<usize>,
    },
    ProjectionNonexpansive {
        set: SetTarget,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sampler: Option<SamplerConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<usize>,
    },
    Consistency {},
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
            .map_err(|e| CliError::config(format!("{}: {}", path.display(), e.message)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build_problem(&self, seed: u64) -> Result<SffpepProblem, CliError> {
        self.problem.build(seed)
    }

    /// Start point from the config, or the origin of each space.
    pub fn start_point(&self, p: &SffpepProblem) -> Result<(Point, Point), CliError> {
        match &self.start {
            Some(s) => Ok((point(&s.x, "start.x")?, point(&s.y, "start.y")?)),
            None => Ok((Point::zeros(p.n1()), Point::zeros(p.n2()))),
        }
    }

    pub fn solver_params(&self, p: &SffpepProblem) -> Result<SolverParams, CliError> {
        let c = &self.params;
        let fraction = match (c.lambda, c.lambda_fraction) {
            (Some(_), Some(_)) => {
                return Err(CliError::config(
                    "params: give either `lambda` or `lambda_fraction`, not both",
                ))
            }
            (Some(lambda), None) => {
                let mut params =
                    SolverParams::constant(lambda, c.alpha, c.beta, c.max_iters, c.tol)
                        .map_err(|e| CliError::config(format!("params: {e}")))?;
                params.validate_lambda = c.validate_lambda;
                params.step_bound_rule = c.step_bound;
                return Ok(params);
            }
            (None, fraction) => fraction.unwrap_or(DEFAULT_RELAXATION),
        };
        if c.validate_lambda {
            let mut params = make_params_for(
                p,
                self.scheme,
                c.step_bound,
                fraction,
                c.alpha,
                c.beta,
                c.max_iters,
                c.tol,
            )
            .map_err(|e| CliError::from_core("params.lambda_fraction", e))?;
            params.step_bound_rule = c.step_bound;
            Ok(params)
        } else {
            // Unvalidated: scale the bound by any positive fraction.
            let bound = SpectralRadii::of(p)
                .and_then(|r| r.lambda_bound(self.scheme, c.step_bound))
                .map_err(|e| CliError::from_core("params.lambda_fraction", e))?;
            let mut params =
                SolverParams::constant(fraction * bound, c.alpha, c.beta, c.max_iters, c.tol)
                    .map_err(|e| CliError::config(format!("params: {e}")))?;
            params.validate_lambda = false;
            params.step_bound_rule = c.step_bound;
            Ok(params)
        }
    }
}

pub(crate) fn point(coords: &[f64], field: &str) -> Result<Point, CliError> {
    Point::new(coords.to_vec()).map_err(|e| CliError::config(format!("{field}: {e}")))
}

fn operator(rows: &[Vec<f64>], field: &str) -> Result<DenseOperator, CliError> {
    DenseOperator::from_rows(rows.to_vec()).map_err(|e| CliError::config(format!("{field}: {e}")))
}

impl ProblemConfig {
    pub fn build(&self, seed: u64) -> Result<SffpepProblem, CliError> {
        match self {
            ProblemConfig::PaperExample {} => Ok(build_paper_example().problem),
            ProblemConfig::Synthetic {
                n1,
                n2,
                n3,
                seed: own_seed,
                conditioning,
                contraction_rho,
            } => generate_synthetic(&SyntheticSpec {
                n1: *n1,
                n2: *n2,
                n3: *n3,
                seed: own_seed.unwrap_or(seed),
                conditioning: *conditioning,
                contraction_rho: *contraction_rho,
            })
            .map_err(|e| CliError::config(format!("problem: {e}"))),
            ProblemConfig::Inline {
                a,
                b,
                c,
                q,
                u,
                t,
                known_solution,
            } => {
                let known = match known_solution {
                    Some(k) => Some((
                        point(&k.x, "problem.known_solution.x")?,
                        point(&k.y, "problem.known_solution.y")?,
                    )),
                    None => None,
                };
                let u_kind = u.build("problem.u")?;
                let t_kind = t.build("problem.t")?;
                let (x_star, y_star) = match &known {
                    Some((x, y)) => (Some(x.clone()), Some(y.clone())),
                    None => (None, None),
                };
                let c_set = c.build("problem.c")?;
                let q_set = q.build("problem.q")?;
                let u_fixed = x_star.or_else(|| u_kind.natural_fixed_point(c_set.dim()));
                let t_fixed = y_star.or_else(|| t_kind.natural_fixed_point(q_set.dim()));
                let u_map = QuasiNonexpansiveMap::new(u_kind, u_fixed)
                    .map_err(|e| CliError::config(format!("problem.u: {e}")))?;
                let t_map = QuasiNonexpansiveMap::new(t_kind, t_fixed)
                    .map_err(|e| CliError::config(format!("problem.t: {e}")))?;
                let p = SffpepProblem::new(
                    c_set,
                    q_set,
                    u_map,
                    t_map,
                    operator(a, "problem.a")?,
                    operator(b, "problem.b")?,
                )
                .map_err(|e| CliError::config(format!("problem: {e}")))?;
                match known {
                    Some((x, y)) => p
                        .with_known_solution(x, y)
                        .map_err(|e| CliError::config(format!("problem.known_solution: {e}"))),
                    None => Ok(p),
                }
            }
        }
    }
}

impl SetConfig {
    pub fn build(&self, field: &str) -> Result<ConvexSet, CliError> {
        let wrap = |e: splitsolve::Error| CliError::config(format!("{field}: {e}"));
        let set = match self {
            SetConfig::WholeSpace { dim } => ConvexSet::whole_space(*dim),
            SetConfig::NonnegativeOrthant { dim } => ConvexSet::nonnegative_orthant(*dim),
            SetConfig::Box { lower, upper } => ConvexSet::boxed(
                lower
                    .iter()
                    .map(|v| v.unwrap_or(f64::NEG_INFINITY))
                    .collect(),
                upper.iter().map(|v| v.unwrap_or(f64::INFINITY)).collect(),
            )
            .map_err(wrap)?,
            SetConfig::Ball { center, radius } => {
                ConvexSet::ball(point(center, field)?, *radius).map_err(wrap)?
            }
            SetConfig::HalfSpace { normal, offset } => {
                ConvexSet::half_space(point(normal, field)?, *offset).map_err(wrap)?
            }
            SetConfig::Affine { basis, shift } => ConvexSet::AffineSubspace(
                AffineSubspace::new(operator(basis, field)?, point(shift, field)?).map_err(wrap)?,
            ),
        };
        if set.dim() == 0 {
            return Err(CliError::config(format!(
                "{field}: dimension must be at least 1"
            )));
        }
        Ok(set)
    }
}

impl MapConfig {
    pub fn build(&self, field: &str) -> Result<MapKind, CliError> {
        let kind = match self {
            MapConfig::Identity {} => MapKind::Identity,
            MapConfig::PaperRational {} => MapKind::PaperRational,
            MapConfig::PaperAffine {} => MapKind::PaperAffine,
            MapConfig::ContractionToward { anchor, ratio } => MapKind::ContractionToward {
                anchor: point(anchor, field)?,
                ratio: *ratio,
            },
            MapConfig::Projection { set } => MapKind::ProjectionMap(set.build(field)?),
            MapConfig::Relaxed { base, theta } => MapKind::RelaxedMap {
                base: Box::new(base.build(field)?),
                theta: *theta,
            },
            MapConfig::Scaled { factor } => MapKind::Scaled { factor: *factor },
        };
        kind.validate()
            .map_err(|e| CliError::config(format!("{field}: {e}")))?;
        Ok(kind)
    }
}
