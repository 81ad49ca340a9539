use std::path::{Path, PathBuf};

use serde::Serialize;

use splitsolve::algorithms::{solve, SchemeId, SffpepProblem, Termination};
use splitsolve::diagnostics::{
    check_firmly_quasi_nonexpansive, check_lyapunov, check_problem_consistency,
    check_projection_nonexpansive, check_quasi_nonexpansive, BoxSampler, PropertyCheckReport,
    DEFAULT_SAMPLES,
};
use splitsolve::hilbert::{
    spectral_radius_gram, step_size_bound, ConvexSet, Point, QuasiNonexpansiveMap,
    SpectralEstimate, DEFAULT_SEED, DEFAULT_SPECTRAL_MAX_ITERS, DEFAULT_SPECTRAL_TOL,
};
use splitsolve::library::tables::{self, TableReport};

use crate::config::{
    point, CheckConfig, MapTarget, ProblemMap, ProblemSet, RunConfig, SamplerConfig, SetTarget,
};
use crate::error::{CliError, Status};
use crate::output::{trace_csv, write_atomic, write_json};

pub const SEED_ENV: &str = "SPLITSOLVE_SEED";
const LYAPUNOV_SLACK: f64 = 1e-10;
const MAP_SAMPLER: SamplerConfig = SamplerConfig {
    lower: 0.0,
    upper: 100.0,
};
const SET_SAMPLER: SamplerConfig = SamplerConfig {
    lower: -100.0,
    upper: 100.0,
};

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub trace: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

/// Flag, then config, then the environment, then the built-in default.
pub fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag.or(config) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("{SEED_ENV}: `{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Debug, Serialize)]
struct SolveReport {
    scheme: SchemeId,
    termination: Termination,
    iterations: usize,
    lambda: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    coupling_residual: Option<f64>,
    fix_residual_u: Option<f64>,
    fix_residual_t: Option<f64>,
    lyapunov: Option<f64>,
    lyapunov_monotone: Option<bool>,
    error: Option<String>,
}

pub fn cmd_solve(config_path: &Path, ov: &Overrides) -> Result<Status, CliError> {
    let mut cfg = RunConfig::load(config_path)?;
    if let Some(n) = ov.max_iters {
        cfg.params.max_iters = n;
    }
    if let Some(t) = ov.tol {
        cfg.params.tol = t;
    }
    let seed = resolve_seed(ov.seed, cfg.seed)?;
    let problem = cfg.build_problem(seed)?;
    let params = cfg.solver_params(&problem)?;
    let (x0, y0) = cfg.start_point(&problem)?;
    let result = solve(&problem, &params, cfg.scheme, x0, y0)
        .map_err(|e| CliError::from_core("params", e))?;

    if let Some(path) = ov.trace.as_ref().or(cfg.output.trace.as_ref()) {
        write_atomic(path, &trace_csv(&result.trace, problem.n1(), problem.n2()))?;
    }

    let last = result.last_record();
    let monotone = if problem.known_solution().is_some() {
        check_lyapunov(&result.trace, LYAPUNOV_SLACK)
            .ok()
            .map(|l| l.monotone)
    } else {
        None
    };
    let error = result
        .error
        .as_ref()
        .map(|e| format!("iteration {}: {e}", result.trace.len()));

    println!("scheme:      {}", cfg.scheme);
    println!("termination: {:?}", result.termination);
    println!("iterations:  {}", result.iterations);
    println!("lambda:      {}", params.lambda.at(1));
    if let Some(r) = last {
        println!("coupling residual:  {:e}", r.coupling_residual);
        println!("fix residual U:     {:e}", r.fix_residual_u);
        println!("fix residual T:     {:e}", r.fix_residual_t);
        if let Some(l) = r.lyapunov {
            println!("lyapunov:           {l:e}");
        }
    }
    if let Some(m) = monotone {
        println!("lyapunov monotone:  {m}");
    }
    println!("x = {}", result.final_state.x);
    println!("y = {}", result.final_state.y);
    if let Some(e) = &error {
        eprintln!("numeric error at {e}");
    }

    if let Some(path) = ov.report.as_ref().or(cfg.output.report.as_ref()) {
        write_json(
            path,
            &SolveReport {
                scheme: cfg.scheme,
                termination: result.termination,
                iterations: result.iterations,
                lambda: params.lambda.at(1),
                x: result.final_state.x.coords().to_vec(),
                y: result.final_state.y.coords().to_vec(),
                coupling_residual: last.map(|r| r.coupling_residual),
                fix_residual_u: last.map(|r| r.fix_residual_u),
                fix_residual_t: last.map(|r| r.fix_residual_t),
                lyapunov: last.and_then(|r| r.lyapunov),
                lyapunov_monotone: monotone,
                error,
            },
        )?;
    }

    Ok(match result.termination {
        Termination::ResidualTolMet => Status::Converged,
        Termination::MaxIters => Status::MaxIters,
        Termination::NumericError => Status::NumericError,
    })
}

fn read_fixture(dir: &Path, name: &str) -> Result<Vec<tables::FixtureRow>, CliError> {
    let path = dir.join(name);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::config(format!("cannot read fixture {}: {e}", path.display())))?;
    tables::parse_fixture(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

pub fn cmd_reproduce_tables(fixtures: Option<&Path>, ov: &Overrides) -> Result<Status, CliError> {
    let (t1, t2) = match fixtures {
        Some(dir) => (
            read_fixture(dir, "table1.csv")?,
            read_fixture(dir, "table2.csv")?,
        ),
        None => (
            tables::parse_fixture(tables::TABLE1_CSV)
                .map_err(|e| CliError::config(e.to_string()))?,
            tables::parse_fixture(tables::TABLE2_CSV)
                .map_err(|e| CliError::config(e.to_string()))?,
        ),
    };
    let report: TableReport = tables::reproduce_tables(&t1, &t2, tables::TABLE_TOL)
        .map_err(|e| CliError::new(Status::NumericError, format!("recurrence: {e}")))?;

    println!(
        "{:>5} {:>5} {:>18} {:>18} {:>18} {:>18} {:>6}",
        "table", "n", "x printed", "x computed", "y printed", "y computed", "match"
    );
    for r in &report.rows {
        println!(
            "{:>5} {:>5} {:>18.10} {:>18.10} {:>18.10} {:>18.10} {:>6}",
            r.table,
            r.n,
            r.expected.0,
            r.computed.0,
            r.expected.1,
            r.computed.1,
            if r.passed { "ok" } else { "FAIL" }
        );
    }
    println!(
        "{}/{} rows match within {:e}",
        report.passed_count(),
        report.rows.len(),
        report.tol
    );
    if let Some(path) = &ov.report {
        write_json(path, &report)?;
    }
    match report.first_failure() {
        None => Ok(Status::Converged),
        Some(r) => Err(CliError::new(
            Status::TableMismatch,
            format!(
                "first mismatch: table {} row n={} (printed x={}, y={}; computed x={}, y={})",
                r.table, r.n, r.expected.0, r.expected.1, r.computed.0, r.computed.1
            ),
        )),
    }
}

fn default_checks(p: &SffpepProblem) -> Vec<CheckConfig> {
    let mut checks = Vec::new();
    if p.known_solution().is_some() {
        checks.push(CheckConfig::Consistency {});
    }
    for map in [ProblemMap::U, ProblemMap::T] {
        checks.push(CheckConfig::QuasiNonexpansive {
            map: MapTarget::Problem(map),
            fixed_point: None,
            sampler: None,
            samples: None,
        });
    }
    for set in [ProblemSet::C, ProblemSet::Q] {
        checks.push(CheckConfig::ProjectionNonexpansive {
            set: SetTarget::Problem(set),
            sampler: None,
            samples: None,
        });
    }
    checks
}

/// The map a check targets together with the point it is certified about.
fn resolve_map(
    p: &SffpepProblem,
    target: &MapTarget,
    fixed_point: &Option<Vec<f64>>,
    field: &str,
) -> Result<(QuasiNonexpansiveMap, Point), CliError> {
    let (map, dim) = match target {
        MapTarget::Problem(ProblemMap::U) => (p.u.clone(), p.n1()),
        MapTarget::Problem(ProblemMap::T) => (p.t.clone(), p.n2()),
        MapTarget::Inline(desc) => {
            let kind = desc.build(field)?;
            let dim = fixed_point
                .as_ref()
                .map(Vec::len)
                .or(kind.dim())
                .unwrap_or(1);
            let fp = kind.natural_fixed_point(dim);
            let map = QuasiNonexpansiveMap::new(kind, fp)
                .map_err(|e| CliError::config(format!("{field}: {e}")))?;
            (map, dim)
        }
    };
    let q = match fixed_point {
        Some(coords) => point(coords, &format!("{field}.fixed_point"))?,
        None => map
            .fixed_point
            .clone()
            .or_else(|| map.kind.natural_fixed_point(dim))
            .ok_or_else(|| {
                CliError::config(format!(
                    "{field}: no fixed point declared; set `fixed_point`"
                ))
            })?,
    };
    Ok((map, q))
}

fn sampler(
    cfg: &Option<SamplerConfig>,
    default: &SamplerConfig,
    dim: usize,
    field: &str,
) -> Result<BoxSampler, CliError> {
    let s = cfg.as_ref().unwrap_or(default);
    BoxSampler::cube(dim, s.lower, s.upper)
        .map_err(|e| CliError::config(format!("{field}.sampler: {e}")))
}

fn run_check(
    p: &SffpepProblem,
    check: &CheckConfig,
    seed: u64,
    field: &str,
) -> Result<PropertyCheckReport, CliError> {
    let core = |e: splitsolve::Error| CliError::config(format!("{field}: {e}"));
    match check {
        CheckConfig::Consistency {} => Ok(check_problem_consistency(p)),
        CheckConfig::QuasiNonexpansive {
            map,
            fixed_point,
            sampler: s,
            samples,
        } => {
            let (m, q) = resolve_map(p, map, fixed_point, &format!("{field}.map"))?;
            let b = sampler(s, &MAP_SAMPLER, q.dim(), field)?;
            check_quasi_nonexpansive(&m, &q, &b, samples.unwrap_or(DEFAULT_SAMPLES), seed)
                .map_err(core)
        }
        CheckConfig::FirmlyQuasiNonexpansive {
            map,
            fixed_point,
            sampler: s,
            samples,
        } => {
            let (m, q) = resolve_map(p, map, fixed_point, &format!("{field}.map"))?;
            let b = sampler(s, &MAP_SAMPLER, q.dim(), field)?;
            check_firmly_quasi_nonexpansive(&m, &q, &b, samples.unwrap_or(DEFAULT_SAMPLES), seed)
                .map_err(core)
        }
        CheckConfig::ProjectionNonexpansive {
            set,
            sampler: s,
            samples,
        } => {
            let set: ConvexSet = match set {
                SetTarget::Problem(ProblemSet::C) => p.c.clone(),
                SetTarget::Problem(ProblemSet::Q) => p.q.clone(),
                SetTarget::Inline(desc) => desc.build(&format!("{field}.set"))?,
            };
            let b = sampler(s, &SET_SAMPLER, set.dim(), field)?;
            check_projection_nonexpansive(&set, &b, samples.unwrap_or(DEFAULT_SAMPLES), seed)
                .map_err(core)
        }
    }
}

pub fn cmd_check(config_path: &Path, ov: &Overrides) -> Result<Status, CliError> {
    let cfg = RunConfig::load(config_path)?;
    let seed = resolve_seed(ov.seed, cfg.seed)?;
    let problem = cfg.build_problem(seed)?;
    let checks = cfg
        .checks
        .clone()
        .unwrap_or_else(|| default_checks(&problem));

    let mut reports = Vec::with_capacity(checks.len());
    for (i, check) in checks.iter().enumerate() {
        let report = run_check(&problem, check, seed, &format!("checks[{i}]"))?;
        let verdict = if report.passed { "PASS" } else { "FAIL" };
        println!(
            "[{verdict}] {:?} — {} ({} samples, seed {})",
            report.property, report.subject, report.samples, report.seed
        );
        if let Some(v) = report.violations.first() {
            let witness: Vec<String> = v.witness.iter().map(|w| w.to_string()).collect();
            println!(
                "       {} violation(s); first at sample {}: {} — lhs {:e} > rhs {:e}; witness {}",
                report.violations.len(),
                v.index,
                v.label,
                v.lhs,
                v.rhs,
                witness.join(", ")
            );
        }
        reports.push(report);
    }
    if let Some(path) = ov.report.as_ref().or(cfg.output.report.as_ref()) {
        write_json(path, &reports)?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{}/{} checks passed", reports.len() - failed, reports.len());
    Ok(if failed == 0 {
        Status::Converged
    } else {
        Status::PropertyViolation
    })
}

#[derive(Debug, Serialize)]
struct SpectralReport {
    l1: SpectralEstimate,
    l2: SpectralEstimate,
    step_bound: Option<f64>,
    seed: u64,
}

pub fn cmd_spectral(config_path: &Path, ov: &Overrides) -> Result<Status, CliError> {
    let cfg = RunConfig::load(config_path)?;
    let seed = resolve_seed(ov.seed, cfg.seed)?;
    let problem = cfg.build_problem(seed)?;
    let tol = ov.tol.unwrap_or(DEFAULT_SPECTRAL_TOL);
    let max_iters = ov.max_iters.unwrap_or(DEFAULT_SPECTRAL_MAX_ITERS);
    let estimate = |field: &str, op| {
        spectral_radius_gram(op, tol, max_iters, seed)
            .map_err(|e| CliError::config(format!("{field}: {e}")))
    };
    let l1 = estimate("problem.a", &problem.a)?;
    let l2 = estimate("problem.b", &problem.b)?;
    let bound = step_size_bound(l1.value, l2.value).ok();

    for (name, e) in [("L1", &l1), ("L2", &l2)] {
        println!(
            "{name} = {}  (iterations {}, converged {}, tol {:e})",
            e.value, e.iterations_used, e.converged, e.tolerance
        );
    }
    match bound {
        Some(b) => println!("step bound 2/(L1+L2) = {b}"),
        None => println!("step bound: none (both operators are zero)"),
    }
    if let Some(path) = ov.report.as_ref().or(cfg.output.report.as_ref()) {
        write_json(
            path,
            &SpectralReport {
                l1,
                l2,
                step_bound: bound,
                seed,
            },
        )?;
    }
    if !(l1.converged && l2.converged) {
        return Err(CliError::new(
            Status::SpectralNotConverged,
            format!("power iteration did not converge within {max_iters} iterations"),
        ));
    }
    Ok(Status::Converged)
}
