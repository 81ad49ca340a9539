use splitsolve::algorithms::SchemeId;
use splitsolve_cli::config::{CheckConfig, MapConfig, MapTarget, ProblemConfig, SetConfig};
use splitsolve_cli::{RunConfig, Status};

const CONFIG_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");

fn shipped_configs() -> Vec<(String, String)> {
    let mut out: Vec<_> = std::fs::read_dir(CONFIG_DIR)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| {
            (
                p.display().to_string(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn shipped_configs_round_trip() {
    let configs = shipped_configs();
    assert!(configs.len() >= 4);
    for (name, text) in configs {
        let parsed = RunConfig::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = RunConfig::parse(&parsed.to_json()).unwrap();
        assert_eq!(parsed, again, "{name}");
        // Semantic identity: the built problems agree too.
        assert_eq!(
            parsed.build_problem(42).unwrap(),
            again.build_problem(42).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn defaults_are_filled_in() {
    let cfg = RunConfig::parse(r#"{"problem": {"kind": "paper-example"}}"#).unwrap();
    assert_eq!(cfg.scheme, SchemeId::Sffpep);
    assert!(cfg.params.validate_lambda);
    assert_eq!(cfg.params.max_iters, 10_000);
    let p = cfg.build_problem(42).unwrap();
    let params = cfg.solver_params(&p).unwrap();
    assert!((params.lambda.at(1) - 1.0 / 17.0).abs() < 1e-12);
    assert_eq!(cfg.start_point(&p).unwrap().0.coords(), &[0.0]);
}

#[test]
fn unknown_keys_are_named() {
    let cases = [
        (
            r#"{"problem": {"kind": "paper-example"}, "sheme": "sffpep"}"#,
            "sheme",
        ),
        (r#"{"problem": {"kind": "paper-example", "dim": 2}}"#, "dim"),
        (
            r#"{"problem": {"kind": "paper-example"}, "params": {"lamda": 0.1}}"#,
            "lamda",
        ),
        (
            r#"{"problem": {"kind": "paper-example"}, "output": {"csv": "a"}}"#,
            "csv",
        ),
        (
            r#"{"problem": {"kind": "paper-example"}, "checks": [{"property": "consistency", "extra": 1}]}"#,
            "extra",
        ),
        (
            r#"{"problem": {"kind": "paper-example"}, "checks": [{"property": "projection-nonexpansive", "set": {"kind": "ball", "center": [0], "radius": 1, "centre": [1]}}]}"#,
            "centre",
        ),
    ];
    for (text, key) in cases {
        let err = RunConfig::parse(text).unwrap_err();
        assert_eq!(err.status, Status::ConfigError);
        assert!(
            err.message.contains(&format!("`{key}`")),
            "{key}: {}",
            err.message
        );
    }
}

#[test]
fn inline_problem_with_open_box_sides() {
    let text = r#"{
        "problem": {
            "kind": "inline",
            "a": [[2.0]], "b": [[1.0]],
            "c": {"kind": "box", "lower": [null], "upper": [3.0]},
            "q": {"kind": "whole-space", "dim": 1},
            "u": {"kind": "relaxed", "base": {"kind": "paper-affine"}, "theta": 0.5},
            "t": {"kind": "identity"},
            "known_solution": {"x": [1.25], "y": [2.5]}
        }
    }"#;
    let cfg = RunConfig::parse(text).unwrap();
    match &cfg.problem {
        ProblemConfig::Inline {
            c: SetConfig::Box { lower, .. },
            u: MapConfig::Relaxed { .. },
            ..
        } => {
            assert_eq!(lower, &vec![None]);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(cfg.to_json().contains("null"));
    let p = cfg.build_problem(1).unwrap();
    assert_eq!(
        p.c.project(&splitsolve::hilbert::Point::scalar(-1e6))
            .unwrap()
            .coords(),
        &[-1e6]
    );
    assert_eq!(p.u.fixed_point.as_ref().unwrap().coords(), &[1.25]);
}

#[test]
fn map_targets_accept_names_and_descriptors() {
    let cfg = RunConfig::parse(
        r#"{"problem": {"kind": "paper-example"}, "checks": [
            {"property": "quasi-nonexpansive", "map": "u"},
            {"property": "firmly-quasi-nonexpansive", "map": {"kind": "identity"}, "fixed_point": [1, 2]}
        ]}"#,
    )
    .unwrap();
    let checks = cfg.checks.unwrap();
    assert!(matches!(
        &checks[0],
        CheckConfig::QuasiNonexpansive {
            map: MapTarget::Problem(_),
            ..
        }
    ));
    assert!(matches!(
        &checks[1],
        CheckConfig::FirmlyQuasiNonexpansive {
            map: MapTarget::Inline(MapConfig::Identity {}),
            ..
        }
    ));
    assert!(RunConfig::parse(r#"{"problem": {"kind": "paper-example"}, "checks": [{"property": "quasi-nonexpansive", "map": "v"}]}"#).is_err());
}

#[test]
fn invalid_values_name_their_field() {
    let cfg = RunConfig::parse(
        r#"{"problem": {"kind": "inline", "a": [[1]], "b": [[1]],
            "c": {"kind": "ball", "center": [0], "radius": -1},
            "q": {"kind": "whole-space", "dim": 1}, "u": {"kind": "identity"}, "t": {"kind": "identity"}}}"#,
    )
    .unwrap();
    let err = cfg.build_problem(42).unwrap_err();
    assert!(err.message.starts_with("problem.c"), "{}", err.message);

    let cfg = RunConfig::parse(r#"{"problem": {"kind": "paper-example"}, "params": {"lambda": 0.1, "lambda_fraction": 0.5}}"#)
        .unwrap();
    let p = cfg.build_problem(42).unwrap();
    assert!(cfg
        .solver_params(&p)
        .unwrap_err()
        .message
        .contains("lambda_fraction"));

    let cfg = RunConfig::parse(
        r#"{"problem": {"kind": "synthetic", "n1": 0, "n2": 1, "n3": 1, "contraction_rho": 0.5}}"#,
    )
    .unwrap();
    assert!(cfg
        .build_problem(42)
        .unwrap_err()
        .message
        .starts_with("problem"));
}

#[test]
fn synthetic_seed_falls_back_to_run_seed() {
    let cfg = RunConfig::parse(
        r#"{"problem": {"kind": "synthetic", "n1": 2, "n2": 2, "n3": 2, "contraction_rho": 0.5}}"#,
    )
    .unwrap();
    assert_eq!(cfg.build_problem(3).unwrap(), cfg.build_problem(3).unwrap());
    assert_ne!(cfg.build_problem(3).unwrap(), cfg.build_problem(4).unwrap());
}
