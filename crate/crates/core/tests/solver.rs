use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitsolve::algorithms::{
    corollary_iterate, landweber_iterate, make_params, make_params_for, moudafi_alshemas_iterate,
    sffpep_iterate, solve, yuan_iterate, IterateState, Schedule, ScheduleKind, SchemeId,
    SffpepProblem, SolverParams, StepBoundRule, Termination,
};
use splitsolve::diagnostics::check_lyapunov;
use splitsolve::hilbert::{ConvexSet, DenseOperator, MapKind, Point, QuasiNonexpansiveMap};
use splitsolve::library::{build_paper_example, generate_synthetic, SyntheticSpec};
use splitsolve::Error;

fn scalar(v: f64) -> Point {
    Point::scalar(v)
}

fn synthetic(seed: u64, rho: f64) -> SffpepProblem {
    generate_synthetic(&SyntheticSpec {
        n1: 4,
        n2: 3,
        n3: 5,
        seed,
        conditioning: 5.0,
        contraction_rho: rho,
    })
    .unwrap()
}

/// A split feasibility instance (B = I, n2 = n3) with a known solution, usable
/// by every scheme including the single-space ones.
fn sfp_problem() -> SffpepProblem {
    let a = DenseOperator::from_rows(vec![vec![1.0, 0.5], vec![-0.5, 2.0]]).unwrap();
    let x_star = Point::new(vec![1.0, 2.0]).unwrap();
    let y_star = a.apply(&x_star).unwrap();
    SffpepProblem::new(
        ConvexSet::nonnegative_orthant(2),
        ConvexSet::ball(y_star.clone(), 1.0).unwrap(),
        QuasiNonexpansiveMap::contraction_toward(x_star.clone(), 0.5).unwrap(),
        QuasiNonexpansiveMap::contraction_toward(y_star.clone(), 0.5).unwrap(),
        a,
        DenseOperator::identity(2),
    )
    .unwrap()
    .with_known_solution(x_star, y_star)
    .unwrap()
}

#[test]
fn paper_example_with_admissible_lambda_converges() {
    let ex = build_paper_example();
    let params = SolverParams::constant(0.1, ex.alpha, ex.beta, 100_000, 1e-10).unwrap();
    let res = solve(
        &ex.problem,
        &params,
        SchemeId::Sffpep,
        scalar(10.0),
        scalar(15.0),
    )
    .unwrap();
    assert_eq!(
        res.termination,
        Termination::ResidualTolMet,
        "{:?}",
        res.error
    );
    let last = res.last_record().unwrap();
    assert!(last.coupling_residual <= 1e-6);
    let (x, y) = (res.final_state.x.coords()[0], res.final_state.y.coords()[0]);
    assert!((x - 4.0 * y).abs() <= 1e-4);
    assert!((x - 5.0).abs() < 1e-6 && (y - 1.25).abs() < 1e-6);
    assert!(check_lyapunov(&res.trace, 1e-10).unwrap().monotone);
}

#[test]
fn paper_lambda_is_rejected_unless_validation_is_off() {
    let ex = build_paper_example();
    let mut params = SolverParams::constant(ex.lambda, ex.alpha, ex.beta, 50, 1e-10).unwrap();
    let err = solve(
        &ex.problem,
        &params,
        SchemeId::Sffpep,
        scalar(10.0),
        scalar(15.0),
    )
    .unwrap_err();
    assert!(matches!(
        err,
        Error::InvalidParameter { name: "lambda", .. }
    ));
    assert!(err.to_string().contains("2/(L1+L2)"));

    params.validate_lambda = false;
    let res = solve(
        &ex.problem,
        &params,
        SchemeId::Sffpep,
        scalar(10.0),
        scalar(15.0),
    )
    .unwrap();
    assert_eq!(res.trace.len(), res.iterations);
    assert!(res.iterations > 0);
}

#[test]
fn start_at_known_solution_terminates_immediately() {
    let ex = build_paper_example();
    let params = SolverParams::constant(0.1, 0.2, 0.125, 100, 1e-12).unwrap();
    let res = solve(
        &ex.problem,
        &params,
        SchemeId::Sffpep,
        scalar(5.0),
        scalar(1.25),
    )
    .unwrap();
    assert_eq!(res.termination, Termination::ResidualTolMet);
    assert_eq!(res.iterations, 1);
    assert!(res.last_record().unwrap().composite_residual() <= 1e-12);
}

#[test]
fn zero_iterations_is_max_iters() {
    let ex = build_paper_example();
    let params = SolverParams::constant(0.1, 0.2, 0.125, 0, 1e-12).unwrap();
    let res = solve(
        &ex.problem,
        &params,
        SchemeId::Sffpep,
        scalar(10.0),
        scalar(15.0),
    )
    .unwrap();
    assert_eq!(res.termination, Termination::MaxIters);
    assert!(res.trace.is_empty());
    assert_eq!(res.iterations, 0);
}

#[test]
fn domain_failure_mid_run_is_numeric_error_with_partial_trace() {
    // Without projection onto [0, ∞) the rational map eventually sees a negative input.
    let p = SffpepProblem::new(
        ConvexSet::whole_space(1),
        ConvexSet::whole_space(1),
        QuasiNonexpansiveMap::paper_rational(1),
        QuasiNonexpansiveMap::paper_affine(1),
        DenseOperator::scalar(1.0),
        DenseOperator::scalar(4.0),
    )
    .unwrap();
    let mut params = SolverParams::constant(1.0, 0.2, 0.125, 100, 1e-12).unwrap();
    params.validate_lambda = false;
    let res = solve(&p, &params, SchemeId::Sffpep, scalar(10.0), scalar(15.0)).unwrap();
    assert_eq!(res.termination, Termination::NumericError);
    assert!(matches!(res.error, Some(Error::Domain { .. })));
    assert_eq!(res.trace.len(), res.iterations);
}

#[test]
fn divergent_step_surfaces_as_numeric_error() {
    let p = SffpepProblem::new(
        ConvexSet::whole_space(1),
        ConvexSet::whole_space(1),
        QuasiNonexpansiveMap::identity(),
        QuasiNonexpansiveMap::identity(),
        DenseOperator::scalar(1.0),
        DenseOperator::scalar(1.0),
    )
    .unwrap();
    let mut params = SolverParams::constant(50.0, 0.5, 0.5, 10_000, 1e-12).unwrap();
    params.validate_lambda = false;
    let res = solve(&p, &params, SchemeId::Landweber, scalar(1.0), scalar(0.0)).unwrap();
    assert_eq!(res.termination, Termination::NumericError);
    assert!(matches!(res.error, Some(Error::NumericOverflow { .. })));
}

#[test]
fn make_params_examples() {
    let ex = build_paper_example();
    let params = make_params(&ex.problem, 0.5, 0.2, 0.125, 10, 1e-8).unwrap();
    let lambda = params.lambda.at(1);
    assert!((lambda - 1.0 / 17.0).abs() < 1e-12);

    let id = SffpepProblem::new(
        ConvexSet::whole_space(3),
        ConvexSet::whole_space(3),
        QuasiNonexpansiveMap::identity(),
        QuasiNonexpansiveMap::identity(),
        DenseOperator::identity(3),
        DenseOperator::identity(3),
    )
    .unwrap();
    assert!(
        (make_params(&id, 0.5, 0.5, 0.5, 10, 1e-8)
            .unwrap()
            .lambda
            .at(1)
            - 0.5)
            .abs()
            < 1e-12
    );

    assert!(make_params(&id, 1.0, 0.5, 0.5, 10, 1e-8).is_err());
    assert!(make_params(&id, 1.2, 0.5, 0.5, 10, 1e-8).is_err());
    assert!(make_params(&id, 0.5, 1.0, 0.5, 10, 1e-8).is_err());
    assert!(make_params(&id, 0.5, 0.5, 0.0, 10, 1e-8).is_err());
}

#[test]
fn product_bound_rule() {
    let ex = build_paper_example();
    let sum = make_params_for(
        &ex.problem,
        SchemeId::Moudafi,
        StepBoundRule::Sum,
        0.5,
        0.5,
        0.5,
        10,
        1e-8,
    )
    .unwrap();
    let product = make_params_for(
        &ex.problem,
        SchemeId::Moudafi,
        StepBoundRule::Product,
        0.5,
        0.5,
        0.5,
        10,
        1e-8,
    )
    .unwrap();
    assert!((sum.lambda.at(1) - 1.0 / 17.0).abs() < 1e-12);
    assert!((product.lambda.at(1) - 1.0 / 16.0).abs() < 1e-12);
    let chen = make_params_for(
        &sfp_problem(),
        SchemeId::Chen,
        StepBoundRule::Sum,
        0.5,
        0.5,
        0.5,
        10,
        1e-8,
    )
    .unwrap();
    assert!(
        chen.lambda.upper
            < make_params(&sfp_problem(), 0.5, 0.5, 0.5, 10, 1e-8)
                .unwrap()
                .lambda
                .upper
    );
}

#[test]
fn schedules_are_checked_per_iteration() {
    let p = synthetic(3, 0.5);
    let mut params = make_params(&p, 0.5, 0.5, 0.5, 200, 1e-8).unwrap();
    params.beta = Schedule {
        kind: ScheduleKind::Sequence(vec![0.5, 0.4, 1.0]),
        lower: 0.0,
        upper: 2.0,
    };
    params.beta.upper = 1.0;
    let err = solve(
        &p,
        &params,
        SchemeId::Sffpep,
        Point::zeros(4),
        Point::zeros(3),
    )
    .unwrap_err();
    assert!(matches!(err, Error::InvalidParameter { name: "beta", .. }));

    params.beta = Schedule::new(
        ScheduleKind::Harmonic {
            base: 0.9,
            floor: 0.3,
        },
        0.2,
        1.0,
        "beta",
    )
    .unwrap();
    let res = solve(
        &p,
        &params,
        SchemeId::Sffpep,
        Point::zeros(4),
        Point::zeros(3),
    )
    .unwrap();
    assert_eq!(res.termination, Termination::ResidualTolMet);
}

#[test]
fn solve_is_deterministic() {
    let p = synthetic(11, 0.7);
    let params = make_params(&p, 0.9, 0.5, 0.5, 10_000, 1e-8).unwrap();
    let a = solve(
        &p,
        &params,
        SchemeId::Sffpep,
        Point::filled(4, 3.0),
        Point::zeros(3),
    )
    .unwrap();
    let b = solve(
        &p,
        &params,
        SchemeId::Sffpep,
        Point::filled(4, 3.0),
        Point::zeros(3),
    )
    .unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.final_state, b.final_state);
}

#[test]
fn every_scheme_leaves_the_solution_fixed() {
    let p = sfp_problem();
    let (xs, ys) = p
        .known_solution()
        .map(|(x, y)| (x.clone(), y.clone()))
        .unwrap();
    for scheme in SchemeId::ALL {
        let params =
            make_params_for(&p, scheme, StepBoundRule::Sum, 0.5, 0.5, 0.5, 1, 0.0).unwrap();
        let res = solve(&p, &params, scheme, xs.clone(), ys.clone()).unwrap();
        assert!(
            res.last_record().unwrap().composite_residual() <= 1e-12,
            "{scheme}"
        );
        assert!(
            res.final_state.x.max_abs_diff(&xs).unwrap() <= 1e-12,
            "{scheme}"
        );
        assert!(
            res.final_state.y.max_abs_diff(&ys).unwrap() <= 1e-12,
            "{scheme}"
        );
    }
}

#[test]
fn lyapunov_decreases_for_fejer_schemes() {
    for seed in 0..4 {
        let p = synthetic(seed, 0.6);
        for scheme in [
            SchemeId::Sffpep,
            SchemeId::Corollary,
            SchemeId::Moudafi,
            SchemeId::Landweber,
            SchemeId::Yuan,
        ] {
            let params =
                make_params_for(&p, scheme, StepBoundRule::Sum, 0.9, 0.4, 0.6, 2_000, 1e-10)
                    .unwrap();
            let res = solve(&p, &params, scheme, Point::filled(4, 4.0), Point::zeros(3)).unwrap();
            let lt = check_lyapunov(&res.trace, 1e-10).unwrap();
            assert!(
                lt.monotone,
                "{scheme} seed {seed} at {:?}",
                lt.first_violation
            );
        }
    }
}

#[test]
fn sfp_shaped_schemes_converge() {
    // The CQ method only targets C ∩ A⁻¹(Q), so judge it on a problem whose
    // maps are the projections themselves.
    let mut p = sfp_problem();
    p.u = QuasiNonexpansiveMap::projection(p.c.clone());
    p.t = QuasiNonexpansiveMap::projection(p.q.clone());
    for scheme in [SchemeId::Byrne, SchemeId::Chen, SchemeId::Chidume] {
        let params =
            make_params_for(&p, scheme, StepBoundRule::Sum, 0.8, 0.5, 0.3, 100_000, 1e-9).unwrap();
        let res = solve(
            &p,
            &params,
            scheme,
            Point::new(vec![5.0, 0.0]).unwrap(),
            Point::zeros(2),
        )
        .unwrap();
        assert_eq!(res.termination, Termination::ResidualTolMet, "{scheme}");
    }
}

#[test]
fn byrne_and_chen_require_sfp_shape() {
    let p = synthetic(1, 0.5);
    let params = SolverParams::constant(0.01, 0.5, 0.5, 10, 1e-8).unwrap();
    for scheme in [SchemeId::Byrne, SchemeId::Chen] {
        assert!(matches!(
            solve(&p, &params, scheme, Point::zeros(4), Point::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

#[test]
fn start_dimension_mismatch_is_an_error() {
    let p = synthetic(1, 0.5);
    let params = SolverParams::constant(0.01, 0.5, 0.5, 10, 1e-8).unwrap();
    assert!(solve(
        &p,
        &params,
        SchemeId::Sffpep,
        Point::zeros(3),
        Point::zeros(3)
    )
    .is_err());
}

fn random_state(rng: &mut ChaCha8Rng, n1: usize, n2: usize) -> IterateState {
    let x = Point::new((0..n1).map(|_| rng.gen_range(0.0..10.0)).collect()).unwrap();
    let y = Point::new((0..n2).map(|_| rng.gen_range(0.0..10.0)).collect()).unwrap();
    IterateState::start(x, y)
}

fn with_whole_space(p: &SffpepProblem) -> SffpepProblem {
    let mut q = p.clone();
    q.c = ConvexSet::whole_space(p.n1());
    q.q = ConvexSet::whole_space(p.n2());
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_chain_holds(seed in 0u64..1000, lambda in 0.001f64..0.05, alpha in 0.05f64..0.95) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = synthetic(seed, 0.5);
        let s = random_state(&mut rng, 4, 3);

        let whole = with_whole_space(&p);
        let a = sffpep_iterate(&whole, &s, lambda, alpha, 0.0).unwrap();
        let b = corollary_iterate(&whole, &s, lambda, alpha).unwrap();
        prop_assert!(a.x.max_abs_diff(&b.x).unwrap() <= 1e-14);
        prop_assert!(a.y.max_abs_diff(&b.y).unwrap() <= 1e-14);

        let a = yuan_iterate(&p, &s, lambda, 1.0).unwrap();
        let b = moudafi_alshemas_iterate(&p, &s, lambda).unwrap();
        prop_assert!(a.x.max_abs_diff(&b.x).unwrap() <= 1e-14);
        prop_assert!(a.y.max_abs_diff(&b.y).unwrap() <= 1e-14);

        // Landweber is Moudafi with U = P_C and T = P_Q.
        let mut proj = p.clone();
        proj.u = QuasiNonexpansiveMap::projection(p.c.clone());
        proj.t = QuasiNonexpansiveMap::projection(p.q.clone());
        let a = landweber_iterate(&p, &s, lambda).unwrap();
        let b = moudafi_alshemas_iterate(&proj, &s, lambda).unwrap();
        prop_assert!(a.x.max_abs_diff(&b.x).unwrap() <= 1e-14);
        prop_assert!(a.y.max_abs_diff(&b.y).unwrap() <= 1e-14);
    }

    #[test]
    fn one_step_lyapunov_decrease(seed in 0u64..1000, frac in 0.05f64..0.99, alpha in 0.05f64..0.95, beta in 0.05f64..0.95) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let p = synthetic(seed, 0.8);
        let params = make_params(&p, frac, alpha, beta, 1, 0.0).unwrap();
        let lambda = params.lambda.at(1);
        let s = random_state(&mut rng, 4, 3);
        let (xs, ys) = p.known_solution().unwrap();
        let omega = |st: &IterateState| st.x.sub(xs).unwrap().norm_squared() + st.y.sub(ys).unwrap().norm_squared();
        let next = sffpep_iterate(&p, &s, lambda, alpha, beta).unwrap();
        prop_assert!(omega(&next) <= omega(&s) + 1e-10);
    }
}

#[test]
fn relaxed_map_problem_runs() {
    let p = SffpepProblem::new(
        ConvexSet::whole_space(1),
        ConvexSet::boxed(vec![0.0], vec![10.0]).unwrap(),
        QuasiNonexpansiveMap::new(
            MapKind::RelaxedMap {
                base: Box::new(MapKind::PaperAffine),
                theta: 0.5,
            },
            Some(scalar(1.25)),
        )
        .unwrap(),
        QuasiNonexpansiveMap::paper_affine(1),
        DenseOperator::scalar(1.0),
        DenseOperator::scalar(1.0),
    )
    .unwrap()
    .with_known_solution(scalar(1.25), scalar(1.25))
    .unwrap();
    let params = make_params(&p, 0.5, 0.5, 0.5, 10_000, 1e-12).unwrap();
    let res = solve(&p, &params, SchemeId::Sffpep, scalar(-4.0), scalar(9.0)).unwrap();
    assert_eq!(res.termination, Termination::ResidualTolMet);
    assert!(check_lyapunov(&res.trace, 1e-10).unwrap().monotone);
}

#[test]
fn readme_example() {
    let ex = build_paper_example();
    let params = make_params(&ex.problem, 0.85, 0.2, 0.125, 100_000, 1e-10).unwrap();
    let res = solve(
        &ex.problem,
        &params,
        SchemeId::Sffpep,
        scalar(10.0),
        scalar(15.0),
    )
    .unwrap();
    assert!(res.last_record().unwrap().coupling_residual < 1e-9);
}

#[test]
fn sfp_schemes_require_identity_b() {
    let ex = build_paper_example();
    let params = SolverParams::constant(0.01, 0.5, 0.5, 10, 1e-8).unwrap();
    for scheme in [SchemeId::Byrne, SchemeId::Chen] {
        assert!(matches!(
            solve(&ex.problem, &params, scheme, scalar(1.0), scalar(1.0)),
            Err(Error::InvalidProblem(_))
        ));
    }
}
