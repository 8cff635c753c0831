use qswitch::linearization::build_linearization;
use qswitch::states::to_coherence;
use qswitch::superop::{check_invariance, common_fixed_point, fixed_point_residual};
use qswitch::switching::{certify_epsilon, hermitian_cyclic_check, search_hurwitz_combination, verify_assumption1};
use qswitch::{OperatorBasis, Superoperator, TimeBasedLaw};
use qswitch_cli::comparison::{Start, Strategy};
use qswitch_cli::scenario::{
    ghz_code_projector, ghz_generators, scenario_bell, scenario_ghz, scenario_ghz_subspace,
    scenario_robustness_counterexample,
};
use qswitch_cli::{design, run_comparison, Target};

fn superoperators(spec: &qswitch_cli::ScenarioSpec) -> (OperatorBasis, Vec<Superoperator>) {
    let basis = OperatorBasis::gell_mann(spec.dim()).unwrap();
    let sups = spec
        .generators
        .iter()
        .map(|g| Superoperator::vectorize(g, &basis).unwrap())
        .collect();
    (basis, sups)
}

#[test]
fn bell_and_ghz_targets_are_the_common_fixed_points() {
    for spec in [scenario_bell(), scenario_ghz()] {
        let (basis, sups) = superoperators(&spec);
        let Target::State(rho) = &spec.target else { unreachable!() };
        let target = to_coherence(rho, &basis).unwrap();
        let found = common_fixed_point(&sups).unwrap();
        assert!((found.components() - target.components()).amax() <= 1e-9, "{}", spec.name);
        assert!(fixed_point_residual(&sups, &target).1 <= 1e-9);
        assert!(build_linearization(&sups, &target).unwrap().max_residual() <= 1e-9);
    }
}

#[test]
fn ghz_noise_generators_leave_the_code_space_invariant() {
    let pi = ghz_code_projector();
    let gens = ghz_generators();
    assert!(!check_invariance(&gens[0], &pi).unwrap().invariant);
    for g in &gens[1..] {
        let report = check_invariance(g, &pi).unwrap();
        assert!(report.invariant && report.residual <= 1e-9, "{}", g.label());
    }
    let d = design(&scenario_ghz_subspace()).unwrap();
    assert_eq!(d.drifts[0].shape(), (60, 60));
}

#[test]
fn bell_pair_admits_an_equal_weight_hurwitz_combination() {
    let d = design(&scenario_bell()).unwrap();
    let comb = search_hurwitz_combination(&d.drifts, 100).expect("Hurwitz combination exists");
    assert!(verify_assumption1(&d.drifts, comb.weights()).is_ok());
    assert!(comb.weights().iter().all(|w| (w - 0.5).abs() < 1e-12));
    assert!(!hermitian_cyclic_check(&d.drifts));
}

#[test]
fn bell_cycle_of_two_intervals_is_certified() {
    let d = design(&scenario_bell()).unwrap();
    for period in [0.06, 0.12] {
        let cert = certify_epsilon(&TimeBasedLaw::new(&[0.5, 0.5], period).unwrap(), &d.drifts).unwrap();
        assert!(cert.certified && cert.radius_bound < 1.0, "period {period}");
    }
}

#[test]
fn every_logged_state_is_a_density_matrix() {
    let log = run_comparison(&scenario_bell()).unwrap();
    assert_eq!(log.series.len(), 8);
    for s in &log.series {
        assert_eq!(s.lyapunov.len(), log.times.len());
        let worst = s.min_eigenvalue.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(worst >= -1e-8, "{}: eigenvalue {worst}", s.label());
    }
    for strategy in [Strategy::Steepest, Strategy::Suboptimal] {
        assert!(log.settling_time(strategy, Start::Actual, 1e-3).is_some());
    }
}

#[test]
fn rank_deficient_estimate_freezes_state_based_laws() {
    let log = run_comparison(&scenario_robustness_counterexample()).unwrap();
    for strategy in [Strategy::Steepest, Strategy::Suboptimal] {
        let actual = log.get(strategy, Start::Actual);
        assert_eq!(actual.switches.switch_count(), 0);
        assert!(actual.trace_distance.iter().all(|d| (d - 1.0).abs() <= 1e-9));
        assert!(log.settling_time(strategy, Start::Estimated, 1e-3).is_some());
    }
    assert!(log.settling_time(Strategy::TimeBased, Start::Actual, 1e-3).is_some());
}
