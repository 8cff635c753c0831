use proptest::prelude::*;
use qswitch::linalg::{self, expm};
use qswitch::linearization::{build_linearization, build_linearization_with};
use qswitch::random;
use qswitch::states::{coherence_to_matrix, half_trace_norm, to_coherence};
use qswitch::switching::{
    certify_epsilon, dwell_time_bound, hermitian_cyclic_check, run_cyclic, run_suboptimal, Grid, Propagator,
};
use qswitch::{
    Complex64, ComplexMatrix, ConvexCombination, DensityMatrix, LindbladGenerator, LyapunovData, OperatorBasis,
    RealMatrix, RealVector, StateBasedLaw, Superoperator, TimeBasedLaw,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vectorize(gens: &[LindbladGenerator], basis: &OperatorBasis) -> Vec<Superoperator> {
    gens.iter().map(|g| Superoperator::vectorize(g, basis).unwrap()).collect()
}

/// Generators sharing the fixed point `|0⟩⟨0|`: decay into level 0 plus a
/// Hamiltonian that does not couple level 0.
fn ground_state_family(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<LindbladGenerator> {
    (0..count)
        .map(|j| {
            let mut h = random::hermitian(n, rng);
            for k in 1..n {
                h[(0, k)] = Complex64::new(0.0, 0.0);
                h[(k, 0)] = Complex64::new(0.0, 0.0);
            }
            let ops = (1..n)
                .filter(|k| (k + j) % 2 == 1 || n == 2)
                .map(|k| {
                    let mut l = ComplexMatrix::zeros(n, n);
                    l[(0, k)] = Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5));
                    l
                })
                .collect();
            LindbladGenerator::new(h, ops, format!("g{j}")).unwrap()
        })
        .collect()
}

fn random_family(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<RealMatrix> {
    let basis = OperatorBasis::gell_mann(n).unwrap();
    (0..count)
        .map(|_| {
            Superoperator::vectorize(&random::generator(n, 2, rng), &basis)
                .unwrap()
                .a()
                .clone()
        })
        .collect()
}

fn evolve(full: &RealMatrix, t: f64, rho: &DensityMatrix, basis: &OperatorBasis) -> ComplexMatrix {
    let v = basis.coefficients(rho.matrix()).unwrap();
    basis.synthesize((expm(&(full * t)).unwrap() * v).as_slice()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evolution_is_trace_preserving_positive_and_contractive(n in 2usize..4, ops in 0usize..3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let sup = Superoperator::vectorize(&random::generator(n, ops, &mut rng), &basis).unwrap();
        let rho = random::density_matrix(n, 1, &mut rng);
        let tau = random::mixed_state(n, &mut rng);
        let before = half_trace_norm(&(rho.matrix() - tau.matrix())).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let (a, b) = (evolve(sup.full(), t, &rho, &basis), evolve(sup.full(), t, &tau, &basis));
            prop_assert!((a.trace().re - 1.0).abs() <= 1e-10);
            prop_assert!(linalg::eigvalsh(&a).unwrap()[0] >= -1e-8);
            prop_assert!(half_trace_norm(&(&a - &b)).unwrap() <= before + 1e-9);
        }
    }

    #[test]
    fn vectorization_is_linear(n in 2usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let (g1, g2) = (random::generator(n, 1, &mut rng), random::generator(n, 2, &mut rng));
        let joint = Superoperator::vectorize(&g1.sum(&g2).unwrap(), &basis).unwrap();
        let parts = Superoperator::vectorize(&g1, &basis).unwrap().full()
            + Superoperator::vectorize(&g2, &basis).unwrap().full();
        prop_assert!((joint.full() - parts).amax() <= 1e-12);
    }

    #[test]
    fn hamiltonian_superoperators_are_rotations(n in 2usize..5, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let g = LindbladGenerator::new(random::hermitian(n, &mut rng), vec![], "h").unwrap();
        let sup = Superoperator::vectorize(&g, &basis).unwrap();
        prop_assert!((sup.a() + sup.a().transpose()).amax() <= 1e-10);
        prop_assert!(sup.b().amax() <= 1e-12);
        prop_assert!(sup.full().row(0).amax() <= 1e-12);
    }

    #[test]
    fn translated_dynamics_match_finite_differences(n in 2usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let sups = vectorize(&ground_state_family(n, 2, &mut rng), &basis);
        let target = to_coherence(&DensityMatrix::basis_state(n, 0).unwrap(), &basis).unwrap();
        let lin = build_linearization(&sups, &target).unwrap();
        prop_assert!(lin.max_residual() <= 1e-9);
        let dt = 1e-4;
        for (j, sup) in sups.iter().enumerate() {
            let rho = random::mixed_state(n, &mut rng);
            let v = basis.coefficients(rho.matrix()).unwrap();
            let step = |t: f64| {
                let w = expm(&(sup.full() * t)).unwrap() * &v;
                let r = qswitch::CoherenceVector::new(n, w.rows(1, n * n - 1).into_owned()).unwrap();
                lin.to_translated(&r).unwrap()
            };
            let fd = (step(dt) - step(-dt)) / (2.0 * dt);
            let predicted = &lin.transformed()[j] * step(0.0);
            prop_assert!((fd - predicted).amax() <= 1e-6);
        }
    }

    #[test]
    fn general_transformation_also_linearizes(n in 2usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let sups = vectorize(&ground_state_family(n, 3, &mut rng), &basis);
        let target = to_coherence(&DensityMatrix::basis_state(n, 0).unwrap(), &basis).unwrap();
        let m = n * n - 1;
        let t_r = random::gaussian_real(m, m, &mut rng) + RealMatrix::identity(m, m) * (2.0 * m as f64).sqrt();
        prop_assert!(build_linearization_with(&sups, &target, t_r).unwrap().max_residual() <= 1e-9);
    }

    #[test]
    fn translation_is_an_isometry(n in 2usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let sups = vectorize(&ground_state_family(n, 2, &mut rng), &basis);
        let target = to_coherence(&DensityMatrix::basis_state(n, 0).unwrap(), &basis).unwrap();
        let lin = build_linearization(&sups, &target).unwrap();
        let v1 = to_coherence(&random::mixed_state(n, &mut rng), &basis).unwrap();
        let v2 = to_coherence(&random::mixed_state(n, &mut rng), &basis).unwrap();
        let dx = (lin.to_translated(&v1).unwrap() - lin.to_translated(&v2).unwrap()).norm();
        prop_assert!((dx - (v1.components() - v2.components()).norm()).abs() <= 1e-12);
    }

    #[test]
    fn some_mode_decreases_faster_than_the_norm(n in 2usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mats = random_family(n, 3, &mut rng);
        let comb = ConvexCombination::new(&mats, &[0.2, 0.3, 0.5]);
        prop_assume!(comb.is_ok());
        let lyap = LyapunovData::design(&mats, &comb.unwrap()).unwrap();
        let dim = n * n - 1;
        for _ in 0..50 {
            let x = RealVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
            let best = (0..3).map(|k| lyap.q_form(k, &x)).fold(f64::INFINITY, f64::min);
            prop_assert!(best <= -x.norm_squared() + 1e-9 * x.norm_squared());
        }
    }
}

fn hurwitz_family(seed: u64) -> (Vec<RealMatrix>, LyapunovData) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mats = random_family(3, 2, &mut rng);
        if let Ok(comb) = ConvexCombination::new(&mats, &[0.5, 0.5]) {
            let lyap = LyapunovData::design(&mats, &comb).unwrap();
            return (mats, lyap);
        }
    }
}

#[test]
fn suboptimal_law_descends_between_switches() {
    for seed in 0..6 {
        let (mats, lyap) = hurwitz_family(seed);
        let rates = [0.4, 0.8];
        let law = StateBasedLaw::suboptimal(lyap.clone(), rates.to_vec(), false).unwrap();
        let mut prop = Propagator::new(mats).unwrap();
        let x0 = RealVector::from_fn(8, |i, _| (i as f64 - 3.5) / 10.0);
        let grid = Grid::new(0.01, 10.0).unwrap();
        let run = run_suboptimal(&law, &mut prop, x0, grid).unwrap();
        for (x, &j) in run.states.iter().zip(&run.active) {
            let nx = x.norm_squared();
            assert!(
                lyap.q_form(j, x) <= -rates[j] * nx + 1e-9 * nx,
                "seed {seed}: descent violated"
            );
        }
        let bound = dwell_time_bound(&lyap, &rates).unwrap();
        assert!(bound > 0.0 && bound.is_finite());
        let cap = grid.end() / bound + grid.intervals() as f64;
        assert!((run.record.switch_count() as f64) <= cap);
    }
}

#[test]
fn certified_cycle_decays_geometrically() {
    let (mats, _) = hurwitz_family(21);
    let period = 0.3;
    let law = TimeBasedLaw::new(&[0.5, 0.5], period).unwrap();
    let cert = certify_epsilon(&law, &mats).unwrap();
    assert!(cert.certified, "bound {}", cert.radius_bound);
    let mut prop = Propagator::new(mats).unwrap();
    let x0 = RealVector::from_element(8, 0.2);
    let grid = Grid::new(0.01, 50.0 * period).unwrap();
    let run = run_cyclic(&law, &mut prop, x0, grid).unwrap();
    let per = (period / 0.01).round() as usize;
    let logs: Vec<f64> = (1..=50).map(|k| run.states[k * per].norm().ln()).collect();
    let mean_k = 25.5;
    let mean_l = logs.iter().sum::<f64>() / 50.0;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, l) in logs.iter().enumerate() {
        let k = (i + 1) as f64;
        num += (k - mean_k) * (l - mean_l);
        den += (k - mean_k).powi(2);
    }
    let gamma = (num / den).exp();
    assert!(gamma < 1.0, "fitted rate {gamma}");
}

#[test]
fn hermitian_noise_cycles_never_increase_the_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let basis = OperatorBasis::gell_mann(3).unwrap();
    let mats: Vec<RealMatrix> = (0..3)
        .map(|_| {
            let l = random::hermitian(3, &mut rng);
            let g = LindbladGenerator::dissipative(vec![l], "deph").unwrap();
            Superoperator::vectorize(&g, &basis).unwrap().a().clone()
        })
        .collect();
    assert!(hermitian_cyclic_check(&mats));
    let law = TimeBasedLaw::new(&[0.3, 0.3, 0.4], 3.0).unwrap();
    let mut prop = Propagator::new(mats).unwrap();
    let x0 = to_coherence(&DensityMatrix::basis_state(3, 1).unwrap(), &basis)
        .unwrap()
        .into_components();
    let run = run_cyclic(&law, &mut prop, x0, Grid::new(0.05, 80.0).unwrap()).unwrap();
    for w in run.states.windows(2) {
        assert!(w[1].norm() <= w[0].norm() + 1e-14);
    }
    let rho = coherence_to_matrix(run.last_state().as_slice(), &basis).unwrap();
    let mixed = DensityMatrix::maximally_mixed(3).unwrap();
    let d = half_trace_norm(&(rho - mixed.matrix())).unwrap();
    assert!(d < 1e-3);
}
