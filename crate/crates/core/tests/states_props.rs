use proptest::prelude::*;
use qswitch::random;
use qswitch::states::{euclidean_distance, from_coherence, to_coherence, trace_distance};
use qswitch::{DensityMatrix, OperatorBasis, RealMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn states(n: usize, count: usize, seed: u64) -> Vec<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| random::density_matrix(n, 1 + k % n, &mut rng))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trace_distance_is_a_metric(n in 2usize..5, seed: u64) {
        let s = states(n, 3, seed);
        let d = |a: usize, b: usize| trace_distance(&s[a], &s[b]).unwrap();
        prop_assert!(d(0, 0).abs() <= 1e-10);
        prop_assert!((d(0, 1) - d(1, 0)).abs() <= 1e-12);
        prop_assert!((0.0..=1.0 + 1e-10).contains(&d(0, 1)));
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-10);
    }

    #[test]
    fn coherence_round_trip(n in 2usize..6, seed: u64) {
        let basis = OperatorBasis::gell_mann(n).unwrap();
        for rho in states(n, 2, seed) {
            let back = from_coherence(&to_coherence(&rho, &basis).unwrap(), &basis).unwrap();
            let err = (back.matrix() - rho.matrix()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
            prop_assert!(err <= 1e-12, "round-trip error {err:e}");
        }
    }

    #[test]
    fn euclidean_distance_is_hilbert_schmidt(n in 2usize..5, seed: u64) {
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let s = states(n, 2, seed);
        let v: Vec<_> = s.iter().map(|r| to_coherence(r, &basis).unwrap()).collect();
        let hs = (s[0].matrix() - s[1].matrix()).norm();
        prop_assert!((euclidean_distance(&v[0], &v[1]).unwrap() - hs).abs() <= 1e-12);
    }

    #[test]
    fn coherence_vectors_lie_in_the_bloch_ball(n in 2usize..6, seed: u64) {
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let radius = qswitch::CoherenceVector::bloch_radius(n);
        for rho in states(n, 3, seed) {
            prop_assert!(to_coherence(&rho, &basis).unwrap().norm() <= radius + 1e-12);
        }
    }
}

#[test]
fn gell_mann_bases_are_orthonormal() {
    for n in 2..=8 {
        let basis = OperatorBasis::gell_mann(n).unwrap();
        assert_eq!(basis.len(), n * n);
        let err = (basis.gram() - RealMatrix::identity(n * n, n * n)).amax();
        assert!(err <= 1e-14, "N={n}: Gram error {err:e}");
        for f in basis.elements() {
            assert!((f - f.adjoint()).iter().all(|z| z.norm() == 0.0));
        }
    }
}

#[test]
fn gell_mann_basis_is_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=4 {
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let h = random::hermitian(n, &mut rng);
        let back = basis.synthesize(basis.coefficients(&h).unwrap().as_slice()).unwrap();
        assert!((back - &h).iter().all(|z| z.norm() <= 1e-12));
    }
}

#[test]
fn pure_state_reaches_the_sphere() {
    for n in 2..=5 {
        let basis = OperatorBasis::gell_mann(n).unwrap();
        let v = to_coherence(&DensityMatrix::basis_state(n, n - 1).unwrap(), &basis).unwrap();
        assert!((v.norm() - qswitch::CoherenceVector::bloch_radius(n)).abs() <= 1e-12);
    }
}
