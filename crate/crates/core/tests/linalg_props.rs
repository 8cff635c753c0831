use proptest::prelude::*;
use qswitch::linalg::{self, expm, RealMatrix};
use qswitch::random;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn real(n: usize, scale: f64, seed: u64) -> RealMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random::gaussian_real(n, n, &mut rng);
    let norm = linalg::spectral_norm(&g).max(1e-12);
    g * (scale / norm)
}

fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_of_negation_is_inverse(n in 1usize..7, scale in 0.0f64..10.0, seed: u64) {
        let a = real(n, scale, seed);
        let (e, f) = (expm(&a).unwrap(), expm(&(-&a)).unwrap());
        // Rounding in the product alone is of order ε‖e^A‖‖e^-A‖.
        let scale = linalg::spectral_norm(&e) * linalg::spectral_norm(&f);
        let err = max_abs(&(&e * &f - RealMatrix::identity(n, n)));
        prop_assert!(err <= 1e-10 * scale, "‖e^A e^-A − I‖ = {err:e}, scale {scale:e}");
    }

    #[test]
    fn exponential_semigroup(n in 1usize..7, s in 0.0f64..1.5, t in 0.0f64..1.5, seed: u64) {
        let a = real(n, 4.0, seed);
        let joint = expm(&(&a * (s + t))).unwrap();
        let (es, et) = (expm(&(&a * s)).unwrap(), expm(&(&a * t)).unwrap());
        let scale = linalg::spectral_norm(&es) * linalg::spectral_norm(&et);
        let err = max_abs(&(joint - &es * &et));
        prop_assert!(err <= 1e-10 * scale, "semigroup error {err:e}, scale {scale:e}");
    }

    #[test]
    fn eigenvalues_sum_to_trace_and_multiply_to_determinant(n in 1usize..5, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random::hermitian(n, &mut rng);
        let eig = linalg::eigh(&h).unwrap();
        let sum: f64 = eig.eigenvalues.iter().sum();
        prop_assert!((sum - h.trace().re).abs() <= 1e-10);
        let prod: f64 = eig.eigenvalues.iter().product();
        prop_assert!((prod - h.determinant().re).abs() <= 1e-10 * (1.0 + prod.abs()));
        let back = eig.reconstruct() - &h;
        prop_assert!(back.iter().all(|z| z.norm() <= 1e-10));
    }

    #[test]
    fn cholesky_agrees_with_spectrum(n in 1usize..7, shift in -2.0f64..2.0, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random::gaussian_real(n, n, &mut rng);
        let m = linalg::symmetrize(&(&g * g.transpose())) * (1.0 / n as f64)
            - RealMatrix::identity(n, n) * shift;
        let lowest = linalg::eigvals_symmetric(&m).unwrap()[0];
        prop_assume!(lowest.abs() > 1e-8);
        match linalg::cholesky(&m) {
            Ok(l) => {
                prop_assert!(lowest > 0.0);
                prop_assert!(max_abs(&(&l * l.transpose() - &m)) <= 1e-10 * (1.0 + max_abs(&m)));
            }
            Err(_) => prop_assert!(lowest < 0.0),
        }
    }

    #[test]
    fn solve_has_small_residual(n in 1usize..8, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random::gaussian_real(n, n, &mut rng) + RealMatrix::identity(n, n) * (n as f64);
        let rhs = random::gaussian_real(n, 2, &mut rng);
        let x = linalg::solve_linear(&m, &rhs).unwrap();
        prop_assert!(max_abs(&(&m * x - rhs)) <= 1e-10);
    }

    #[test]
    fn nullspace_columns_are_annihilated(rank in 1usize..4, extra in 1usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rank + extra;
        let m = random::gaussian_real(n + 1, rank, &mut rng) * random::gaussian_real(rank, n, &mut rng);
        let k = linalg::nullspace(&m, 1e-10).unwrap();
        prop_assert_eq!(k.ncols(), extra);
        prop_assert!(max_abs(&(&m * &k)) <= 1e-9 * m.norm());
        prop_assert!(max_abs(&(k.transpose() * &k - RealMatrix::identity(extra, extra))) <= 1e-10);
    }
}
