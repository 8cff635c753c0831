//! Random matrices, states and generators for sampling and testing.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::states::DensityMatrix;
use crate::superop::LindbladGenerator;
use crate::Complex64;

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Real matrix with i.i.d. standard Gaussian entries.
pub fn gaussian_real<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Induced-measure random state of the given rank (`1 ≤ rank ≤ dim`).
pub fn density_matrix<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, rank.clamp(1, dim), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.unscale(tr)).expect("Wishart matrices normalize to states")
}

/// Full-rank random state.
pub fn mixed_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    density_matrix(dim, dim, rng)
}

/// Generator with a random Hamiltonian and `noise_ops` random noise operators.
pub fn generator<R: Rng + ?Sized>(dim: usize, noise_ops: usize, rng: &mut R) -> LindbladGenerator {
    let h = hermitian(dim, rng);
    let ops = (0..noise_ops).map(|_| ginibre(dim, dim, rng).scale(0.5)).collect();
    LindbladGenerator::new(h, ops, "random").expect("random operators are valid")
}
