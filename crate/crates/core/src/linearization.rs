//! Joint linearization of affine coherence-vector dynamics.
//!
//! Generators sharing a fixed point `v̄` all become linear in the coordinates
//! `x = T_R (r − v̄)`. In the full picture `(v_0, r)` with `v_0 = 1/√N` this is
//! the block map `T = [[1, 0], [T_Q, T_R]]` with `T_Q = −√N T_R v̄`, and each
//! transformed generator `T L̂_j T⁻¹` has blocks `[[0, 0], [b̃_j, Ã_j]]` where
//! `Ã_j = T_R A_j T_R⁻¹` and `b̃_j = T_R(√N b_j − A_j T_R⁻¹ T_Q) = 0`.

use crate::error::{Error, Result};
use crate::linalg::{self, RealMatrix, RealVector};
use crate::states::CoherenceVector;
use crate::superop::{subspace_blocks, SubspaceSplit, Superoperator};
use crate::tol;

#[derive(Debug, Clone)]
pub struct Linearization {
    fixed_point: CoherenceVector,
    t_q: RealVector,
    t_r: RealMatrix,
    t_r_inv: RealMatrix,
    transformed: Vec<RealMatrix>,
    residuals: Vec<RealVector>,
}

/// Linearization with `T_R = I`: the translation `x = r − v̄`.
pub fn build_linearization(sups: &[Superoperator], fixed_point: &CoherenceVector) -> Result<Linearization> {
    let m = fixed_point.components().len();
    build_linearization_with(sups, fixed_point, RealMatrix::identity(m, m))
}

/// Linearization with an arbitrary invertible `T_R`.
pub fn build_linearization_with(
    sups: &[Superoperator],
    fixed_point: &CoherenceVector,
    t_r: RealMatrix,
) -> Result<Linearization> {
    if sups.is_empty() {
        return Err(Error::InvalidParameter("no superoperators given".into()));
    }
    let dim = fixed_point.dim();
    let m = dim * dim - 1;
    if t_r.shape() != (m, m) {
        return Err(Error::DimensionMismatch {
            context: "T_R size",
            expected: m,
            found: t_r.nrows(),
        });
    }
    let v = fixed_point.components();
    for (j, s) in sups.iter().enumerate() {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "linearization family",
                expected: dim,
                found: s.dim(),
            });
        }
        let residual = s.derivative(v).norm();
        if residual > tol::FIXED_POINT_RESIDUAL * s.a().norm().max(1.0) {
            return Err(Error::NotAFixedPoint { generator: j, residual });
        }
    }
    let t_r_inv = linalg::solve_linear(&t_r, &RealMatrix::identity(m, m))?;
    let root_n = (dim as f64).sqrt();
    let t_q = -(&t_r * v) * root_n;
    let shift = &t_r_inv * &t_q;
    let transformed = sups.iter().map(|s| &t_r * s.a() * &t_r_inv).collect();
    let residuals = sups
        .iter()
        .map(|s| &t_r * (s.b() * root_n - s.a() * &shift))
        .collect();
    Ok(Linearization {
        fixed_point: fixed_point.clone(),
        t_q,
        t_r,
        t_r_inv,
        transformed,
        residuals,
    })
}

impl Linearization {
    pub fn fixed_point(&self) -> &CoherenceVector {
        &self.fixed_point
    }

    pub fn t_q(&self) -> &RealVector {
        &self.t_q
    }

    pub fn t_r(&self) -> &RealMatrix {
        &self.t_r
    }

    pub fn t_r_inv(&self) -> &RealMatrix {
        &self.t_r_inv
    }

    /// The linear drifts `Ã_j`.
    pub fn transformed(&self) -> &[RealMatrix] {
        &self.transformed
    }

    /// The affine parts `b̃_j` left after transformation (numerically zero).
    pub fn residuals(&self) -> &[RealVector] {
        &self.residuals
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// `x = T_R r + T_Q/√N`.
    pub fn to_translated(&self, v: &CoherenceVector) -> Result<RealVector> {
        self.check_len(v.components().len())?;
        let root_n = (self.fixed_point.dim() as f64).sqrt();
        Ok(&self.t_r * v.components() + &self.t_q / root_n)
    }

    /// `r = T_R⁻¹ (x − T_Q/√N)`.
    pub fn from_translated(&self, x: &RealVector) -> Result<CoherenceVector> {
        self.check_len(x.len())?;
        let root_n = (self.fixed_point.dim() as f64).sqrt();
        let r = &self.t_r_inv * (x - &self.t_q / root_n);
        CoherenceVector::new(self.fixed_point.dim(), r)
    }

    fn check_len(&self, found: usize) -> Result<()> {
        let expected = self.t_r.nrows();
        if found != expected {
            return Err(Error::DimensionMismatch {
                context: "translated coordinates",
                expected,
                found,
            });
        }
        Ok(())
    }
}

/// The `⊥` blocks governing convergence to an invariant subspace.
pub fn reduce_to_perp(sups: &[Superoperator], split: &SubspaceSplit) -> Result<Vec<RealMatrix>> {
    sups.iter()
        .map(|s| subspace_blocks(s, split).map(|b| b.l_perp))
        .collect()
}
