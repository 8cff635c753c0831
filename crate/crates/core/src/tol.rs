//! Numerical thresholds used across the crate.
//!
//! Relative tolerances are scaled by the Frobenius norm of the quantity under
//! test unless the constant's doc says otherwise.

/// Relative Hermiticity tolerance, `‖M − M†‖_F ≤ HERMITIAN·‖M‖_F`.
pub const HERMITIAN: f64 = 1e-10;
/// Relative symmetry tolerance for real matrices.
pub const SYMMETRIC: f64 = 1e-10;
/// LU pivots below `SINGULAR_PIVOT·max|M_ij|` are treated as zero.
pub const SINGULAR_PIVOT: f64 = 1e-13;

/// Density matrix trace must equal one to this absolute tolerance.
pub const STATE_TRACE: f64 = 1e-10;
/// Smallest eigenvalue accepted when constructing a density matrix directly.
pub const STATE_MIN_EIGENVALUE: f64 = -1e-9;
/// Reconstruction from a coherence vector fails below this eigenvalue.
pub const COHERENCE_MIN_EIGENVALUE: f64 = -1e-6;
/// Projector idempotence/Hermiticity tolerance (absolute, Frobenius).
pub const PROJECTOR: f64 = 1e-10;

/// Kernel threshold for the stacked fixed-point system, relative to its norm.
pub const FIXED_POINT_KERNEL: f64 = 1e-8;
/// `‖A_j v + b_j‖` accepted for a fixed point, relative to `max(1, ‖A_j‖_F)`.
pub const FIXED_POINT_RESIDUAL: f64 = 1e-8;
/// Leakage out of an invariant subspace, relative to `max(1, ‖L̂‖_F)`.
pub const INVARIANCE: f64 = 1e-9;

/// `‖A_cᵀP + PA_c + I‖_F` accepted for a Lyapunov solution.
pub const LYAPUNOV_RESIDUAL: f64 = 1e-8;
/// Convex weights must sum to one within this tolerance.
pub const WEIGHT_SUM: f64 = 1e-12;
/// Monodromy spectral radius must stay below `1 − MONODROMY_MARGIN`.
pub const MONODROMY_MARGIN: f64 = 1e-12;
/// Largest power examined by the iterated-norm monodromy test.
pub const MONODROMY_MAX_POWER: usize = 256;
/// Symmetry tolerance for the Hermitian-generator cyclic check (relative).
pub const SYMMETRIC_GENERATOR: f64 = 1e-10;
/// Kernel threshold for the joint kernel of symmetric generators (relative).
pub const JOINT_KERNEL: f64 = 1e-9;
