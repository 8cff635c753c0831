//! Switching-law design over quantum dynamical semigroup generators.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense real/complex matrix primitives (exponential, Hermitian
//!   eigendecomposition, LU solves, Cholesky, numerical kernels).
//! * [`states`]: density matrices, Hermitian operator bases, coherence vectors
//!   and distances.
//! * [`superop`]: Lindblad generators, their real superoperator form in a
//!   coherence-vector basis, common fixed points and invariant-subspace blocks.
//! * [`linearization`]: the common translation that turns the affine
//!   coherence-vector dynamics of generators sharing a fixed point into linear
//!   ones.
//! * [`switching`]: Hurwitz convex combinations, Lyapunov data, time-based and
//!   state-based switching laws, dwell-time and monodromy certificates.
//!
//! All numerical thresholds live in [`tol`].

pub mod error;
pub mod linalg;
pub mod linearization;
pub mod random;
pub mod states;
pub mod superop;
pub mod switching;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianEigen, RealMatrix, RealVector};
pub use linearization::Linearization;
pub use states::{CoherenceVector, DensityMatrix, OperatorBasis, Pauli};
pub use superop::{LindbladGenerator, SubspaceBlocks, SubspaceSplit, Superoperator};
pub use switching::{
    ConvexCombination, LyapunovData, StateBasedLaw, SwitchRecord, SwitchedRun, TimeBasedLaw,
};

pub use num_complex::Complex64;
