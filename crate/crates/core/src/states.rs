//! Density operators, Hermitian operator bases and distances.
//!
//! # Basis convention
//!
//! [`OperatorBasis::gell_mann`] returns the Hilbert–Schmidt orthonormal basis
//! `F_0, …, F_{N²−1}` in this fixed order:
//!
//! 1. `F_0 = I/√N`;
//! 2. symmetric off-diagonals `(|j⟩⟨k| + |k⟩⟨j|)/√2` for `j < k`, pairs in
//!    lexicographic order;
//! 3. antisymmetric off-diagonals `(−i|j⟩⟨k| + i|k⟩⟨j|)/√2`, same pair order;
//! 4. diagonals `(Σ_{m<l} |m⟩⟨m| − l|l⟩⟨l|)/√(l(l+1))` for `l = 1, …, N−1`.
//!
//! For a qubit this is `{I, σ_x, σ_y, σ_z}/√2`. A state expands as
//! `ρ = F_0/√N + Σ_{j≥1} r_j F_j`, so the constant zeroth coordinate is
//! `1/√N` and the coherence vector is `r_j = Tr(ρ F_j)`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, RealMatrix, RealVector};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    /// The scaled identity `I/√2`.
    Zero,
    X,
    Y,
    Z,
}

/// Single-qubit Pauli matrices; `σ_y = [[0, −i], [i, 0]]`.
pub fn pauli(k: Pauli) -> ComplexMatrix {
    let entries = match k {
        Pauli::Zero => {
            let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [s, ZERO, ZERO, s]
        }
        Pauli::X => [ZERO, ONE, ONE, ZERO],
        Pauli::Y => [ZERO, -I, I, ZERO],
        Pauli::Z => [ONE, ZERO, ZERO, -ONE],
    };
    ComplexMatrix::from_row_slice(2, 2, &entries)
}

/// Kronecker product with row-major index convention `(i_A i_B, j_A j_B)`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Left-to-right Kronecker product of several factors.
pub fn tensor_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(ComplexMatrix::identity(1, 1), |acc, f| acc.kronecker(*f))
}

/// Computational basis ket `|k⟩` in dimension `dim`.
pub fn basis_ket(dim: usize, k: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    v[k] = ONE;
    v
}

/// `|a⟩⟨b|`.
pub fn outer(a: &DVector<Complex64>, b: &DVector<Complex64>) -> ComplexMatrix {
    a * b.adjoint()
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Hilbert–Schmidt orthonormal Hermitian basis with `F_0 = I/√N`.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    /// Generalized Gell-Mann basis, in the order documented at module level.
    pub fn gell_mann(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self {
            dim: n,
            elements: gell_mann_elements(n),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of elements, `N²`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &ComplexMatrix {
        &self.elements[k]
    }

    /// Real parts of `Tr(X F_k)` for every element (exact for Hermitian `X`).
    pub fn coefficients(&self, x: &ComplexMatrix) -> Result<RealVector> {
        self.check_dim(x.nrows(), "operator basis expansion")?;
        Ok(RealVector::from_iterator(
            self.elements.len(),
            self.elements.iter().map(|f| trace_product(x, f).re),
        ))
    }

    /// `Σ_k c_k F_k`.
    pub fn synthesize(&self, coefficients: &[f64]) -> Result<ComplexMatrix> {
        if coefficients.len() != self.elements.len() {
            return Err(Error::DimensionMismatch {
                context: "operator basis synthesis",
                expected: self.elements.len(),
                found: coefficients.len(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (c, f) in coefficients.iter().zip(&self.elements) {
            if *c != 0.0 {
                out += f.scale(*c);
            }
        }
        Ok(out)
    }

    /// Gram matrix `Tr(F_j F_k)` (real for Hermitian elements).
    pub fn gram(&self) -> RealMatrix {
        let n = self.elements.len();
        RealMatrix::from_fn(n, n, |j, k| trace_product(&self.elements[j], &self.elements[k]).re)
    }

    fn check_dim(&self, found: usize, context: &'static str) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

/// Gell-Mann elements for `n ≥ 1` (for `n = 1` only `[1]`).
pub(crate) fn gell_mann_elements(n: usize) -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    out.push(ComplexMatrix::identity(n, n).scale(1.0 / (n as f64).sqrt()));
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| ((j + 1)..n).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(j, k)] = Complex64::new(s, 0.0);
        m[(k, j)] = Complex64::new(s, 0.0);
        out.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(j, k)] = Complex64::new(0.0, -s);
        m[(k, j)] = Complex64::new(0.0, s);
        out.push(m);
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = ComplexMatrix::zeros(n, n);
        for d in 0..l {
            m[(d, d)] = Complex64::new(norm, 0.0);
        }
        m[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        out.push(m);
    }
    out
}

/// Trace-one, positive-semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::validated(matrix, tol::STATE_MIN_EIGENVALUE)
    }

    fn validated(matrix: ComplexMatrix, min_eigenvalue: f64) -> Result<Self> {
        let n = linalg::ensure_square(&matrix)?;
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        linalg::ensure_finite(&matrix)?;
        let asym = (&matrix - matrix.adjoint()).norm();
        if asym > tol::HERMITIAN {
            return Err(Error::NotAState {
                reason: format!("not Hermitian (residual {asym:.3e})"),
            });
        }
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol::STATE_TRACE {
            return Err(Error::NotAState {
                reason: format!("trace {trace} differs from one"),
            });
        }
        let lowest = linalg::eigvalsh(&matrix)?[0];
        if lowest < min_eigenvalue {
            return Err(Error::NotAState {
                reason: format!("minimum eigenvalue {lowest:.3e} is negative"),
            });
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero ket.
    pub fn pure(ket: &DVector<Complex64>) -> Result<Self> {
        let norm = ket.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::NotAState {
                reason: "ket must be nonzero and finite".into(),
            });
        }
        let psi = ket / Complex64::new(norm, 0.0);
        Self::new(outer(&psi, &psi))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            matrix: ComplexMatrix::identity(dim, dim).scale(1.0 / dim as f64),
        })
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        Self::pure(&basis_ket(dim, k))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix).expect("density matrices are Hermitian")
    }

    /// True when every eigenvalue exceeds `threshold`.
    pub fn is_full_rank(&self, threshold: f64) -> bool {
        self.eigenvalues()[0] > threshold
    }
}

/// Coordinates `r_j = Tr(ρ F_j)`, `j ≥ 1`, of a state in an operator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceVector {
    dim: usize,
    components: RealVector,
}

impl CoherenceVector {
    pub fn new(dim: usize, components: RealVector) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if components.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch {
                context: "coherence vector length",
                expected: dim * dim - 1,
                found: components.len(),
            });
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, components })
    }

    /// The maximally mixed state.
    pub fn origin(dim: usize) -> Result<Self> {
        Self::new(dim, RealVector::zeros(dim * dim - 1))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &RealVector {
        &self.components
    }

    pub fn into_components(self) -> RealVector {
        self.components
    }

    pub fn norm(&self) -> f64 {
        self.components.norm()
    }

    /// Radius of the ball containing every coherence vector, `√((N−1)/N)`.
    pub fn bloch_radius(dim: usize) -> f64 {
        ((dim as f64 - 1.0) / dim as f64).sqrt()
    }
}

/// Expands a state in `basis`, dropping the constant `F_0` coordinate.
pub fn to_coherence(rho: &DensityMatrix, basis: &OperatorBasis) -> Result<CoherenceVector> {
    let coeffs = basis.coefficients(rho.matrix())?;
    CoherenceVector::new(basis.dim(), coeffs.rows(1, coeffs.len() - 1).into_owned())
}

/// `ρ = F_0/√N + Σ r_j F_j`, rejecting vectors outside the state space.
pub fn from_coherence(v: &CoherenceVector, basis: &OperatorBasis) -> Result<DensityMatrix> {
    let matrix = coherence_to_matrix(v.components().as_slice(), basis)?;
    DensityMatrix::validated(matrix, tol::COHERENCE_MIN_EIGENVALUE)
}

/// Unvalidated reconstruction `F_0/√N + Σ r_j F_j`.
pub fn coherence_to_matrix(components: &[f64], basis: &OperatorBasis) -> Result<ComplexMatrix> {
    let n = basis.dim();
    if components.len() + 1 != basis.len() {
        return Err(Error::DimensionMismatch {
            context: "coherence vector length",
            expected: basis.len() - 1,
            found: components.len(),
        });
    }
    let mut full = Vec::with_capacity(basis.len());
    full.push(1.0 / (n as f64).sqrt());
    full.extend_from_slice(components);
    basis.synthesize(&full)
}

/// `½ Σ |λ_i(ρ − τ)|`.
pub fn trace_distance(rho: &DensityMatrix, tau: &DensityMatrix) -> Result<f64> {
    if rho.dim() != tau.dim() {
        return Err(Error::DimensionMismatch {
            context: "trace distance",
            expected: rho.dim(),
            found: tau.dim(),
        });
    }
    half_trace_norm(&(rho.matrix() - tau.matrix()))
}

/// `½‖X‖₁` of a Hermitian matrix.
pub fn half_trace_norm(x: &ComplexMatrix) -> Result<f64> {
    let values = linalg::eigvalsh(x)?;
    Ok(0.5 * values.iter().map(|l| l.abs()).sum::<f64>())
}

/// `‖v − w‖₂`, equal to the Hilbert–Schmidt distance of the two states.
pub fn euclidean_distance(v: &CoherenceVector, w: &CoherenceVector) -> Result<f64> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            context: "euclidean distance",
            expected: v.dim(),
            found: w.dim(),
        });
    }
    Ok((v.components() - w.components()).norm())
}

/// Checks `Π² = Π = Π†`.
pub fn check_projector(pi: &ComplexMatrix) -> Result<()> {
    linalg::ensure_square(pi)?;
    linalg::ensure_finite(pi)?;
    let residual = (pi - pi.adjoint()).norm().max((pi * pi - pi).norm());
    if residual > tol::PROJECTOR {
        return Err(Error::NotAProjector { residual });
    }
    Ok(())
}

/// `Tr(Π ρ)`: population of the range of `Π`.
pub fn subspace_fidelity(rho: &DensityMatrix, pi: &ComplexMatrix) -> Result<f64> {
    check_projector(pi)?;
    if pi.nrows() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "subspace fidelity",
            expected: rho.dim(),
            found: pi.nrows(),
        });
    }
    Ok(trace_product(pi, rho.matrix()).re.clamp(0.0, 1.0))
}
