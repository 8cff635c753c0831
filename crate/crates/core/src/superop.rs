//! Lindblad generators and their real superoperator form.
//!
//! In an orthonormal Hermitian basis `{F_k}` with `F_0 = I/√N`, the generator
//! acts on the full coordinate vector `v = (1/√N, r)` as `v̇ = L̂ v` with
//! `L̂_{kj} = Tr(F_k 𝓛(F_j))`. Trace preservation zeroes the first row, and the
//! remaining rows split as `ṙ = A r + b`.

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, RealMatrix, RealVector};
use crate::states::{self, gell_mann_elements, trace_product, CoherenceVector, OperatorBasis};
use crate::tol;
use crate::Complex64;

/// `𝓛(ρ) = −i[H, ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})`.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    dim: usize,
    hamiltonian: ComplexMatrix,
    noise_ops: Vec<ComplexMatrix>,
    label: String,
}

impl LindbladGenerator {
    pub fn new(
        hamiltonian: ComplexMatrix,
        noise_ops: Vec<ComplexMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let dim = linalg::ensure_square(&hamiltonian)?;
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        linalg::ensure_finite(&hamiltonian)?;
        let residual = linalg::hermitian_residual(&hamiltonian);
        if residual > tol::HERMITIAN {
            return Err(Error::NotHermitian { residual });
        }
        if noise_ops.len() > dim * dim - 1 {
            return Err(Error::InvalidParameter(format!(
                "{} noise operators exceed the maximum {} for dimension {dim}",
                noise_ops.len(),
                dim * dim - 1
            )));
        }
        for op in &noise_ops {
            let n = linalg::ensure_square(op)?;
            if n != dim {
                return Err(Error::DimensionMismatch {
                    context: "noise operator",
                    expected: dim,
                    found: n,
                });
            }
            linalg::ensure_finite(op)?;
        }
        Ok(Self {
            dim,
            hamiltonian,
            noise_ops,
            label: label.into(),
        })
    }

    /// Purely dissipative generator (`H = 0`).
    pub fn dissipative(noise_ops: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let dim = noise_ops.first().map_or(0, |l| l.nrows());
        Self::new(ComplexMatrix::zeros(dim, dim), noise_ops, label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn noise_ops(&self) -> &[ComplexMatrix] {
        &self.noise_ops
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `‖H‖_F + Σ_k ‖L_k‖_F²`, the natural magnitude of `𝓛`.
    pub fn magnitude(&self) -> f64 {
        self.hamiltonian.norm() + self.noise_ops.iter().map(|l| l.norm_squared()).sum::<f64>()
    }

    /// The generator of `𝓛_self + 𝓛_other`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                context: "generator sum",
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut ops = self.noise_ops.clone();
        ops.extend(other.noise_ops.iter().cloned());
        Ok(Self {
            dim: self.dim,
            hamiltonian: &self.hamiltonian + &other.hamiltonian,
            noise_ops: ops,
            label: format!("{}+{}", self.label, other.label),
        })
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "generator argument",
                expected: self.dim,
                found: rho.nrows(),
            });
        }
        let minus_i = Complex64::new(0.0, -1.0);
        let mut out = (&self.hamiltonian * rho - rho * &self.hamiltonian) * minus_i;
        for l in &self.noise_ops {
            let l_dag = l.adjoint();
            let ldl = &l_dag * l;
            out += l * rho * &l_dag - (&ldl * rho + rho * &ldl).scale(0.5);
        }
        Ok(out)
    }
}

/// Real matrix form of a generator in a fixed operator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    full: RealMatrix,
    drift: RealMatrix,
    offset: RealVector,
}

impl Superoperator {
    /// Builds `L̂_{kj} = Re Tr(F_k 𝓛(F_j))`.
    pub fn vectorize(generator: &LindbladGenerator, basis: &OperatorBasis) -> Result<Self> {
        if generator.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                context: "vectorize",
                expected: basis.dim(),
                found: generator.dim(),
            });
        }
        let n2 = basis.len();
        let mut full = RealMatrix::zeros(n2, n2);
        for (j, f_j) in basis.elements().iter().enumerate() {
            let image = generator.apply(f_j)?;
            for (k, f_k) in basis.elements().iter().enumerate() {
                full[(k, j)] = trace_product(f_k, &image).re;
            }
        }
        Self::from_full(basis.dim(), full)
    }

    /// Wraps an `N² × N²` matrix whose first row vanishes.
    pub fn from_full(dim: usize, full: RealMatrix) -> Result<Self> {
        let n2 = dim * dim;
        if dim < 2 || full.shape() != (n2, n2) {
            return Err(Error::DimensionMismatch {
                context: "superoperator size",
                expected: n2,
                found: full.nrows(),
            });
        }
        linalg::ensure_finite(&full)?;
        let first_row = full.row(0).amax();
        if first_row > 1e-12 * full.norm().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "superoperator is not trace preserving (first row {first_row:.3e})"
            )));
        }
        let drift = full.view((1, 1), (n2 - 1, n2 - 1)).into_owned();
        let offset = full.view((1, 0), (n2 - 1, 1)).column(0) * (dim as f64).sqrt().recip();
        Ok(Self {
            dim,
            full,
            drift,
            offset,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `N² × N²` matrix acting on `(1/√N, r)`.
    pub fn full(&self) -> &RealMatrix {
        &self.full
    }

    /// The linear part `A`.
    pub fn a(&self) -> &RealMatrix {
        &self.drift
    }

    /// The affine part `b`.
    pub fn b(&self) -> &RealVector {
        &self.offset
    }

    /// `A r + b`.
    pub fn derivative(&self, r: &RealVector) -> RealVector {
        &self.drift * r + &self.offset
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.offset.amax() <= tol
    }
}

/// Unique `v̄` with `A_j v̄ + b_j = 0` for every `j`, validated as a state.
pub fn common_fixed_point(sups: &[Superoperator]) -> Result<CoherenceVector> {
    let first = sups
        .first()
        .ok_or_else(|| Error::InvalidParameter("no superoperators given".into()))?;
    let dim = first.dim();
    let m = dim * dim - 1;
    for s in sups {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "common fixed point",
                expected: dim,
                found: s.dim(),
            });
        }
    }
    let mut stacked = RealMatrix::zeros(sups.len() * m, m + 1);
    for (j, s) in sups.iter().enumerate() {
        stacked.view_mut((j * m, 0), (m, m)).copy_from(s.a());
        stacked.view_mut((j * m, m), (m, 1)).copy_from(s.b());
    }
    let kernel = linalg::nullspace(&stacked, tol::FIXED_POINT_KERNEL)?;
    let inconsistent = || {
        let sv = stacked.singular_values();
        let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
        Error::NoCommonFixedPoint {
            residual: smallest / stacked.norm().max(f64::MIN_POSITIVE),
        }
    };
    match kernel.ncols() {
        0 => return Err(inconsistent()),
        1 => {}
        d => return Err(Error::MultipleCommonFixedPoints { dimension: d }),
    }
    let scale = kernel[(m, 0)];
    if scale.abs() <= tol::FIXED_POINT_KERNEL {
        return Err(inconsistent());
    }
    let r = kernel.view((0, 0), (m, 1)).column(0) / scale;
    let rho = states::coherence_to_matrix(r.as_slice(), &OperatorBasis::gell_mann(dim)?)?;
    let lowest = linalg::eigvalsh(&rho)?[0];
    if lowest < tol::COHERENCE_MIN_EIGENVALUE {
        return Err(Error::FixedPointNotAState {
            min_eigenvalue: lowest,
        });
    }
    CoherenceVector::new(dim, r)
}

/// Worst `‖A_j v + b_j‖` over the family, with the offending index.
pub fn fixed_point_residual(sups: &[Superoperator], v: &CoherenceVector) -> (usize, f64) {
    sups.iter()
        .enumerate()
        .map(|(j, s)| (j, s.derivative(v.components()).norm()))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// Outcome of [`check_invariance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// Largest `‖𝓛(E) − Π 𝓛(E) Π‖_F` over a Hermitian basis `E` of `𝔅(ℋ_S)`.
    pub residual: f64,
}

/// Tests whether operators supported on `ran Π` stay supported there.
pub fn check_invariance(generator: &LindbladGenerator, pi: &ComplexMatrix) -> Result<InvarianceReport> {
    states::check_projector(pi)?;
    if pi.nrows() != generator.dim() {
        return Err(Error::DimensionMismatch {
            context: "invariance projector",
            expected: generator.dim(),
            found: pi.nrows(),
        });
    }
    let (support, _) = projector_frames(pi)?;
    let mut residual: f64 = 0.0;
    for g in gell_mann_elements(support.ncols()) {
        let e = &support * g * support.adjoint();
        let image = generator.apply(&e)?;
        residual = residual.max((&image - pi * &image * pi).norm());
    }
    Ok(InvarianceReport {
        invariant: residual <= tol::INVARIANCE * generator.magnitude().max(1.0),
        residual,
    })
}

/// Orthonormal frames `(U_S, U_R)` of the range and kernel of a projector.
fn projector_frames(pi: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let eig = linalg::eigh(pi)?;
    let n = pi.nrows();
    let rank = eig.eigenvalues.iter().filter(|&&l| l > 0.5).count();
    if rank == 0 {
        return Err(Error::InvalidParameter("projector has rank zero".into()));
    }
    // Ascending eigenvalues: the kernel comes first.
    let range = eig.eigenvectors.columns(n - rank, rank).into_owned();
    let kernel = eig.eigenvectors.columns(0, n - rank).into_owned();
    Ok((range, kernel))
}

/// Operator basis adapted to `ℋ = ℋ_S ⊕ ℋ_R`.
///
/// Element order: `Π_S/√s`, the `s² − 1` traceless elements supported on
/// `ℋ_S`, then the `N² − s²` remaining elements (`Π_R/√(N−s)`, traceless
/// elements on `ℋ_R`, and the `S`–`R` coherences). The first `s²` coordinates
/// describe `𝔅(ℋ_S)`; the rest form the `⊥` block.
#[derive(Debug, Clone)]
pub struct SubspaceSplit {
    dim: usize,
    rank: usize,
    projector: ComplexMatrix,
    adapted: Vec<ComplexMatrix>,
    change_of_basis: RealMatrix,
}

impl SubspaceSplit {
    /// Builds the adapted basis and its orthogonal change of basis from `basis`.
    pub fn new(pi: &ComplexMatrix, basis: &OperatorBasis) -> Result<Self> {
        states::check_projector(pi)?;
        let dim = basis.dim();
        if pi.nrows() != dim {
            return Err(Error::DimensionMismatch {
                context: "subspace projector",
                expected: dim,
                found: pi.nrows(),
            });
        }
        let (u_s, u_r) = projector_frames(pi)?;
        let s = u_s.ncols();
        let r = u_r.ncols();
        let mut adapted = Vec::with_capacity(dim * dim);
        for g in gell_mann_elements(s) {
            adapted.push(&u_s * g * u_s.adjoint());
        }
        if r > 0 {
            for g in gell_mann_elements(r) {
                adapted.push(&u_r * g * u_r.adjoint());
            }
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let mut antisym = Vec::with_capacity(s * r);
            for a in 0..s {
                for b in 0..r {
                    let x = u_s.column(a) * u_r.column(b).adjoint();
                    let x_dag = x.adjoint();
                    adapted.push((&x + &x_dag).scale(h));
                    antisym.push((x * Complex64::new(0.0, -h)) + x_dag * Complex64::new(0.0, h));
                }
            }
            adapted.extend(antisym);
        }
        let n2 = dim * dim;
        let change_of_basis = RealMatrix::from_fn(n2, n2, |k, j| {
            trace_product(&adapted[k], basis.element(j)).re
        });
        Ok(Self {
            dim,
            rank: s,
            projector: pi.clone(),
            adapted,
            change_of_basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `s = dim ℋ_S`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn projector(&self) -> &ComplexMatrix {
        &self.projector
    }

    pub fn adapted_basis(&self) -> &[ComplexMatrix] {
        &self.adapted
    }

    /// Orthogonal `C_{kj} = Tr(G_k F_j)` from basis coordinates to adapted ones.
    pub fn change_of_basis(&self) -> &RealMatrix {
        &self.change_of_basis
    }

    /// Indices of the traceless `𝔅(ℋ_S)` coordinates.
    pub fn s_range(&self) -> std::ops::Range<usize> {
        1..self.rank * self.rank
    }

    /// Indices of the `⊥` coordinates.
    pub fn perp_range(&self) -> std::ops::Range<usize> {
        self.rank * self.rank..self.dim * self.dim
    }

    /// Adapted coordinates of a full basis vector `(1/√N, r)`.
    pub fn to_adapted(&self, full: &RealVector) -> RealVector {
        &self.change_of_basis * full
    }

    /// The `⊥` coordinates of a coherence vector; zero iff the state lives on `ℋ_S`.
    pub fn perp_coordinates(&self, r: &CoherenceVector) -> RealVector {
        let mut full = RealVector::zeros(self.dim * self.dim);
        full[0] = (self.dim as f64).sqrt().recip();
        full.rows_mut(1, r.components().len()).copy_from(r.components());
        let w = self.to_adapted(&full);
        let range = self.perp_range();
        w.rows(range.start, range.len()).into_owned()
    }

    /// `C L̂ Cᵀ`.
    pub fn transform(&self, full: &RealMatrix) -> RealMatrix {
        &self.change_of_basis * full * self.change_of_basis.transpose()
    }
}

/// Blocks of a superoperator in the adapted basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBlocks {
    pub b_s: RealVector,
    pub l_s: RealMatrix,
    pub l_x: RealMatrix,
    pub l_perp: RealMatrix,
    /// Largest entry in the `⊥` rows outside the `⊥` columns.
    pub residual: f64,
}

/// Extracts the upper block-triangular structure induced by an invariant `ℋ_S`.
pub fn subspace_blocks(sup: &Superoperator, split: &SubspaceSplit) -> Result<SubspaceBlocks> {
    if sup.dim() != split.dim() {
        return Err(Error::DimensionMismatch {
            context: "subspace blocks",
            expected: split.dim(),
            found: sup.dim(),
        });
    }
    let m = split.transform(sup.full());
    let s = split.s_range();
    let p = split.perp_range();
    let head = p.start;
    let residual = if p.is_empty() {
        0.0
    } else {
        m.view((p.start, 0), (p.len(), head)).amax()
    };
    if residual > tol::INVARIANCE * sup.full().norm().max(1.0) {
        return Err(Error::NotInvariant { leakage: residual });
    }
    let root_s = (split.rank() as f64).sqrt();
    Ok(SubspaceBlocks {
        b_s: m.view((s.start, 0), (s.len(), 1)).column(0) / root_s,
        l_s: m.view((s.start, s.start), (s.len(), s.len())).into_owned(),
        l_x: m.view((s.start, p.start), (s.len(), p.len())).into_owned(),
        l_perp: m.view((p.start, p.start), (p.len(), p.len())).into_owned(),
        residual,
    })
}
