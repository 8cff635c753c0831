use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::linalg::{self, RealMatrix, RealVector};
use crate::tol;

/// Position of `(i, j)`, `i ≤ j`, in the row-wise upper triangle of an `n × n` matrix.
fn upper_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Solves `AᵀP + PA = −I` for symmetric `P` and checks `P ≻ 0`.
///
/// The unknowns are the `n(n+1)/2` upper-triangular entries of `P`; the
/// equations are the matching entries of the (symmetric) left-hand side.
pub fn solve_lyapunov(a: &RealMatrix) -> Result<RealMatrix> {
    let n = linalg::ensure_square(a)?;
    linalg::ensure_finite(a)?;
    let m = n * (n + 1) / 2;
    let mut system = RealMatrix::zeros(m, m);
    let mut rhs = RealMatrix::zeros(m, 1);
    for k in 0..n {
        for l in k..n {
            let row = upper_index(n, k, l);
            for q in 0..n {
                system[(row, upper_index(n, q, l))] += a[(q, k)];
                system[(row, upper_index(n, k, q))] += a[(q, l)];
            }
            if k == l {
                rhs[(row, 0)] = -1.0;
            }
        }
    }
    let sol = linalg::solve_linear(&system, &rhs)?;
    let p = RealMatrix::from_fn(n, n, |i, j| sol[(upper_index(n, i, j), 0)]);
    let residual = (a.transpose() * &p + &p * a + RealMatrix::identity(n, n)).norm();
    if residual > tol::LYAPUNOV_RESIDUAL {
        return Err(Error::NotHurwitz {
            diagnostic: format!("Lyapunov residual {residual:.3e} exceeds tolerance"),
        });
    }
    linalg::cholesky(&p)?;
    Ok(p)
}

/// Lyapunov certificate `P` of a Hurwitz matrix, or a diagnostic.
pub fn hurwitz_certificate(a: &RealMatrix) -> Result<RealMatrix> {
    solve_lyapunov(a).map_err(|e| match e {
        Error::NotHurwitz { .. } | Error::NonSquare { .. } | Error::NonFinite => e,
        other => Error::NotHurwitz {
            diagnostic: other.to_string(),
        },
    })
}

/// Lyapunov test: every eigenvalue has strictly negative real part.
pub fn is_hurwitz(a: &RealMatrix) -> bool {
    hurwitz_certificate(a).is_ok()
}

/// A simplex point `α` and the matrix `A_c = Σ α_j A_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCombination {
    weights: Vec<f64>,
    combined: RealMatrix,
}

impl ConvexCombination {
    pub fn new(mats: &[RealMatrix], weights: &[f64]) -> Result<Self> {
        validate_weights(weights, mats.len())?;
        let n = linalg::ensure_square(&mats[0])?;
        let mut combined = RealMatrix::zeros(n, n);
        for (a, &w) in mats.iter().zip(weights) {
            if a.shape() != (n, n) {
                return Err(Error::DimensionMismatch {
                    context: "convex combination",
                    expected: n,
                    found: a.nrows(),
                });
            }
            combined += a * w;
        }
        Ok(Self {
            weights: weights.to_vec(),
            combined,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `A_c`.
    pub fn matrix(&self) -> &RealMatrix {
        &self.combined
    }
}

pub(crate) fn validate_weights(weights: &[f64], expected: usize) -> Result<()> {
    if weights.is_empty() || weights.len() != expected {
        return Err(Error::InvalidWeights(format!(
            "expected {expected} weights, got {}",
            weights.len()
        )));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > tol::WEIGHT_SUM {
        return Err(Error::InvalidWeights(format!("weights sum to {sum}, not one")));
    }
    Ok(())
}

/// Returns the combination with weights `α` if `Σ α_j A_j` is Hurwitz.
pub fn verify_assumption1(mats: &[RealMatrix], weights: &[f64]) -> Result<ConvexCombination> {
    let comb = ConvexCombination::new(mats, weights)?;
    hurwitz_certificate(comb.matrix())?;
    Ok(comb)
}

/// Heuristic search for a Hurwitz convex combination.
///
/// Candidates are tried in order: simplex vertices, the centroid, a regular
/// grid sorted by distance from the centroid, then seeded uniform samples, until `budget`
/// Lyapunov tests have been spent. `None` does not prove nonexistence.
pub fn search_hurwitz_combination(mats: &[RealMatrix], budget: usize) -> Option<ConvexCombination> {
    let m = mats.len();
    if m == 0 || budget == 0 {
        return None;
    }
    let mut candidates: Vec<Vec<f64>> = (0..m)
        .map(|j| (0..m).map(|k| if k == j { 1.0 } else { 0.0 }).collect())
        .collect();
    if m > 1 {
        let grid_budget = budget.saturating_sub(m).div_ceil(2).max(1);
        let mut resolution = 1;
        while simplex_points(m, resolution + 1) <= grid_budget {
            resolution += 1;
        }
        let centroid = vec![1.0 / m as f64; m];
        let mut grid = Vec::new();
        simplex_grid(m, resolution, &mut Vec::new(), &mut grid);
        grid.retain(|w| w.iter().filter(|&&x| x > 0.0).count() > 1);
        grid.sort_by(|a, b| distance(a, &centroid).total_cmp(&distance(b, &centroid)));
        candidates.push(centroid);
        candidates.extend(grid);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        while candidates.len() < budget {
            let e: Vec<f64> = (0..m).map(|_| Exp1.sample(&mut rng)).collect();
            let s: f64 = e.iter().sum();
            candidates.push(e.into_iter().map(|x| x / s).collect());
        }
    }
    candidates
        .into_iter()
        .take(budget)
        .find_map(|w| verify_assumption1(mats, &normalize(w)).ok())
}

fn normalize(mut w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Number of points of the simplex grid with spacing `1/resolution`.
fn simplex_points(m: usize, resolution: usize) -> usize {
    // C(resolution + m − 1, m − 1), saturating.
    let mut c: u128 = 1;
    for i in 1..m {
        c = c * (resolution + i) as u128 / i as u128;
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

fn simplex_grid(m: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
    if prefix.len() == m - 1 {
        let total = prefix.iter().sum::<usize>() + remaining;
        let mut w: Vec<f64> = prefix.iter().map(|&k| k as f64 / total as f64).collect();
        w.push(remaining as f64 / total as f64);
        out.push(w);
        return;
    }
    for k in 0..=remaining {
        prefix.push(k);
        simplex_grid(m, remaining - k, prefix, out);
        prefix.pop();
    }
}

/// `P` solving `A_cᵀP + PA_c = −I` and the forms `Q_j = A_jᵀP + PA_j`.
#[derive(Debug, Clone)]
pub struct LyapunovData {
    drifts: Vec<RealMatrix>,
    weights: Vec<f64>,
    p: RealMatrix,
    q: Vec<RealMatrix>,
    p_eigen_range: (f64, f64),
}

impl LyapunovData {
    pub fn design(mats: &[RealMatrix], comb: &ConvexCombination) -> Result<Self> {
        if comb.weights().len() != mats.len() {
            return Err(Error::InvalidWeights(format!(
                "combination has {} weights for {} generators",
                comb.weights().len(),
                mats.len()
            )));
        }
        let p = hurwitz_certificate(comb.matrix())?;
        let q = mats
            .iter()
            .map(|a| linalg::symmetrize(&(a.transpose() * &p + &p * a)))
            .collect();
        let eig = linalg::eigvals_symmetric(&p)?;
        Ok(Self {
            drifts: mats.to_vec(),
            weights: comb.weights().to_vec(),
            p_eigen_range: (eig[0], eig[eig.len() - 1]),
            p,
            q,
        })
    }

    pub fn drifts(&self) -> &[RealMatrix] {
        &self.drifts
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn p(&self) -> &RealMatrix {
        &self.p
    }

    pub fn q(&self) -> &[RealMatrix] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `V(x) = xᵀPx`.
    pub fn value(&self, x: &RealVector) -> f64 {
        x.dot(&(&self.p * x))
    }

    /// `xᵀQ_j x`, the derivative of `V` along generator `j`.
    pub fn q_form(&self, j: usize, x: &RealVector) -> f64 {
        x.dot(&(&self.q[j] * x))
    }

    pub fn p_min_eigenvalue(&self) -> f64 {
        self.p_eigen_range.0
    }

    pub fn p_max_eigenvalue(&self) -> f64 {
        self.p_eigen_range.1
    }
}
