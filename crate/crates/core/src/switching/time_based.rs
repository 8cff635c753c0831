use super::lyapunov::validate_weights;
use super::{Cursor, Grid, Propagator, SwitchedRun};
use crate::error::{Error, Result};
use crate::linalg::{self, RealMatrix, RealVector};
use crate::tol;

/// One slot `[start, end)` of the cycle, relative to the cycle start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub index: usize,
    pub start: f64,
    pub end: f64,
}

/// Cyclic schedule giving generator `j` a slot of length `α_j ε` per period.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeBasedLaw {
    weights: Vec<f64>,
    period: f64,
    order: Vec<usize>,
    segments: Vec<Segment>,
}

impl TimeBasedLaw {
    /// Slots in ascending generator order.
    pub fn new(weights: &[f64], period: f64) -> Result<Self> {
        Self::with_order(weights, period, (0..weights.len()).collect())
    }

    /// Slots visited in the given order (a permutation of the indices).
    pub fn with_order(weights: &[f64], period: f64, order: Vec<usize>) -> Result<Self> {
        validate_weights(weights, weights.len())?;
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
        }
        let mut seen = vec![false; weights.len()];
        if order.len() != weights.len() || order.iter().any(|&j| j >= seen.len() || std::mem::replace(&mut seen[j], true)) {
            return Err(Error::InvalidParameter("order must be a permutation of the generator indices".into()));
        }
        let mut segments = Vec::new();
        let mut start = 0.0;
        for &j in &order {
            let end = start + weights[j] * period;
            if weights[j] > 0.0 {
                segments.push(Segment { index: j, start, end });
            }
            start = end;
        }
        if let Some(last) = segments.last_mut() {
            last.end = period;
        }
        Ok(Self {
            weights: weights.to_vec(),
            period,
            order,
            segments,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The cycle length `ε`.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Non-empty slots, partitioning `[0, ε)`.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `σ(t)`.
    pub fn active_at(&self, t: f64) -> usize {
        let tau = t.rem_euclid(self.period);
        self.segments
            .iter()
            .find(|s| tau < s.end)
            .unwrap_or_else(|| self.segments.last().expect("weights sum to one"))
            .index
    }
}

/// Outcome of [`certify_epsilon`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyCertificate {
    pub certified: bool,
    /// Smallest `‖M^k‖₂^{1/k}` observed, an upper bound on the spectral radius.
    pub radius_bound: f64,
    /// The power `k` attaining it.
    pub power: usize,
}

/// Checks that the cycle monodromy `M = Π_j exp(α_j A_j ε)` is a contraction
/// in some power `k ≤ 256`, which implies spectral radius below one.
///
/// Powers are examined by repeated squaring, so the test is conservative.
pub fn certify_epsilon(law: &TimeBasedLaw, mats: &[RealMatrix]) -> Result<MonodromyCertificate> {
    if mats.len() != law.weights().len() {
        return Err(Error::DimensionMismatch {
            context: "monodromy family",
            expected: law.weights().len(),
            found: mats.len(),
        });
    }
    let n = linalg::ensure_square(&mats[0])?;
    let mut m = RealMatrix::identity(n, n);
    for s in law.segments() {
        m = linalg::expm(&(&mats[s.index] * (s.end - s.start)))? * m;
    }
    let threshold = 1.0 - tol::MONODROMY_MARGIN;
    let mut best = (f64::INFINITY, 1);
    let mut k = 1;
    loop {
        let bound = linalg::spectral_norm(&m).powf(1.0 / k as f64);
        if bound < best.0 {
            best = (bound, k);
        }
        if bound < threshold || k >= tol::MONODROMY_MAX_POWER {
            break;
        }
        m = &m * &m;
        k *= 2;
    }
    Ok(MonodromyCertificate {
        certified: best.0 < threshold,
        radius_bound: best.0,
        power: best.1,
    })
}

/// True when every `A_j` is symmetric and the joint kernel is trivial, in which
/// case any schedule visiting all generators recurrently is stabilizing.
pub fn hermitian_cyclic_check(mats: &[RealMatrix]) -> bool {
    let Some(first) = mats.first() else {
        return false;
    };
    let n = first.nrows();
    if mats.iter().any(|a| a.shape() != (n, n) || linalg::symmetric_residual(a) > tol::SYMMETRIC_GENERATOR) {
        return false;
    }
    let mut stacked = RealMatrix::zeros(n * mats.len(), n);
    for (j, a) in mats.iter().enumerate() {
        stacked.view_mut((j * n, 0), (n, n)).copy_from(a);
    }
    if stacked.norm() == 0.0 {
        return n == 0;
    }
    matches!(linalg::nullspace(&stacked, tol::JOINT_KERNEL), Ok(k) if k.ncols() == 0)
}

/// Simulates the cyclic schedule of `law`.
pub fn run_cyclic(law: &TimeBasedLaw, prop: &mut Propagator, x0: RealVector, grid: Grid) -> Result<SwitchedRun> {
    if prop.drifts().len() != law.weights().len() {
        return Err(Error::DimensionMismatch {
            context: "cyclic family",
            expected: law.weights().len(),
            found: prop.drifts().len(),
        });
    }
    let segments = law.segments().to_vec();
    let mut cursor = Cursor::new(prop, grid, x0, segments[0].index)?;
    let end = cursor.end();
    let mut cycle = 0usize;
    'outer: loop {
        let base = cycle as f64 * law.period();
        for s in &segments {
            if base + s.start > end - cursor.tol() {
                break 'outer;
            }
            cursor.switch(s.index);
            cursor.evolve(s.index, base + s.end);
        }
        cycle += 1;
    }
    Ok(cursor.finish())
}
