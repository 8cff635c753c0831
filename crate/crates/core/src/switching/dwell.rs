use super::lyapunov::LyapunovData;
use crate::error::{Error, Result};
use crate::linalg::{self, RealMatrix};

const THETA_MAX: f64 = 100.0;
const GRID_POINTS: usize = 2000;
const GOLDEN_ITERATIONS: usize = 100;

/// Lower bound on the time between consecutive suboptimal switches:
/// `sup_{1<θ≤100} min_j min((1 − r_j)/(θ²η_j), ln θ/‖A_j‖)` with
/// `η_j = ‖A_jᵀ(Q_j + I) + (Q_j + I)A_j‖`. All norms are spectral.
///
/// Terms with a vanishing denominator impose no constraint; if none remain
/// the bound is infinite.
pub fn dwell_time_bound(lyap: &LyapunovData, rates: &[f64]) -> Result<f64> {
    if rates.len() != lyap.len() {
        return Err(Error::DimensionMismatch {
            context: "dwell-time rates",
            expected: lyap.len(),
            found: rates.len(),
        });
    }
    if rates.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) {
        return Err(Error::InvalidParameter("descent rates must lie in (0, 1]".into()));
    }
    let n = lyap.p().nrows();
    let id = RealMatrix::identity(n, n);
    let terms: Vec<(f64, f64, f64)> = lyap
        .drifts()
        .iter()
        .zip(lyap.q())
        .zip(rates)
        .map(|((a, q), &r)| {
            let shifted = q + &id;
            let eta = linalg::spectral_norm(&(a.transpose() * &shifted + &shifted * a));
            (1.0 - r, eta, linalg::spectral_norm(a))
        })
        .collect();
    Ok(maximize(|theta| bound_at(&terms, theta)))
}

fn bound_at(terms: &[(f64, f64, f64)], theta: f64) -> f64 {
    let mut value = f64::INFINITY;
    for &(slack, eta, norm_a) in terms {
        if eta > 0.0 {
            value = value.min(slack / (theta * theta * eta));
        }
        if norm_a > 0.0 {
            value = value.min(theta.ln() / norm_a);
        }
    }
    value
}

/// Maximizes `f` over `(1, THETA_MAX]` on a log grid, then refines the best
/// bracket by golden-section search.
fn maximize(f: impl Fn(f64) -> f64) -> f64 {
    let theta = |i: usize| THETA_MAX.powf(i as f64 / GRID_POINTS as f64);
    let (mut best_i, mut best) = (1, f(theta(1)));
    for i in 2..=GRID_POINTS {
        let v = f(theta(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best.is_infinite() {
        return best;
    }
    let (mut lo, mut hi) = (theta(best_i - 1).max(1.0 + f64::EPSILON), theta((best_i + 1).min(GRID_POINTS)));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..GOLDEN_ITERATIONS {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    best.max(fa).max(fb)
}

#[cfg(test)]
mod tests {
    use super::super::verify_assumption1;
    use super::*;
    use crate::linalg::RealVector;

    fn diag(v: &[f64]) -> RealMatrix {
        RealMatrix::from_diagonal(&RealVector::from_row_slice(v))
    }

    #[test]
    fn unit_rates_give_zero() {
        let mats = vec![diag(&[-2.0, 0.5]), diag(&[0.5, -2.0])];
        let comb = verify_assumption1(&mats, &[0.5, 0.5]).unwrap();
        let lyap = LyapunovData::design(&mats, &comb).unwrap();
        assert_eq!(dwell_time_bound(&lyap, &[1.0, 1.0]).unwrap(), 0.0);
        let b = dwell_time_bound(&lyap, &[0.5, 0.25]).unwrap();
        assert!(b > 0.0 && b.is_finite());
        assert!(dwell_time_bound(&lyap, &[0.5]).is_err());
        assert!(dwell_time_bound(&lyap, &[1.5, 0.5]).is_err());
    }

    #[test]
    fn single_generator_matches_scalar_oracle() {
        let a = RealMatrix::from_row_slice(2, 2, &[-1.0, 3.0, 0.0, -2.0]);
        let mats = vec![a.clone()];
        let comb = verify_assumption1(&mats, &[1.0]).unwrap();
        let lyap = LyapunovData::design(&mats, &comb).unwrap();
        let q = &lyap.q()[0] + RealMatrix::identity(2, 2);
        let eta = linalg::spectral_norm(&(a.transpose() * &q + &q * &a));
        let norm_a = linalg::spectral_norm(&a);
        // Brute-force oracle on a fine uniform grid.
        let oracle = (1..=2_000_000)
            .map(|i| 1.0 + 99.0 * i as f64 / 2_000_000.0)
            .map(|t: f64| (0.5 / (t * t * eta)).min(t.ln() / norm_a))
            .fold(0.0, f64::max);
        let bound = dwell_time_bound(&lyap, &[0.5]).unwrap();
        assert!((bound - oracle).abs() < 1e-9 * oracle.max(1.0), "{bound} vs {oracle}");
    }
}
