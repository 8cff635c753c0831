use super::lyapunov::LyapunovData;
use super::{Cursor, Grid, Propagator, SwitchedRun};
use crate::error::{Error, Result};
use crate::linalg::RealVector;

/// Index minimizing `xᵀQ_k x`; ties go to the lowest index.
pub fn steepest_index(x: &RealVector, lyap: &LyapunovData) -> usize {
    let mut best = (0, f64::INFINITY);
    for k in 0..lyap.len() {
        let v = lyap.q_form(k, x);
        if v < best.1 {
            best = (k, v);
        }
    }
    best.0
}

#[derive(Debug, Clone, PartialEq)]
pub enum SwitchingMode {
    /// Re-select the steepest generator every `interval` time units.
    SteepestFixedInterval { interval: f64 },
    /// Keep the active generator `j` while `xᵀQ_j x ≤ −r_j xᵀx`; on violation
    /// switch to the steepest one. With `refine`, violation instants between
    /// grid points are located by bisection to `1e-3` of the grid step.
    Suboptimal { rates: Vec<f64>, refine: bool },
}

/// Feedback law driven by the Lyapunov function `V = xᵀPx`.
#[derive(Debug, Clone)]
pub struct StateBasedLaw {
    mode: SwitchingMode,
    lyapunov: LyapunovData,
}

impl StateBasedLaw {
    pub fn steepest(lyapunov: LyapunovData, interval: f64) -> Result<Self> {
        if !(interval > 0.0 && interval.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "switching interval must be positive, got {interval}"
            )));
        }
        Ok(Self {
            mode: SwitchingMode::SteepestFixedInterval { interval },
            lyapunov,
        })
    }

    pub fn suboptimal(lyapunov: LyapunovData, rates: Vec<f64>, refine: bool) -> Result<Self> {
        if rates.len() != lyapunov.len() {
            return Err(Error::DimensionMismatch {
                context: "descent rates",
                expected: lyapunov.len(),
                found: rates.len(),
            });
        }
        if rates.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) {
            return Err(Error::InvalidParameter("descent rates must lie in (0, 1]".into()));
        }
        Ok(Self {
            mode: SwitchingMode::Suboptimal { rates, refine },
            lyapunov,
        })
    }

    pub fn mode(&self) -> &SwitchingMode {
        &self.mode
    }

    pub fn lyapunov(&self) -> &LyapunovData {
        &self.lyapunov
    }

    /// True when generator `j` violates its descent condition at `x`.
    pub fn violates(&self, j: usize, x: &RealVector) -> bool {
        match &self.mode {
            SwitchingMode::Suboptimal { rates, .. } => self.lyapunov.q_form(j, x) > -rates[j] * x.dot(x),
            SwitchingMode::SteepestFixedInterval { .. } => false,
        }
    }
}

fn check_family(law: &StateBasedLaw, prop: &Propagator) -> Result<()> {
    if prop.drifts().len() != law.lyapunov.len() {
        return Err(Error::DimensionMismatch {
            context: "state-based family",
            expected: law.lyapunov.len(),
            found: prop.drifts().len(),
        });
    }
    Ok(())
}

/// Steepest-descent switching re-evaluated at multiples of the interval.
pub fn run_steepest(law: &StateBasedLaw, prop: &mut Propagator, x0: RealVector, grid: Grid) -> Result<SwitchedRun> {
    let SwitchingMode::SteepestFixedInterval { interval } = law.mode else {
        return Err(Error::InvalidParameter("law is not in steepest-descent mode".into()));
    };
    check_family(law, prop)?;
    let lyap = &law.lyapunov;
    let j0 = steepest_index(&x0, lyap);
    let mut cursor = Cursor::new(prop, grid, x0, j0)?;
    let mut k = 0usize;
    while !cursor.finished() {
        let j = steepest_index(&cursor.x, lyap);
        cursor.switch(j);
        k += 1;
        cursor.evolve(j, k as f64 * interval);
    }
    Ok(cursor.finish())
}

/// Suboptimal switching with event detection on the sampling grid.
pub fn run_suboptimal(law: &StateBasedLaw, prop: &mut Propagator, x0: RealVector, grid: Grid) -> Result<SwitchedRun> {
    let SwitchingMode::Suboptimal { refine, .. } = law.mode else {
        return Err(Error::InvalidParameter("law is not in suboptimal mode".into()));
    };
    check_family(law, prop)?;
    let lyap = &law.lyapunov;
    let mut j = steepest_index(&x0, lyap);
    let mut cursor = Cursor::new(prop, grid, x0, j)?;
    let resolution = 1e-3 * grid.step;
    while !cursor.finished() {
        let (t_prev, x_prev) = (cursor.t, cursor.x.clone());
        let target = cursor.next_sample_time();
        cursor.evolve(j, target);
        if !law.violates(j, &cursor.x) {
            continue;
        }
        if refine {
            let (mut lo, mut hi) = (t_prev, cursor.t);
            while hi - lo > resolution {
                let mid = 0.5 * (lo + hi);
                let x_mid = cursor.propagate(j, &x_prev, mid - t_prev);
                if law.violates(j, &x_mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if hi < cursor.t - cursor.tol() {
                cursor.rewind(t_prev, x_prev);
                cursor.evolve(j, hi);
            }
        }
        j = steepest_index(&cursor.x, lyap);
        cursor.switch(j);
    }
    Ok(cursor.finish())
}

#[cfg(test)]
mod tests {
    use super::super::{verify_assumption1, SwitchRecord};
    use super::*;
    use crate::linalg::RealMatrix;

    fn diag(v: &[f64]) -> RealMatrix {
        RealMatrix::from_diagonal(&RealVector::from_row_slice(v))
    }

    fn complementary() -> (Vec<RealMatrix>, LyapunovData) {
        let mats = vec![diag(&[-2.0, 0.5]), diag(&[0.5, -2.0])];
        let comb = verify_assumption1(&mats, &[0.5, 0.5]).unwrap();
        let lyap = LyapunovData::design(&mats, &comb).unwrap();
        (mats, lyap)
    }

    #[test]
    fn steepest_tie_break_and_choice() {
        let mats = vec![diag(&[-1.0, -1.0]); 3];
        let comb = verify_assumption1(&mats, &[0.2, 0.3, 0.5]).unwrap();
        let lyap = LyapunovData::design(&mats, &comb).unwrap();
        assert_eq!(steepest_index(&RealVector::from_vec(vec![1.0, 2.0]), &lyap), 0);

        let (_, lyap) = complementary();
        assert_eq!(steepest_index(&RealVector::from_vec(vec![1.0, 0.1]), &lyap), 0);
        assert_eq!(steepest_index(&RealVector::from_vec(vec![0.1, 1.0]), &lyap), 1);
    }

    #[test]
    fn zero_state_never_moves() {
        let (mats, lyap) = complementary();
        let mut prop = Propagator::new(mats).unwrap();
        let grid = Grid::new(0.1, 2.0).unwrap();
        let steep = StateBasedLaw::steepest(lyap.clone(), 0.3).unwrap();
        let run = run_steepest(&steep, &mut prop, RealVector::zeros(2), grid).unwrap();
        assert!(run.states.iter().all(|x| x.norm() == 0.0));
        assert_eq!(run.record.len(), 1);
        let sub = StateBasedLaw::suboptimal(lyap, vec![1.0, 1.0], false).unwrap();
        let run = run_suboptimal(&sub, &mut prop, RealVector::zeros(2), grid).unwrap();
        assert_eq!(run.record.switch_count(), 0);
    }

    #[test]
    fn single_generator_is_plain_flow() {
        let mats = vec![diag(&[-1.0, -3.0])];
        let comb = verify_assumption1(&mats, &[1.0]).unwrap();
        let lyap = LyapunovData::design(&mats, &comb).unwrap();
        let law = StateBasedLaw::steepest(lyap, 0.06).unwrap();
        let mut prop = Propagator::new(mats).unwrap();
        let x0 = RealVector::from_vec(vec![1.0, 1.0]);
        let run = run_steepest(&law, &mut prop, x0, Grid::new(0.02, 1.0).unwrap()).unwrap();
        let last = run.last_state();
        assert!((last[0] - (-1.0f64).exp()).abs() < 1e-12);
        assert!((last[1] - (-3.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn steepest_switches_only_at_interval_multiples() {
        let (mats, lyap) = complementary();
        let law = StateBasedLaw::steepest(lyap, 0.06).unwrap();
        let mut prop = Propagator::new(mats).unwrap();
        let run = run_steepest(&law, &mut prop, RealVector::from_vec(vec![1.0, 0.8]), Grid::new(0.02, 3.0).unwrap()).unwrap();
        assert!(run.record.switch_count() > 2);
        for t in run.record.times() {
            let k = t / 0.06;
            assert!((k - k.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn suboptimal_descent_between_switches() {
        let (mats, lyap) = complementary();
        let rates = vec![0.5, 0.5];
        let law = StateBasedLaw::suboptimal(lyap.clone(), rates, false).unwrap();
        let mut prop = Propagator::new(mats).unwrap();
        let run = run_suboptimal(&law, &mut prop, RealVector::from_vec(vec![1.0, 0.8]), Grid::new(0.02, 5.0).unwrap()).unwrap();
        assert!(run.record.switch_count() > 0);
        for k in 0..run.times.len() - 1 {
            let j = run.active[k];
            let x = &run.states[k];
            assert!(lyap.q_form(j, x) <= -0.5 * x.dot(x) + 1e-12);
        }
    }

    #[test]
    fn refinement_moves_switches_off_grid() {
        let (mats, lyap) = complementary();
        let law = StateBasedLaw::suboptimal(lyap, vec![1.0, 1.0], true).unwrap();
        let mut prop = Propagator::new(mats).unwrap();
        let grid = Grid::new(0.1, 4.0).unwrap();
        let run = run_suboptimal(&law, &mut prop, RealVector::from_vec(vec![1.0, 0.9]), grid).unwrap();
        assert_eq!(run.times.len(), grid.intervals() + 1);
        let off_grid = run.record.times().iter().any(|t| {
            let k = t / grid.step;
            (k - k.round()).abs() > 1e-6
        });
        assert!(off_grid);
        let replayed = super::super::replay(&mut prop, RealVector::from_vec(vec![1.0, 0.9]), &run.record, grid).unwrap();
        assert!((replayed.last_state() - run.last_state()).amax() < 1e-12);
        let _: &SwitchRecord = &run.record;
    }

    #[test]
    fn invalid_laws() {
        let (mats, lyap) = complementary();
        assert!(StateBasedLaw::steepest(lyap.clone(), 0.0).is_err());
        assert!(StateBasedLaw::suboptimal(lyap.clone(), vec![1.0], false).is_err());
        assert!(StateBasedLaw::suboptimal(lyap.clone(), vec![0.0, 1.0], false).is_err());
        let law = StateBasedLaw::steepest(lyap, 0.1).unwrap();
        let mut prop = Propagator::new(mats).unwrap();
        assert!(run_suboptimal(&law, &mut prop, RealVector::zeros(2), Grid::new(0.1, 1.0).unwrap()).is_err());
    }
}
