//! Switching-law design and simulation in translated (linear) coordinates.
//!
//! Every law acts on a family of drift matrices `A_j` with common equilibrium
//! at the origin. Trajectories are sampled on a uniform grid while switches
//! may happen at arbitrary instants; [`Propagator`] evaluates exact matrix
//! exponentials for every sub-interval.

mod dwell;
mod lyapunov;
mod state_based;
mod time_based;

use std::collections::HashMap;

pub use dwell::dwell_time_bound;
pub use lyapunov::{
    hurwitz_certificate, is_hurwitz, search_hurwitz_combination, solve_lyapunov, verify_assumption1,
    ConvexCombination, LyapunovData,
};
pub use state_based::{run_steepest, run_suboptimal, steepest_index, StateBasedLaw, SwitchingMode};
pub use time_based::{
    certify_epsilon, hermitian_cyclic_check, run_cyclic, MonodromyCertificate, Segment, TimeBasedLaw,
};

use crate::error::{Error, Result};
use crate::linalg::{self, RealMatrix, RealVector};

/// Uniform sampling grid `t_k = k·step`, `0 ≤ t_k ≤ horizon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub step: f64,
    pub horizon: f64,
}

impl Grid {
    pub fn new(step: f64, horizon: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
        }
        if !(horizon >= 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be non-negative, got {horizon}"
            )));
        }
        Ok(Self { step, horizon })
    }

    /// Number of intervals; the grid has one more point.
    pub fn intervals(&self) -> usize {
        (self.horizon / self.step + 1e-9).floor() as usize
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.time(self.intervals())
    }

    /// Two instants closer than this are treated as equal.
    pub fn time_tolerance(&self) -> f64 {
        1e-9 * self.step
    }
}

/// Switching times and the generator index active from each of them on.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SwitchRecord {
    times: Vec<f64>,
    indices: Vec<usize>,
}

impl SwitchRecord {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a record from explicit entries, validating strict ordering.
    pub fn from_entries(times: Vec<f64>, indices: Vec<usize>) -> Result<Self> {
        if times.len() != indices.len() {
            return Err(Error::DimensionMismatch {
                context: "switch record",
                expected: times.len(),
                found: indices.len(),
            });
        }
        if times.windows(2).any(|w| w[1] <= w[0]) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("switch times must be strictly increasing".into()));
        }
        Ok(Self { times, indices })
    }

    /// Appends a switch; repeated indices are merged and a switch at the
    /// time of the last entry replaces it.
    pub fn push(&mut self, time: f64, index: usize) {
        if let Some(&last) = self.times.last() {
            if time <= last {
                *self.indices.last_mut().expect("non-empty") = index;
                self.dedup_tail();
                return;
            }
        }
        if self.indices.last() == Some(&index) {
            return;
        }
        self.times.push(time);
        self.indices.push(index);
    }

    fn dedup_tail(&mut self) {
        let n = self.indices.len();
        if n >= 2 && self.indices[n - 1] == self.indices[n - 2] {
            self.indices.pop();
            self.times.pop();
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of actual changes of generator.
    pub fn switch_count(&self) -> usize {
        self.times.len().saturating_sub(1)
    }

    /// Index in effect at time `t` (the first entry for earlier times).
    pub fn active_at(&self, t: f64) -> Option<usize> {
        let k = self.times.partition_point(|&s| s <= t);
        self.indices.get(k.saturating_sub(1)).copied()
    }

    /// Intervals between consecutive switches.
    pub fn gaps(&self) -> Vec<f64> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// A sampled switched trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchedRun {
    pub record: SwitchRecord,
    pub times: Vec<f64>,
    pub states: Vec<RealVector>,
    /// Generator in effect immediately after each sample time.
    pub active: Vec<usize>,
}

impl SwitchedRun {
    fn start(x0: RealVector, index: usize) -> Self {
        let mut record = SwitchRecord::new();
        record.push(0.0, index);
        Self {
            record,
            times: vec![0.0],
            states: vec![x0],
            active: vec![index],
        }
    }

    pub fn last_state(&self) -> &RealVector {
        self.states.last().expect("runs hold the initial state")
    }

    /// Records a switch at `t`, updating the active index of a coincident sample.
    fn switch(&mut self, t: f64, index: usize, tol: f64) {
        self.record.push(t, index);
        if let Some(&last) = self.times.last() {
            if (last - t).abs() <= tol {
                *self.active.last_mut().expect("non-empty") = index;
            }
        }
    }
}

/// Cached matrix exponentials `exp(A_j δ)` for a fixed family.
///
/// Durations are quantized to `1e-12` so that periodic schedules reuse the
/// same handful of propagators.
#[derive(Debug, Clone)]
pub struct Propagator {
    drifts: Vec<RealMatrix>,
    cache: HashMap<(usize, i64), RealMatrix>,
}

const QUANTUM: f64 = 1e-12;

impl Propagator {
    pub fn new(drifts: Vec<RealMatrix>) -> Result<Self> {
        let n = drifts
            .first()
            .map(linalg::ensure_square)
            .transpose()?
            .ok_or_else(|| Error::InvalidParameter("empty generator family".into()))?;
        for a in &drifts {
            if a.shape() != (n, n) {
                return Err(Error::DimensionMismatch {
                    context: "generator family",
                    expected: n,
                    found: a.nrows(),
                });
            }
            linalg::ensure_finite(a)?;
        }
        Ok(Self {
            drifts,
            cache: HashMap::new(),
        })
    }

    pub fn drifts(&self) -> &[RealMatrix] {
        &self.drifts
    }

    pub fn state_dim(&self) -> usize {
        self.drifts[0].nrows()
    }

    /// `exp(A_j δ)` (with `δ` quantized).
    pub fn exp(&mut self, j: usize, delta: f64) -> &RealMatrix {
        let key = (delta / QUANTUM).round() as i64;
        let a = &self.drifts[j];
        self.cache
            .entry((j, key))
            .or_insert_with(|| linalg::expm(&(a * (key as f64 * QUANTUM))).expect("square family"))
    }

    pub fn advance(&mut self, j: usize, x: &RealVector, delta: f64) -> RealVector {
        if delta <= 0.0 {
            return x.clone();
        }
        self.exp(j, delta) * x
    }
}

/// Simulation cursor shared by all laws.
pub(crate) struct Cursor<'a> {
    prop: &'a mut Propagator,
    grid: Grid,
    next_sample: usize,
    pub t: f64,
    pub x: RealVector,
    pub run: SwitchedRun,
}

impl<'a> Cursor<'a> {
    pub fn new(prop: &'a mut Propagator, grid: Grid, x0: RealVector, index: usize) -> Result<Self> {
        if x0.len() != prop.state_dim() {
            return Err(Error::DimensionMismatch {
                context: "initial state",
                expected: prop.state_dim(),
                found: x0.len(),
            });
        }
        if index >= prop.drifts.len() {
            return Err(Error::InvalidParameter(format!("generator index {index} out of range")));
        }
        Ok(Self {
            prop,
            grid,
            next_sample: 1,
            t: 0.0,
            run: SwitchedRun::start(x0.clone(), index),
            x: x0,
        })
    }

    pub fn end(&self) -> f64 {
        self.grid.end()
    }

    pub fn finished(&self) -> bool {
        self.next_sample > self.grid.intervals()
    }

    pub fn next_sample_time(&self) -> f64 {
        self.grid.time(self.next_sample)
    }

    pub fn tol(&self) -> f64 {
        self.grid.time_tolerance()
    }

    pub fn switch(&mut self, index: usize) {
        let tol = self.tol();
        self.run.switch(self.t, index, tol);
    }

    /// Evolves with generator `j` up to `until` (clamped to the grid end),
    /// recording every grid sample passed.
    pub fn evolve(&mut self, j: usize, until: f64) {
        let until = until.min(self.end());
        let tol = self.tol();
        while !self.finished() && self.next_sample_time() <= until + tol {
            let s = self.next_sample_time();
            self.x = self.prop.advance(j, &self.x, s - self.t);
            self.t = s;
            self.run.times.push(s);
            self.run.states.push(self.x.clone());
            self.run.active.push(j);
            self.next_sample += 1;
        }
        if until > self.t + tol {
            self.x = self.prop.advance(j, &self.x, until - self.t);
            self.t = until;
        }
    }

    /// Undoes the most recent single-sample [`Cursor::evolve`] call.
    pub fn rewind(&mut self, t: f64, x: RealVector) {
        self.run.times.pop();
        self.run.states.pop();
        self.run.active.pop();
        self.next_sample -= 1;
        self.t = t;
        self.x = x;
    }

    pub fn propagate(&mut self, j: usize, x: &RealVector, delta: f64) -> RealVector {
        self.prop.advance(j, x, delta)
    }

    pub fn finish(self) -> SwitchedRun {
        self.run
    }
}

/// Replays a fixed switching record from `x0`.
pub fn replay(prop: &mut Propagator, x0: RealVector, record: &SwitchRecord, grid: Grid) -> Result<SwitchedRun> {
    let first = *record
        .indices()
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty switch record".into()))?;
    if let Some(&bad) = record.indices().iter().find(|&&j| j >= prop.drifts().len()) {
        return Err(Error::InvalidParameter(format!("generator index {bad} out of range")));
    }
    let mut cursor = Cursor::new(prop, grid, x0, first)?;
    let times = record.times();
    let indices = record.indices();
    for k in 0..times.len() {
        if times[k] > cursor.t + cursor.tol() {
            cursor.evolve(indices[k.saturating_sub(1)], times[k]);
        }
        if cursor.t + cursor.tol() < times[k] {
            break;
        }
        cursor.switch(indices[k]);
    }
    let last = *indices.last().expect("non-empty");
    let end = cursor.end();
    cursor.evolve(last, end);
    Ok(cursor.finish())
}

/// Evolution under a single generator.
pub fn run_fixed(prop: &mut Propagator, x0: RealVector, index: usize, grid: Grid) -> Result<SwitchedRun> {
    let mut record = SwitchRecord::new();
    record.push(0.0, index);
    replay(prop, x0, &record, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation_family() -> Propagator {
        let a = RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let b = RealMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]);
        Propagator::new(vec![a, b]).unwrap()
    }

    #[test]
    fn grid_counts() {
        let g = Grid::new(0.02, 1.0).unwrap();
        assert_eq!(g.intervals(), 50);
        assert!((g.end() - 1.0).abs() < 1e-12);
        assert!(Grid::new(0.0, 1.0).is_err());
        assert!(Grid::new(0.1, -1.0).is_err());
    }

    #[test]
    fn record_merges_and_orders() {
        let mut r = SwitchRecord::new();
        r.push(0.0, 1);
        r.push(0.5, 1);
        r.push(1.0, 0);
        r.push(1.0, 1);
        assert_eq!(r.indices(), &[1]);
        r.push(2.0, 0);
        assert_eq!(r.times(), &[0.0, 2.0]);
        assert_eq!(r.active_at(1.5), Some(1));
        assert_eq!(r.active_at(2.0), Some(0));
        assert_eq!(r.gaps(), vec![2.0]);
        assert!(SwitchRecord::from_entries(vec![0.0, 0.0], vec![0, 1]).is_err());
    }

    #[test]
    fn replay_matches_piecewise_exponentials() {
        let mut prop = rotation_family();
        let record = SwitchRecord::from_entries(vec![0.0, 0.35, 0.8], vec![0, 1, 0]).unwrap();
        let x0 = RealVector::from_vec(vec![1.0, 0.5]);
        let run = replay(&mut prop, x0.clone(), &record, Grid::new(0.1, 1.0).unwrap()).unwrap();
        assert_eq!(run.times.len(), 11);
        let drifts = prop.drifts().to_vec();
        let e = |j: usize, d: f64| linalg::expm(&(&drifts[j] * d)).unwrap();
        let expected = e(0, 0.2) * e(1, 0.45) * e(0, 0.35) * &x0;
        assert!((run.last_state() - expected).amax() < 1e-12);
        assert_eq!(run.active[3], 0);
        assert_eq!(run.active[4], 1);
        assert_eq!(run.active[8], 0);
        assert_eq!(run.record, record);
    }

    #[test]
    fn fixed_run_is_plain_flow() {
        let mut prop = rotation_family();
        let x0 = RealVector::from_vec(vec![1.0, 0.0]);
        let run = run_fixed(&mut prop, x0, 0, Grid::new(0.25, 2.0).unwrap()).unwrap();
        for (t, x) in run.times.iter().zip(&run.states) {
            assert!((x[0] - t.cos()).abs() < 1e-12 && (x[1] + t.sin()).abs() < 1e-12);
        }
        assert_eq!(run.record.switch_count(), 0);
    }
}
