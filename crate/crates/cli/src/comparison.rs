//! The four-strategy comparison.
//!
//! Schedules are designed on the estimated initial state in design
//! coordinates, then replayed open-loop on the full superoperator dynamics
//! from both the estimated and the actual initial state.

use std::fmt;

use qswitch::states::{coherence_to_matrix, half_trace_norm, to_coherence, trace_product};
use qswitch::switching::{
    replay, run_cyclic, run_steepest, run_suboptimal, Grid, Propagator, StateBasedLaw, SwitchRecord,
};
use qswitch::{linalg, CoherenceVector, ComplexMatrix, DensityMatrix, RealMatrix, RealVector};

use crate::design::{design, Design};
use crate::error::CliResult;
use crate::scenario::{ScenarioSpec, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    NoSwitch,
    TimeBased,
    Steepest,
    Suboptimal,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::NoSwitch,
        Strategy::TimeBased,
        Strategy::Steepest,
        Strategy::Suboptimal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::NoSwitch => "no-switch",
            Strategy::TimeBased => "time-based",
            Strategy::Steepest => "steepest",
            Strategy::Suboptimal => "suboptimal",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which initial state a series starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Start {
    Actual,
    Estimated,
}

impl Start {
    pub fn name(self) -> &'static str {
        match self {
            Start::Actual => "actual",
            Start::Estimated => "estimated",
        }
    }
}

/// Metrics of one strategy from one initial state, one entry per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub strategy: Strategy,
    pub start: Start,
    /// `V(x) = xᵀPx` in design coordinates.
    pub lyapunov: Vec<f64>,
    /// `‖v_r − v̄_r‖` for state targets, `‖x_⊥‖` for subspace targets.
    pub euclidean: Vec<f64>,
    /// `D(ρ, ρ̄)` for state targets, `1 − Tr(Πρ)` for subspace targets.
    pub trace_distance: Vec<f64>,
    /// One-based generator index in effect after each sample; 0 for the
    /// no-switch flow.
    pub active_index: Vec<usize>,
    /// Smallest eigenvalue of each sampled state.
    pub min_eigenvalue: Vec<f64>,
    pub switches: SwitchRecord,
}

impl Series {
    pub fn label(&self) -> String {
        format!("{}/{}", self.strategy.name(), self.start.name())
    }
}

/// Index of the first sample at which `values` drops to `threshold` or below.
pub fn first_crossing(values: &[f64], threshold: f64) -> Option<usize> {
    values.iter().position(|&v| v <= threshold)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub scenario: String,
    pub times: Vec<f64>,
    /// Ordered by strategy, actual before estimated.
    pub series: Vec<Series>,
}

impl TrajectoryLog {
    pub fn get(&self, strategy: Strategy, start: Start) -> &Series {
        self.series
            .iter()
            .find(|s| s.strategy == strategy && s.start == start)
            .expect("every strategy is logged from both starts")
    }

    /// Time at which `V` first reaches `fraction·V(0)`.
    pub fn lyapunov_crossing(&self, strategy: Strategy, start: Start, fraction: f64) -> Option<f64> {
        let s = self.get(strategy, start);
        first_crossing(&s.lyapunov, fraction * s.lyapunov[0]).map(|k| self.times[k])
    }

    /// Time after which the trace distance stays below `threshold`.
    pub fn settling_time(&self, strategy: Strategy, start: Start, threshold: f64) -> Option<f64> {
        let d = &self.get(strategy, start).trace_distance;
        match d.iter().rposition(|&v| v >= threshold) {
            None => Some(self.times[0]),
            Some(k) if k + 1 < d.len() => Some(self.times[k + 1]),
            Some(_) => None,
        }
    }
}

/// Designs the scenario and runs all four strategies.
pub fn run_comparison(spec: &ScenarioSpec) -> CliResult<TrajectoryLog> {
    let design = design(spec)?;
    run_comparison_with(spec, &design)
}

/// Runs the comparison for an existing design; strategies run in parallel.
pub fn run_comparison_with(spec: &ScenarioSpec, design: &Design) -> CliResult<TrajectoryLog> {
    let grid = Grid::new(spec.step, spec.horizon)?;
    let ctx = Context::new(spec, design)?;
    let results: Vec<CliResult<[Series; 2]>> = std::thread::scope(|scope| {
        let handles: Vec<_> = Strategy::ALL
            .iter()
            .map(|&strategy| {
                let ctx = &ctx;
                scope.spawn(move || ctx.run(strategy, grid))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("strategy thread panicked"))
            .collect()
    });
    let mut series = Vec::with_capacity(8);
    for r in results {
        series.extend(r?);
    }
    Ok(TrajectoryLog {
        scenario: spec.name.clone(),
        times: (0..=grid.intervals()).map(|k| grid.time(k)).collect(),
        series,
    })
}

enum Reference {
    State { rho: ComplexMatrix, r: RealVector },
    Subspace(ComplexMatrix),
}

struct Context<'a> {
    spec: &'a ScenarioSpec,
    design: &'a Design,
    reference: Reference,
    fulls: Vec<RealMatrix>,
    combined_full: RealMatrix,
    starts: [(Start, CoherenceVector); 2],
}

impl<'a> Context<'a> {
    fn new(spec: &'a ScenarioSpec, design: &'a Design) -> CliResult<Self> {
        let basis = &design.basis;
        let reference = match &spec.target {
            Target::State(rho) => Reference::State {
                rho: rho.matrix().clone(),
                r: to_coherence(rho, basis)?.into_components(),
            },
            Target::Subspace(pi) => Reference::Subspace(pi.clone()),
        };
        let fulls: Vec<RealMatrix> = design.superoperators.iter().map(|s| s.full().clone()).collect();
        let n2 = basis.len();
        let mut combined_full = RealMatrix::zeros(n2, n2);
        for (f, &w) in fulls.iter().zip(design.combination.weights()) {
            combined_full += f * w;
        }
        let coh = |rho: &DensityMatrix| to_coherence(rho, basis);
        Ok(Self {
            spec,
            design,
            reference,
            fulls,
            combined_full,
            starts: [
                (Start::Actual, coh(&spec.initial_state)?),
                (Start::Estimated, coh(&spec.estimated_state)?),
            ],
        })
    }

    /// The schedule of `strategy`, designed from the estimated state.
    fn schedule(&self, strategy: Strategy, grid: Grid) -> CliResult<SwitchRecord> {
        let d = self.design;
        let x_hat = d.frame.coordinates(&self.starts[1].1)?;
        let mut prop = Propagator::new(d.drifts.clone())?;
        let run = match strategy {
            Strategy::NoSwitch => {
                let mut r = SwitchRecord::new();
                r.push(0.0, 0);
                return Ok(r);
            }
            Strategy::TimeBased => run_cyclic(&d.time_law, &mut prop, x_hat, grid)?,
            Strategy::Steepest => {
                let law = StateBasedLaw::steepest(d.lyapunov.clone(), self.spec.switch_interval)?;
                run_steepest(&law, &mut prop, x_hat, grid)?
            }
            Strategy::Suboptimal => {
                let law = StateBasedLaw::suboptimal(d.lyapunov.clone(), self.spec.rates.clone(), false)?;
                run_suboptimal(&law, &mut prop, x_hat, grid)?
            }
        };
        Ok(run.record)
    }

    fn run(&self, strategy: Strategy, grid: Grid) -> CliResult<[Series; 2]> {
        let record = self.schedule(strategy, grid)?;
        let family = match strategy {
            Strategy::NoSwitch => vec![self.combined_full.clone()],
            _ => self.fulls.clone(),
        };
        let mut prop = Propagator::new(family)?;
        let mut out = Vec::with_capacity(2);
        for (start, r0) in &self.starts {
            let n = self.design.basis.dim();
            let mut v0 = RealVector::zeros(n * n);
            v0[0] = (n as f64).sqrt().recip();
            v0.rows_mut(1, n * n - 1).copy_from(r0.components());
            let run = replay(&mut prop, v0, &record, grid)?;
            let mut series = Series {
                strategy,
                start: *start,
                lyapunov: Vec::with_capacity(run.states.len()),
                euclidean: Vec::with_capacity(run.states.len()),
                trace_distance: Vec::with_capacity(run.states.len()),
                active_index: run
                    .active
                    .iter()
                    .map(|&j| if strategy == Strategy::NoSwitch { 0 } else { j + 1 })
                    .collect(),
                min_eigenvalue: Vec::with_capacity(run.states.len()),
                switches: record.clone(),
            };
            for v in &run.states {
                self.measure(v, &mut series)?;
            }
            out.push(series);
        }
        let estimated = out.pop().expect("two starts");
        let actual = out.pop().expect("two starts");
        Ok([actual, estimated])
    }

    fn measure(&self, v: &RealVector, series: &mut Series) -> CliResult<()> {
        let n = self.design.basis.dim();
        let r = v.rows(1, n * n - 1).into_owned();
        let rho = coherence_to_matrix(r.as_slice(), &self.design.basis)?;
        let x = self.design.frame.coordinates(&CoherenceVector::new(n, r.clone())?)?;
        series.lyapunov.push(self.design.lyapunov.value(&x));
        let (euclidean, distance) = match &self.reference {
            Reference::State { rho: target, r: target_r } => {
                ((&r - target_r).norm(), half_trace_norm(&(&rho - target))?)
            }
            Reference::Subspace(pi) => (x.norm(), 1.0 - trace_product(pi, &rho).re),
        };
        series.euclidean.push(euclidean);
        series.trace_distance.push(distance);
        series.min_eigenvalue.push(linalg::eigvalsh(&rho)?[0]);
        Ok(())
    }
}
