//! Turning a scenario into switching laws.

use qswitch::linearization::{build_linearization, reduce_to_perp};
use qswitch::states::{to_coherence, OperatorBasis};
use qswitch::superop::common_fixed_point;
use qswitch::switching::{
    certify_epsilon, dwell_time_bound, MonodromyCertificate, TimeBasedLaw,
};
use qswitch::{
    CoherenceVector, ConvexCombination, Linearization, LyapunovData, RealMatrix, RealVector,
    SubspaceSplit, Superoperator,
};

use crate::error::{CliError, CliResult};
use crate::scenario::{ScenarioSpec, Target};

/// Coordinates in which the design is carried out.
#[derive(Debug, Clone)]
pub enum Frame {
    /// `x = r − v̄` around a target state.
    Translation(Linearization),
    /// The `⊥` block of the basis adapted to a target subspace.
    Subspace(SubspaceSplit),
}

impl Frame {
    pub fn coordinates(&self, r: &CoherenceVector) -> CliResult<RealVector> {
        Ok(match self {
            Frame::Translation(lin) => lin.to_translated(r)?,
            Frame::Subspace(split) => split.perp_coordinates(r),
        })
    }
}

/// Everything derived from a scenario before simulation.
#[derive(Debug, Clone)]
pub struct Design {
    pub basis: OperatorBasis,
    pub superoperators: Vec<Superoperator>,
    pub frame: Frame,
    /// Drift matrices of the design coordinates.
    pub drifts: Vec<RealMatrix>,
    pub combination: ConvexCombination,
    pub lyapunov: LyapunovData,
    pub time_law: TimeBasedLaw,
    pub certificate: MonodromyCertificate,
    pub dwell_bound: f64,
}

/// Vectorizes the generators, linearizes around the target and designs the
/// Lyapunov data and the cyclic law (period `m·ΔT`).
pub fn design(spec: &ScenarioSpec) -> CliResult<Design> {
    spec.validate()?;
    let fail = |e| CliError::design(&spec.name, e);
    let basis = OperatorBasis::gell_mann(spec.dim())?;
    let superoperators = spec
        .generators
        .iter()
        .map(|g| Superoperator::vectorize(g, &basis))
        .collect::<Result<Vec<_>, _>>()?;
    let (frame, drifts) = match &spec.target {
        Target::State(rho) => {
            common_fixed_point(&superoperators).map_err(fail)?;
            let target = to_coherence(rho, &basis)?;
            let lin = build_linearization(&superoperators, &target).map_err(fail)?;
            let drifts = lin.transformed().to_vec();
            (Frame::Translation(lin), drifts)
        }
        Target::Subspace(pi) => {
            let split = SubspaceSplit::new(pi, &basis)?;
            let drifts = reduce_to_perp(&superoperators, &split).map_err(fail)?;
            if drifts[0].is_empty() {
                return Err(CliError::Invalid(format!(
                    "scenario '{}': the target subspace is the whole space",
                    spec.name
                )));
            }
            (Frame::Subspace(split), drifts)
        }
    };
    // The Lyapunov design doubles as the Hurwitz check of the combination.
    let combination = ConvexCombination::new(&drifts, &spec.weights)?;
    let lyapunov = LyapunovData::design(&drifts, &combination).map_err(fail)?;
    let period = spec.generators.len() as f64 * spec.switch_interval;
    let time_law = TimeBasedLaw::new(&spec.weights, period)?;
    let certificate = certify_epsilon(&time_law, &drifts)?;
    let dwell_bound = dwell_time_bound(&lyapunov, &spec.rates)?;
    Ok(Design {
        basis,
        superoperators,
        frame,
        drifts,
        combination,
        lyapunov,
        time_law,
        certificate,
        dwell_bound,
    })
}
