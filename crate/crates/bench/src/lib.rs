//! Benchmark fixtures.

use qswitch::{OperatorBasis, RealMatrix, Superoperator};
use qswitch_cli::ScenarioSpec;

/// Coherence-vector drift matrices of a scenario's generators.
pub fn drifts(spec: &ScenarioSpec) -> Vec<RealMatrix> {
    let basis = OperatorBasis::gell_mann(spec.dim()).expect("scenario dimension");
    spec.generators
        .iter()
        .map(|g| Superoperator::vectorize(g, &basis).expect("valid generator").a().clone())
        .collect()
}

/// Equal-weight average of `mats`.
pub fn average(mats: &[RealMatrix]) -> RealMatrix {
    let mut sum = RealMatrix::zeros(mats[0].nrows(), mats[0].ncols());
    for m in mats {
        sum += m;
    }
    sum / mats.len() as f64
}
