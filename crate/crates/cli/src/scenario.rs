//! Scenario descriptions and the built-in experiments.

use qswitch::states::{basis_ket, outer, pauli, tensor, tensor_all, DensityMatrix, Pauli};
use qswitch::{ComplexMatrix, Complex64, LindbladGenerator};

use crate::error::{CliError, CliResult};

/// What the switching law should stabilize.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    State(DensityMatrix),
    /// Orthogonal projector onto the target subspace.
    Subspace(ComplexMatrix),
}

#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub name: String,
    pub generators: Vec<LindbladGenerator>,
    pub target: Target,
    pub weights: Vec<f64>,
    /// The true initial state `ρ₀`.
    pub initial_state: DensityMatrix,
    /// The estimate `ρ̂₀` used to design state-based schedules.
    pub estimated_state: DensityMatrix,
    pub horizon: f64,
    pub step: f64,
    /// Minimal switching interval `ΔT`.
    pub switch_interval: f64,
    pub rates: Vec<f64>,
}

impl ScenarioSpec {
    pub fn dim(&self) -> usize {
        self.initial_state.dim()
    }

    /// Integer ratio `ΔT / step`.
    pub fn interval_steps(&self) -> usize {
        (self.switch_interval / self.step).round() as usize
    }

    pub fn validate(&self) -> CliResult<()> {
        let invalid = |msg: String| Err(CliError::Invalid(format!("scenario '{}': {msg}", self.name)));
        let n = self.dim();
        if self.generators.is_empty() {
            return invalid("no generators".into());
        }
        if let Some(g) = self.generators.iter().find(|g| g.dim() != n) {
            return invalid(format!("generator '{}' has dimension {} instead of {n}", g.label(), g.dim()));
        }
        if self.estimated_state.dim() != n {
            return invalid(format!("estimated state has dimension {}", self.estimated_state.dim()));
        }
        let target_dim = match &self.target {
            Target::State(rho) => rho.dim(),
            Target::Subspace(pi) => pi.nrows(),
        };
        if target_dim != n {
            return invalid(format!("target has dimension {target_dim} instead of {n}"));
        }
        if self.weights.len() != self.generators.len() || self.rates.len() != self.generators.len() {
            return invalid("weights and rates need one entry per generator".into());
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return invalid(format!("step must be positive, got {}", self.step));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return invalid(format!("horizon must be non-negative, got {}", self.horizon));
        }
        let ratio = self.switch_interval / self.step;
        if !(ratio >= 1.0 - 1e-9 && (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0)) {
            return invalid(format!(
                "switching interval {} is not a positive integer multiple of the step {}",
                self.switch_interval, self.step
            ));
        }
        Ok(())
    }
}

const SIM_STEP: f64 = 0.02;
const SIM_INTERVAL: f64 = 0.06;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

fn ket_outer(dim: usize, a: usize, b: usize) -> ComplexMatrix {
    outer(&basis_ket(dim, a), &basis_ket(dim, b))
}

/// `(|0…0⟩ + |1…1⟩)/√2` projector for `qubits` qubits.
fn cat_state(qubits: usize) -> DensityMatrix {
    let dim = 1 << qubits;
    DensityMatrix::pure(&(basis_ket(dim, 0) + basis_ket(dim, dim - 1))).expect("nonzero ket")
}

/// Bell-pair preparation with a Hamiltonian and a dissipative generator.
pub fn scenario_bell() -> ScenarioSpec {
    let (sx, sy, sz) = (pauli(Pauli::X), pauli(Pauli::Y), pauli(Pauli::Z));
    let id = identity(2);
    let h = tensor(&sy, &id) + tensor(&id, &sy);
    let l = tensor(&sz, &id) - tensor(&sy, &sx) * c(0.0, 1.0);
    ScenarioSpec {
        name: "bell".into(),
        generators: vec![
            LindbladGenerator::new(h, vec![], "hamiltonian").expect("Hermitian"),
            LindbladGenerator::dissipative(vec![l], "dissipator").expect("valid"),
        ],
        target: Target::State(cat_state(2)),
        weights: vec![0.5, 0.5],
        initial_state: DensityMatrix::basis_state(4, 0).expect("valid"),
        estimated_state: DensityMatrix::maximally_mixed(4).expect("valid"),
        horizon: 150.0,
        step: SIM_STEP,
        switch_interval: SIM_INTERVAL,
        rates: vec![1.0, 1.0],
    }
}

/// The three three-qubit GHZ generators: `H`, `L₁`, `L₂`.
pub fn ghz_generators() -> Vec<LindbladGenerator> {
    let sx = pauli(Pauli::X);
    let id = identity(2);
    let h = tensor_all(&[&sx, &id, &id]) - tensor_all(&[&id, &sx, &sx]);
    let l1 = tensor(&(ket_outer(4, 0, 1) + ket_outer(4, 3, 2)), &id);
    let l2 = tensor(&id, &(ket_outer(4, 0, 1) + ket_outer(4, 3, 2) * c(0.0, 1.0)));
    vec![
        LindbladGenerator::new(h, vec![], "hamiltonian").expect("Hermitian"),
        LindbladGenerator::dissipative(vec![l1], "l1").expect("valid"),
        LindbladGenerator::dissipative(vec![l2], "l2").expect("valid"),
    ]
}

/// GHZ-state preparation on three qubits.
pub fn scenario_ghz() -> ScenarioSpec {
    ScenarioSpec {
        name: "ghz".into(),
        generators: ghz_generators(),
        target: Target::State(cat_state(3)),
        weights: vec![1.0 / 3.0; 3],
        initial_state: DensityMatrix::basis_state(8, 0).expect("valid"),
        estimated_state: DensityMatrix::maximally_mixed(8).expect("valid"),
        horizon: 250.0,
        step: SIM_STEP,
        switch_interval: SIM_INTERVAL,
        rates: vec![1.0; 3],
    }
}

/// Projector onto `span{|000⟩, |111⟩}`.
pub fn ghz_code_projector() -> ComplexMatrix {
    ket_outer(8, 0, 0) + ket_outer(8, 7, 7)
}

/// Stabilization of `span{|000⟩, |111⟩}` with the two GHZ noise generators,
/// the only ones leaving the subspace invariant.
pub fn scenario_ghz_subspace() -> ScenarioSpec {
    let mut gens = ghz_generators();
    gens.remove(0);
    ScenarioSpec {
        name: "ghz-subspace".into(),
        generators: gens,
        target: Target::Subspace(ghz_code_projector()),
        weights: vec![0.5, 0.5],
        initial_state: DensityMatrix::basis_state(8, 2).expect("valid"),
        estimated_state: DensityMatrix::maximally_mixed(8).expect("valid"),
        horizon: 250.0,
        step: SIM_STEP,
        switch_interval: SIM_INTERVAL,
        rates: vec![1.0, 1.0],
    }
}

/// Three-level system whose rank-deficient estimate misleads state-based laws.
pub fn scenario_robustness_counterexample() -> ScenarioSpec {
    ScenarioSpec {
        name: "robustness".into(),
        generators: vec![
            LindbladGenerator::dissipative(vec![ket_outer(3, 0, 1)], "l1").expect("valid"),
            LindbladGenerator::dissipative(vec![ket_outer(3, 1, 2)], "l2").expect("valid"),
        ],
        target: Target::State(DensityMatrix::basis_state(3, 0).expect("valid")),
        weights: vec![0.5, 0.5],
        initial_state: DensityMatrix::basis_state(3, 2).expect("valid"),
        estimated_state: DensityMatrix::basis_state(3, 1).expect("valid"),
        horizon: 100.0,
        step: SIM_STEP,
        switch_interval: SIM_INTERVAL,
        rates: vec![1.0, 1.0],
    }
}

/// Qubit dephasing along `z` and `x`; both generators are unital and symmetric.
pub fn scenario_dephasing_pair() -> ScenarioSpec {
    ScenarioSpec {
        name: "dephasing".into(),
        generators: vec![
            LindbladGenerator::dissipative(vec![pauli(Pauli::Z)], "z").expect("valid"),
            LindbladGenerator::dissipative(vec![pauli(Pauli::X)], "x").expect("valid"),
        ],
        target: Target::State(DensityMatrix::maximally_mixed(2).expect("valid")),
        weights: vec![0.5, 0.5],
        initial_state: DensityMatrix::basis_state(2, 0).expect("valid"),
        estimated_state: DensityMatrix::basis_state(2, 0).expect("valid"),
        horizon: 20.0,
        step: SIM_STEP,
        switch_interval: SIM_INTERVAL,
        rates: vec![1.0, 1.0],
    }
}

/// Built-in scenario by name.
pub fn builtin(name: &str) -> Option<ScenarioSpec> {
    match name {
        "bell" => Some(scenario_bell()),
        "ghz" => Some(scenario_ghz()),
        "ghz-subspace" => Some(scenario_ghz_subspace()),
        "robustness" => Some(scenario_robustness_counterexample()),
        "dephasing" => Some(scenario_dephasing_pair()),
        _ => None,
    }
}
