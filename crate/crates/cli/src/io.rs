//! Scenario files (JSON) and trajectory logs (CSV).
//!
//! Complex matrices are arrays of rows, each entry a `[re, im]` pair. A
//! scenario file looks like
//!
//! ```json
//! {
//!   "name": "bell",
//!   "generators": [{ "label": "h", "hamiltonian": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]], "noise_ops": [] }],
//!   "target": { "state": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]] },
//!   "weights": [1.0],
//!   "initial_state": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
//!   "estimated_state": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]],
//!   "horizon": 10.0, "step": 0.02, "switch_interval": 0.06, "rates": [1.0]
//! }
//! ```
//!
//! `target` is either `{"state": ρ̄}` or `{"subspace": Π}`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use qswitch::{ComplexMatrix, Complex64, DensityMatrix, LindbladGenerator};
use serde::{Deserialize, Serialize};

use crate::comparison::TrajectoryLog;
use crate::error::{CliError, CliResult};
use crate::scenario::{ScenarioSpec, Target};

type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    label: String,
    hamiltonian: JsonMatrix,
    noise_ops: Vec<JsonMatrix>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum TargetFile {
    State(JsonMatrix),
    Subspace(JsonMatrix),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    generators: Vec<GeneratorFile>,
    target: TargetFile,
    weights: Vec<f64>,
    initial_state: JsonMatrix,
    estimated_state: JsonMatrix,
    horizon: f64,
    step: f64,
    switch_interval: f64,
    rates: Vec<f64>,
}

fn to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn from_json(m: &JsonMatrix, field: &str) -> Result<ComplexMatrix, String> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if let Some(bad) = m.iter().position(|r| r.len() != cols) {
        return Err(format!("{field}: row {bad} has {} entries, expected {cols}", m[bad].len()));
    }
    if rows != cols || rows == 0 {
        return Err(format!("{field}: expected a non-empty square matrix, got {rows}x{cols}"));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| Complex64::new(m[i][j][0], m[i][j][1])))
}

fn state_from_json(m: &JsonMatrix, field: &str) -> Result<DensityMatrix, String> {
    DensityMatrix::new(from_json(m, field)?).map_err(|e| format!("{field}: {e}"))
}

impl From<&ScenarioSpec> for ScenarioFile {
    fn from(s: &ScenarioSpec) -> Self {
        Self {
            name: s.name.clone(),
            generators: s
                .generators
                .iter()
                .map(|g| GeneratorFile {
                    label: g.label().to_string(),
                    hamiltonian: to_json(g.hamiltonian()),
                    noise_ops: g.noise_ops().iter().map(to_json).collect(),
                })
                .collect(),
            target: match &s.target {
                Target::State(rho) => TargetFile::State(to_json(rho.matrix())),
                Target::Subspace(pi) => TargetFile::Subspace(to_json(pi)),
            },
            weights: s.weights.clone(),
            initial_state: to_json(s.initial_state.matrix()),
            estimated_state: to_json(s.estimated_state.matrix()),
            horizon: s.horizon,
            step: s.step,
            switch_interval: s.switch_interval,
            rates: s.rates.clone(),
        }
    }
}

impl TryFrom<ScenarioFile> for ScenarioSpec {
    type Error = String;

    fn try_from(f: ScenarioFile) -> Result<Self, String> {
        let generators = f
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let field = format!("generators[{k}]");
                let h = from_json(&g.hamiltonian, &format!("{field}.hamiltonian"))?;
                let ops = g
                    .noise_ops
                    .iter()
                    .enumerate()
                    .map(|(i, m)| from_json(m, &format!("{field}.noise_ops[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                LindbladGenerator::new(h, ops, g.label.clone()).map_err(|e| format!("{field}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let target = match &f.target {
            TargetFile::State(m) => Target::State(state_from_json(m, "target.state")?),
            TargetFile::Subspace(m) => {
                let pi = from_json(m, "target.subspace")?;
                qswitch::states::check_projector(&pi).map_err(|e| format!("target.subspace: {e}"))?;
                Target::Subspace(pi)
            }
        };
        let spec = ScenarioSpec {
            name: f.name,
            generators,
            target,
            weights: f.weights,
            initial_state: state_from_json(&f.initial_state, "initial_state")?,
            estimated_state: state_from_json(&f.estimated_state, "estimated_state")?,
            horizon: f.horizon,
            step: f.step,
            switch_interval: f.switch_interval,
            rates: f.rates,
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

/// Parses a scenario document; `origin` names the source in error messages.
pub fn scenario_from_json(text: &str, origin: &Path) -> CliResult<ScenarioSpec> {
    let parse_error = |message: String| CliError::Parse {
        path: origin.to_path_buf(),
        message,
    };
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(de)
        .map_err(|e| parse_error(format!("field '{}': {}", e.path(), e.inner())))?;
    ScenarioSpec::try_from(file).map_err(parse_error)
}

pub fn scenario_to_json(spec: &ScenarioSpec) -> String {
    serde_json::to_string_pretty(&ScenarioFile::from(spec)).expect("scenario serializes")
}

pub fn load_scenario(path: &Path) -> CliResult<ScenarioSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    scenario_from_json(&text, path)
}

pub fn save_scenario(spec: &ScenarioSpec, path: &Path) -> CliResult<()> {
    std::fs::write(path, scenario_to_json(spec) + "\n").map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub const CSV_HEADER: [&str; 6] = ["time", "strategy", "lyapunov", "euclidean", "trace_distance", "active_index"];

/// Writes one row per sample and series, grouped by series.
pub fn write_log<W: Write>(log: &TrajectoryLog, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for s in &log.series {
        let label = s.label();
        for (k, t) in log.times.iter().enumerate() {
            w.write_record([
                t.to_string(),
                label.clone(),
                s.lyapunov[k].to_string(),
                s.euclidean[k].to_string(),
                s.trace_distance[k].to_string(),
                s.active_index[k].to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn save_log(log: &TrajectoryLog, path: &Path) -> CliResult<()> {
    let io_error = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_error)?;
    write_log(log, BufWriter::new(file)).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => io_error(source),
        other => CliError::Invalid(format!("{other:?}")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_complex_entry_names_the_field() {
        let spec = crate::scenario::scenario_robustness_counterexample();
        let mut doc: serde_json::Value = serde_json::from_str(&scenario_to_json(&spec)).unwrap();
        doc["generators"][0]["hamiltonian"][0][0] = serde_json::json!([0.0]);
        let text = doc.to_string();
        let err = scenario_from_json(&text, Path::new("s.json")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("generators[0].hamiltonian[0][0]"), "{msg}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        let m: JsonMatrix = vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0]]];
        assert!(from_json(&m, "x").unwrap_err().contains("row 1"));
    }
}
