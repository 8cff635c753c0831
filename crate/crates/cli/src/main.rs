use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qswitch_cli::comparison::{Start, Strategy};
use qswitch_cli::io::{load_scenario, save_log, save_scenario};
use qswitch_cli::plot::{save_svg, Metric};
use qswitch_cli::scenario::{builtin, ScenarioSpec};
use qswitch_cli::{design, run_comparison_with, CliResult, Design, TrajectoryLog};

/// Design and simulate switching laws that stabilize quantum states.
#[derive(Parser)]
#[command(name = "qswitch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bell-pair preparation on two qubits.
    Bell(RunArgs),
    /// GHZ-state preparation on three qubits.
    Ghz(RunArgs),
    /// Three-level example with a misleading rank-deficient estimate.
    Robustness(RunArgs),
    /// Run a scenario file.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Print the design (weights, P, dwell bound, cycle certificate) of a
    /// scenario file or built-in scenario name.
    Design {
        scenario: String,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// Integration step.
    #[arg(long)]
    step: Option<f64>,
    /// Simulated time.
    #[arg(long)]
    horizon: Option<f64>,
    /// Minimal switching interval (a multiple of the step).
    #[arg(long)]
    dt: Option<f64>,
    /// Comma-separated suboptimal-law rates in (0, 1].
    #[arg(long, value_delimiter = ',')]
    rates: Option<Vec<f64>>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    overrides: Overrides,
    /// CSV trajectory log.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG plot of the trace distance.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the effective scenario as JSON.
    #[arg(long)]
    save_scenario: Option<PathBuf>,
}

impl Overrides {
    fn apply(&self, spec: &mut ScenarioSpec) {
        if let Some(step) = self.step {
            spec.step = step;
        }
        if let Some(h) = self.horizon {
            spec.horizon = h;
        }
        if let Some(dt) = self.dt {
            spec.switch_interval = dt;
        }
        if let Some(r) = &self.rates {
            spec.rates = r.clone();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Bell(args) => simulate(builtin("bell").expect("built-in"), args),
        Command::Ghz(args) => simulate(builtin("ghz").expect("built-in"), args),
        Command::Robustness(args) => simulate(builtin("robustness").expect("built-in"), args),
        Command::Run { scenario, args } => simulate(load_scenario(&scenario)?, args),
        Command::Design { scenario, overrides } => {
            let mut spec = resolve(&scenario)?;
            overrides.apply(&mut spec);
            let d = design(&spec)?;
            print_design(&spec, &d);
            Ok(())
        }
    }
}

fn resolve(name: &str) -> CliResult<ScenarioSpec> {
    let path = Path::new(name);
    match builtin(name) {
        Some(spec) if !path.exists() => Ok(spec),
        _ => load_scenario(path),
    }
}

fn simulate(mut spec: ScenarioSpec, args: RunArgs) -> CliResult<()> {
    args.overrides.apply(&mut spec);
    spec.validate()?;
    if let Some(path) = &args.save_scenario {
        save_scenario(&spec, path)?;
    }
    let d = design(&spec)?;
    if !d.certificate.certified {
        eprintln!(
            "warning: cycle period {} not certified (monodromy bound {:.6})",
            d.time_law.period(),
            d.certificate.radius_bound
        );
    }
    let log = run_comparison_with(&spec, &d)?;
    print_summary(&spec, &log);
    if let Some(path) = &args.out {
        save_log(&log, path)?;
    }
    if let Some(path) = &args.svg {
        save_svg(&log, Metric::TraceDistance, path)?;
    }
    Ok(())
}

fn fmt_time(t: Option<f64>) -> String {
    t.map_or_else(|| "-".into(), |t| format!("{t:.2}"))
}

fn print_summary(spec: &ScenarioSpec, log: &TrajectoryLog) {
    println!(
        "scenario {}: {} generators, dimension {}, horizon {}, step {}, interval {}",
        spec.name,
        spec.generators.len(),
        spec.dim(),
        spec.horizon,
        spec.step,
        spec.switch_interval
    );
    println!(
        "{:<22} {:>10} {:>14} {:>14} {:>9}",
        "series", "V<0.1V(0)", "D<1e-3 from", "final D", "switches"
    );
    for strategy in Strategy::ALL {
        for start in [Start::Actual, Start::Estimated] {
            let s = log.get(strategy, start);
            println!(
                "{:<22} {:>10} {:>14} {:>14.3e} {:>9}",
                s.label(),
                fmt_time(log.lyapunov_crossing(strategy, start, 0.1)),
                fmt_time(log.settling_time(strategy, start, 1e-3)),
                s.trace_distance.last().copied().unwrap_or(f64::NAN),
                s.switches.switch_count()
            );
        }
    }
}

fn print_design(spec: &ScenarioSpec, d: &Design) {
    println!("scenario {}", spec.name);
    println!("weights: {:?}", d.combination.weights());
    println!("design dimension: {}", d.drifts[0].nrows());
    println!(
        "P eigenvalues: [{:.6}, {:.6}]",
        d.lyapunov.p_min_eigenvalue(),
        d.lyapunov.p_max_eigenvalue()
    );
    if d.lyapunov.p().nrows() <= 16 {
        println!("P = {:.6}", d.lyapunov.p());
    }
    println!("dwell-time bound (rates {:?}): {:.6}", spec.rates, d.dwell_bound);
    println!(
        "cycle period {}: certified = {}, bound ‖M^{}‖^(1/{}) = {:.9}",
        d.time_law.period(),
        d.certificate.certified,
        d.certificate.power,
        d.certificate.power,
        d.certificate.radius_bound
    );
}

