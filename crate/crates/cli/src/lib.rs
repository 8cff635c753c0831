//! Scenario runner for switched Lindblad stabilization.
//!
//! Built-in scenarios live in [`scenario`]; [`design::design`] derives the
//! switching laws and [`comparison::run_comparison`] simulates the four
//! strategies (no switching, cyclic, steepest descent, suboptimal).

pub mod comparison;
pub mod design;
pub mod error;
pub mod io;
pub mod plot;
pub mod scenario;

pub use comparison::{run_comparison, run_comparison_with, Series, Start, Strategy, TrajectoryLog};
pub use design::{design, Design, Frame};
pub use error::{CliError, CliResult};
pub use scenario::{ScenarioSpec, Target};
