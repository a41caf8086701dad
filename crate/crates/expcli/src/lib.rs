//! Experiment runner for the `pseudochiral` toolkit: JSON configs in, CSV
//! tables and a `report.json` out.

pub mod cli;
pub mod config;
pub mod drivers;
pub mod error;
pub mod table;

pub use cli::run_cli;
pub use config::ExperimentConfig;
pub use drivers::{run, RunOutput};
pub use error::{CliError, CliResult};
