//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::drivers::{run, RunOutput};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "pseudochiral",
    version,
    about = "Pseudo-chirality experiments on non-Hermitian models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-level dimer time evolution.
    Dimer(RunArgs),
    /// Lattice eigenvalues, mode pairing and symmetry checks.
    Spectrum(RunArgs),
    /// Bloch bands of the magnetic unit cell.
    Bands(RunArgs),
    /// Edge-band wave-packet evolution on the lattice.
    Wavepacket(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `output` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the symmetry report table.
    #[arg(long)]
    pub check_symmetries: bool,
}

impl Command {
    fn parts(&self) -> (ExperimentKind, &RunArgs) {
        match self {
            Command::Dimer(a) => (ExperimentKind::Dimer, a),
            Command::Spectrum(a) => (ExperimentKind::LatticeSpectrum, a),
            Command::Bands(a) => (ExperimentKind::Bands, a),
            Command::Wavepacket(a) => (ExperimentKind::Wavepacket, a),
        }
    }
}

/// Loads, checks and resolves the config for a subcommand.
pub fn prepare(kind: ExperimentKind, args: &RunArgs) -> CliResult<(ExperimentConfig, PathBuf)> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    match cfg.experiment {
        Some(k) if k != kind => {
            return Err(CliError::config(format!(
                "config is for experiment {}, not {}",
                k.name(),
                kind.name()
            )))
        }
        _ => cfg.experiment = Some(kind),
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    let out = cfg
        .output
        .clone()
        .ok_or_else(|| CliError::config("no output directory (use --out)"))?;
    Ok((cfg.resolve()?, out))
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let (kind, args) = cli.command.parts();
    let (cfg, out) = prepare(kind, args)?;
    let RunOutput {
        artifacts,
        symmetry,
    } = run(&cfg)?;
    artifacts.write_all(&out)?;
    if args.check_symmetries {
        let io = |source| CliError::Io {
            path: "<stdout>".into(),
            source,
        };
        writeln!(stdout, "{:<26} {:>12}  holds", "relation", "residual").map_err(io)?;
        for r in &symmetry {
            writeln!(
                stdout,
                "{:<26} {:>12.3e}  {}",
                r.kind.name(),
                r.residual,
                r.holds
            )
            .map_err(io)?;
        }
    }
    Ok(())
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 for
/// configuration or I/O errors, 2 for numerical failures.
pub fn run_cli<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
