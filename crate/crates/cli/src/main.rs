//! `ctnn`: dataset generation, training, stream runs and sweeps.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use ctnn_core::dataset::Modality;
use ctnn_core::CtnnError;

#[derive(Debug, Parser)]
#[command(
    name = "ctnn",
    version,
    about = "Corticothalamic neural network harness"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed; every other seed is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory; the run manifest is written at its root.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON run config. Flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Weight file to read (defaults to `<out>/weights.ctnn`).
    #[arg(long, global = true)]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render the training set as PGM frames plus a manifest.
    GenData {
        #[arg(long)]
        per_class: Option<u32>,
    },
    /// Train the auto-encoder; writes losses.csv and weights.ctnn.
    Train {
        #[arg(long)]
        epochs: Option<usize>,
        /// Train on a dataset directory from gen-data instead of regenerating it.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Gate a generated stream through a trained model; writes trace.csv.
    Run {
        #[arg(long)]
        threshold: Option<f64>,
        /// Fraction of same-class transitions.
        #[arg(long)]
        similar: Option<f64>,
        #[arg(long)]
        length: Option<usize>,
        /// Write four PGMs per step under `<out>/frames`.
        #[arg(long)]
        dump_frames: bool,
    },
    /// Efficiency or occlusion sweep over the configured grid.
    #[command(group(ArgGroup::new("kind").required(true).args(["efficiency", "occlusion"])))]
    Sweep {
        #[arg(long)]
        efficiency: bool,
        #[arg(long)]
        occlusion: bool,
    },
    /// Occlude one modality of a held-out frame and check the reconstruction's class.
    DemoOcclusion {
        #[arg(long, default_value_t = 4)]
        digit: u8,
        #[arg(long, default_value = "visual", value_parser = parse_modality)]
        modality: Modality,
        #[arg(long, default_value_t = 0.5)]
        fraction: f64,
    },
}

fn parse_modality(s: &str) -> Result<Modality, String> {
    s.parse().map_err(|e: CtnnError| e.to_string())
}

/// Exit codes.
pub mod code {
    pub const DEMO_FAILED: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const IO: u8 = 3;
    pub const NUMERICAL: u8 = 4;
}

/// Wraps errors that stem from the user's configuration or flags.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Raised when an occlusion demo reconstructs the wrong class.
#[derive(Debug)]
pub struct DemoFailed(pub String);

impl std::fmt::Display for DemoFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for DemoFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return code::CONFIG;
    }
    if err.downcast_ref::<DemoFailed>().is_some() {
        return code::DEMO_FAILED;
    }
    match err.downcast_ref::<CtnnError>() {
        Some(CtnnError::NonFiniteLoss { .. }) => code::NUMERICAL,
        Some(
            CtnnError::Io { .. }
            | CtnnError::Csv(_)
            | CtnnError::Format { .. }
            | CtnnError::BadMagic { .. }
            | CtnnError::Truncated { .. },
        ) => code::IO,
        Some(_) => code::CONFIG,
        None if err.chain().any(|e| e.is::<std::io::Error>()) => code::IO,
        None => code::CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
