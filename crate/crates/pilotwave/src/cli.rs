use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Initial, Layout, RunConfig, TrajectoryRequest};
use crate::error::{CliError, CliResult, Exit};
use crate::output::Format;
use crate::suite::{CheckSettings, Suite};

/// Environment variable holding the worker thread count. It changes speed
/// only; outputs are identical for any value.
pub const THREADS_ENV: &str = "PILOTWAVE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "pilotwave", version, about = "Relativistic pilot-wave trajectories and invariant checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum integration step in s.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub step: f64,
    /// Output format (CSV by default, JSON for `check`).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout if absent); a directory for `--layout per-file`.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a packet (and box) and print its derived quantities.
    Validate {
        packet: PathBuf,
        #[arg(long = "box")]
        box_path: Option<PathBuf>,
    },
    /// Integrate trajectories from listed or sampled initial configurations.
    Trajectories {
        packet: PathBuf,
        /// Number of trajectories.
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Initial configurations in the ensemble CSV layout.
        #[arg(long, conflicts_with = "box_path")]
        initial: Option<PathBuf>,
        /// Sample initial configurations from |psi|^2 in this box.
        #[arg(long = "box")]
        box_path: Option<PathBuf>,
        #[arg(long, num_args = 2, value_names = ["S0", "S1"], allow_negative_numbers = true, default_values_t = [0.0, 1.0])]
        s_span: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Layout::Long)]
        layout: Layout,
        /// Write every N-th step (the final state is always written).
        #[arg(long, default_value_t = 1)]
        every: usize,
        /// Halt trajectories that leave the sampling box.
        #[arg(long, requires = "box_path")]
        confine: bool,
    },
    /// Sample configurations from |psi|^2 restricted to a box.
    Ensemble {
        packet: PathBuf,
        #[arg(long = "box")]
        box_path: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Run invariant checks and write a report; exit 1 if any fails.
    Check {
        packet: PathBuf,
        #[arg(long = "box")]
        box_path: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Random configurations for the finite-difference checks.
        #[arg(long, default_value_t = 100)]
        configurations: usize,
        /// Ensemble size for the equivariance check.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Flow parameter for the equivariance check.
        #[arg(long, default_value_t = 0.5)]
        delta_s: f64,
        /// Boost rapidity for the covariance check.
        #[arg(long, default_value_t = 0.5)]
        rapidity: f64,
        #[arg(long, num_args = 2, value_names = ["S0", "S1"], allow_negative_numbers = true, default_values_t = [0.0, 5.0])]
        s_span: Vec<f64>,
    },
    /// Tabulate the finite-time transition rate and its integral.
    Rate {
        /// Interaction time T.
        #[arg(long = "time", short = 'T')]
        cutoff: f64,
        /// Half width of the energy window.
        #[arg(long)]
        halfwidth: f64,
        /// Grid points (odd counts include 0).
        #[arg(long, default_value_t = 2001)]
        points: usize,
    },
}

impl Cli {
    pub fn run(&self) -> CliResult<Exit> {
        let cfg = RunConfig {
            seed: self.global.seed,
            step: self.global.step,
            format: self.global.format,
            output: self.global.output.clone(),
        };
        match &self.command {
            Command::Validate { packet, box_path } => commands::validate(&cfg, packet, box_path.as_deref()),
            Command::Trajectories {
                packet,
                count,
                initial,
                box_path,
                s_span,
                layout,
                every,
                confine,
            } => {
                let initial = match (initial, box_path) {
                    (Some(p), _) => Initial::File(p),
                    (None, Some(b)) => Initial::Sampled { box_path: b },
                    (None, None) => return Err(CliError::parse("trajectories needs --initial FILE or --box FILE")),
                };
                commands::trajectories(
                    &cfg,
                    &TrajectoryRequest {
                        packet_path: packet,
                        initial,
                        count: *count,
                        s_span: (s_span[0], s_span[1]),
                        layout: *layout,
                        every: *every,
                        confine: if *confine { box_path.as_deref() } else { None },
                    },
                )
            }
            Command::Ensemble { packet, box_path, count } => commands::ensemble(&cfg, packet, box_path, *count),
            Command::Check {
                packet,
                box_path,
                suite,
                configurations,
                samples,
                delta_s,
                rapidity,
                s_span,
            } => commands::check(
                &cfg,
                packet,
                box_path,
                *suite,
                CheckSettings {
                    configurations: *configurations,
                    equivariance_samples: *samples,
                    delta_s: *delta_s,
                    rapidity: *rapidity,
                    s_span: (s_span[0], s_span[1]),
                    ..Default::default()
                },
            ),
            Command::Rate {
                cutoff,
                halfwidth,
                points,
            } => commands::rate(&cfg, *cutoff, *halfwidth, *points),
        }
    }
}

/// Sizes the global thread pool from [`THREADS_ENV`] if set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::parse(format!("{THREADS_ENV}: not a thread count: {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::parse(format!("{THREADS_ENV}: {e}")))
}
