use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use geomphase::cli::{cmd_gauge_fuzz, cmd_phase, cmd_sweep, cmd_validate, Spacing, SweepConfig};
use geomphase::report::RunReport;
use geomphase::rotating::{Level, RotatingFieldParams};
use geomphase::GeomPhaseError;

#[derive(Parser)]
#[command(
    name = "geomphase",
    version,
    about = "Geometric-phase toolkit for driven two-level systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpacingArg {
    Log,
    Linear,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Plus,
    Minus,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Log => Spacing::Log,
            SpacingArg::Linear => Spacing::Linear,
        }
    }
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Plus => Level::Plus,
            LevelArg::Minus => Level::Minus,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the drive-to-field frequency ratio and emit a CSV of phases.
    Sweep {
        /// Field tilt angle in radians, inside [0, pi].
        #[arg(long, default_value_t = PI / 2.0)]
        theta: f64,
        /// Smallest frequency ratio (field magnitude is fixed to 1).
        #[arg(long, default_value_t = 1e-4)]
        eta_min: f64,
        /// Largest frequency ratio.
        #[arg(long, default_value_t = 1e4)]
        eta_max: f64,
        /// Number of sweep points, endpoints included.
        #[arg(long, default_value_t = 60)]
        n_points: usize,
        /// Spacing of the sweep points.
        #[arg(long, value_enum, default_value_t = SpacingArg::Log)]
        spacing: SpacingArg,
        /// Which dressed level the beta columns follow.
        #[arg(long, value_enum, default_value_t = LevelArg::Plus)]
        level: LevelArg,
        /// Integration steps per drive period.
        #[arg(long, default_value_t = 2000)]
        n_steps_per_period: usize,
        /// CSV destination; omitted means stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the run report as JSON to this path.
        #[arg(long)]
        json_report: Option<PathBuf>,
    },
    /// Cross-check the exact model against two independent integrators.
    Validate {
        /// Field magnitude.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Field tilt angle in radians, inside [0, pi].
        #[arg(long, default_value_t = PI / 3.0)]
        theta: f64,
        /// Drive angular frequency (nonzero).
        #[arg(long, default_value_t = 0.7)]
        omega0: f64,
        /// Integration steps over one period.
        #[arg(long, default_value_t = 4000)]
        n_steps: usize,
        /// Also write the run report as JSON to this path.
        #[arg(long)]
        json_report: Option<PathBuf>,
    },
    /// Rephase the frame with seeded random gauges and bound the movement
    /// of every extracted phase.
    GaugeFuzz {
        /// Base RNG seed; trial i uses seed + i.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random gauges to try.
        #[arg(long, default_value_t = 50)]
        n_trials: usize,
        /// Fourier modes per gauge angle.
        #[arg(long, default_value_t = 3)]
        n_modes: usize,
        /// Bound on each Fourier coefficient.
        #[arg(long, default_value_t = PI)]
        amplitude_bound: f64,
        /// Field magnitude.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Field tilt angle in radians, inside [0, pi].
        #[arg(long, default_value_t = PI / 2.0)]
        theta: f64,
        /// Drive angular frequency (nonzero).
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        /// Also write the run report as JSON to this path.
        #[arg(long)]
        json_report: Option<PathBuf>,
    },
    /// Evaluate all phase quantities at a single parameter point.
    Phase {
        /// Field magnitude.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Field tilt angle in radians, inside [0, pi].
        #[arg(long, default_value_t = PI / 2.0)]
        theta: f64,
        /// Drive angular frequency (nonzero).
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        /// Which dressed level to follow.
        #[arg(long, value_enum, default_value_t = LevelArg::Plus)]
        level: LevelArg,
        /// Integration steps over one period.
        #[arg(long, default_value_t = 2000)]
        n_steps: usize,
        /// Also write the run report as JSON to this path.
        #[arg(long)]
        json_report: Option<PathBuf>,
    },
}

fn finish(report: RunReport, json_report: Option<PathBuf>) -> Result<bool, GeomPhaseError> {
    print!("{report}");
    if let Some(path) = json_report {
        std::fs::write(path, report.to_json())?;
    }
    Ok(report.pass)
}

fn run() -> Result<bool, GeomPhaseError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep {
            theta,
            eta_min,
            eta_max,
            n_points,
            spacing,
            level,
            n_steps_per_period,
            output,
            json_report,
        } => {
            let config = SweepConfig {
                theta,
                eta_min,
                eta_max,
                n_points,
                spacing: spacing.into(),
                level: level.into(),
                n_steps_per_period,
                output_path: output,
            };
            finish(cmd_sweep(&config)?, json_report)
        }
        Command::Validate {
            b,
            theta,
            omega0,
            n_steps,
            json_report,
        } => {
            let params = RotatingFieldParams::new(b, theta, omega0)?;
            finish(cmd_validate(params, n_steps)?, json_report)
        }
        Command::GaugeFuzz {
            seed,
            n_trials,
            n_modes,
            amplitude_bound,
            b,
            theta,
            omega0,
            json_report,
        } => {
            let params = RotatingFieldParams::new(b, theta, omega0)?;
            finish(
                cmd_gauge_fuzz(params, seed, n_trials, n_modes, amplitude_bound)?,
                json_report,
            )
        }
        Command::Phase {
            b,
            theta,
            omega0,
            level,
            n_steps,
            json_report,
        } => {
            let params = RotatingFieldParams::new(b, theta, omega0)?;
            finish(cmd_phase(params, level.into(), n_steps)?, json_report)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e @ (GeomPhaseError::InvalidConfig(_) | GeomPhaseError::Io(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
