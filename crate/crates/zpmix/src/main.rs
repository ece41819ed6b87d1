use std::path::PathBuf;

use clap::{Parser, Subcommand};

use zpmix::cli::{self, exit_code_for};
use zpmix::config::{parse_range, OutputFormat};
use zpmix::radiometry::Process;

#[derive(Parser)]
#[command(name = "zpmix", version, about = "Phase matching and zeropoint-field-seeded rainbows in a uniaxial nonlinear crystal")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ProcessArg {
    Spdc,
    Spuc,
}

impl From<ProcessArg> for Process {
    fn from(p: ProcessArg) -> Self {
        match p {
            ProcessArg::Spdc => Process::Spdc,
            ProcessArg::Spuc => Process::Spuc,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve the phase-matching problem at one (wavelength, azimuth) point
    Match {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        process: Option<ProcessArg>,
        /// Pump vacuum wavelength, µm
        #[arg(long)]
        pump_um: Option<f64>,
        /// Signal vacuum wavelength, µm
        #[arg(long)]
        signal_um: f64,
        /// Signal azimuth, degrees from the optic-axis meridian
        #[arg(long, default_value_t = 0.0)]
        phi_deg: f64,
    },
    /// Scan wavelength and azimuth grids and write a rainbow table
    Rainbow {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        process: Option<ProcessArg>,
        #[arg(long)]
        pump_um: Option<f64>,
        /// Signal grid MIN:MAX:STEP in µm
        #[arg(long)]
        lambda_range: Option<String>,
        /// Azimuth grid MIN:MAX:STEP in degrees
        #[arg(long)]
        phi_range: Option<String>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Output file path
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the up-/down-conversion cross-section ratio at equal pump intensity
    Ratio {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Up-conversion (infrared) pump wavelength, µm
        #[arg(long, default_value_t = 0.845)]
        pump_spuc_um: f64,
        /// Down-conversion (blue) pump wavelength, µm
        #[arg(long, default_value_t = 0.442)]
        pump_spdc_um: f64,
        /// Signal wavelength for the azimuth sweep, µm
        #[arg(long, default_value_t = 0.6)]
        signal_um: f64,
        #[arg(long)]
        lambda_range: Option<String>,
        #[arg(long)]
        phi_range: Option<String>,
    },
}

fn run() -> zpmix::Result<i32> {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Match {
            config,
            process,
            pump_um,
            signal_um,
            phi_deg,
        } => {
            let cfg = cli::load_config(config.as_ref())?;
            let process = process.map(Process::from).unwrap_or(cfg.run.process);
            let pump = pump_um.unwrap_or(cfg.run.pump_um);
            cli::cmd_match(&cfg, process, pump, signal_um, phi_deg, &mut out)
        }
        Command::Rainbow {
            config,
            process,
            pump_um,
            lambda_range,
            phi_range,
            format,
            out: out_path,
        } => {
            let cfg = cli::load_config(config.as_ref())?;
            let process = process.map(Process::from).unwrap_or(cfg.run.process);
            let pump = pump_um.unwrap_or(cfg.run.pump_um);
            let lrange = match lambda_range {
                Some(s) => parse_range(&s, "lambda-range")?,
                None => cfg.run.lambda_range,
            };
            let prange = match phi_range {
                Some(s) => parse_range(&s, "phi-range")?,
                None => cfg.run.phi_range,
            };
            let format = format.map(OutputFormat::from).unwrap_or(cfg.run.format);
            cli::cmd_rainbow(&cfg, process, pump, lrange, prange, format, &out_path, &mut out)
        }
        Command::Ratio {
            config,
            pump_spuc_um,
            pump_spdc_um,
            signal_um,
            lambda_range,
            phi_range,
        } => {
            let cfg = cli::load_config(config.as_ref())?;
            let lrange = match lambda_range {
                Some(s) => parse_range(&s, "lambda-range")?,
                None => cfg.run.lambda_range,
            };
            let prange = match phi_range {
                Some(s) => parse_range(&s, "phi-range")?,
                None => cfg.run.phi_range,
            };
            cli::cmd_ratio(&cfg, pump_spuc_um, pump_spdc_um, signal_um, lrange, prange, &mut out)
        }
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code_for(&e));
        }
    }
}
