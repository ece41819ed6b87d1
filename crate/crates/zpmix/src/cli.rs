//! Command implementations and the table serialization formats.
//!
//! # CSV schema
//!
//! ```text
//! process,lambda_um,phi_deg,theta_int_deg,theta_ext_deg,cross_section,flag
//! ```
//!
//! Numeric cells carry 17 significant digits so files alone reproduce the
//! computed values exactly; angle cells are empty where undefined (no
//! matched direction, or trapped exit). `flag` is `matched`, `dark` or
//! `trapped`.
//!
//! # Exit codes
//!
//! 0 success, 2 configuration error, 3 no phase-match solution,
//! 4 output I/O error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::{expand_range, Config, OutputFormat};
use crate::dispersion::wavevector_magnitude;
use crate::error::{Error, Result};
use crate::phasematch::{mode_index, solve_spdc_cone, solve_spuc_arc, ModeSpec};
use crate::radiometry::{
    scan_rainbow, spuc_spdc_ratio, Process, RainbowRow, RainbowTable,
    RowFlag, ZpfSpectrum,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_SOLUTION: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Map an error to its process exit code.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Render a table in the fixed CSV schema.
pub fn table_to_csv(table: &RainbowTable) -> String {
    let mut out = String::from("process,lambda_um,phi_deg,theta_int_deg,theta_ext_deg,cross_section,flag\n");
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.process,
            fmt_f64(r.lambda_um),
            fmt_f64(r.phi_deg),
            fmt_opt(r.theta_int_deg),
            fmt_opt(r.theta_ext_deg),
            fmt_f64(r.cross_section),
            r.flag
        );
    }
    out
}

/// Parse the CSV schema back into a table.
pub fn table_from_csv(text: &str) -> Result<RainbowTable> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            continue; // header
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 7 {
            return Err(Error::Config(format!("csv line {}: expected 7 cells", i + 1)));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Config(format!("csv line {}: bad number `{s}`", i + 1)))
        };
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        rows.push(RainbowRow {
            process: match cells[0] {
                "spdc" => Process::Spdc,
                "spuc" => Process::Spuc,
                other => return Err(Error::Config(format!("csv line {}: bad process `{other}`", i + 1))),
            },
            lambda_um: num(cells[1])?,
            phi_deg: num(cells[2])?,
            theta_int_deg: opt(cells[3])?,
            theta_ext_deg: opt(cells[4])?,
            cross_section: num(cells[5])?,
            flag: match cells[6] {
                "matched" => RowFlag::Matched,
                "dark" => RowFlag::Dark,
                "trapped" => RowFlag::Trapped,
                other => return Err(Error::Config(format!("csv line {}: bad flag `{other}`", i + 1))),
            },
        });
    }
    Ok(RainbowTable { rows })
}

pub fn table_to_json(table: &RainbowTable) -> Result<String> {
    serde_json::to_string_pretty(table).map_err(|e| Error::Config(format!("json: {e}")))
}

pub fn table_from_json(text: &str) -> Result<RainbowTable> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("json: {e}")))
}

/// `match` subcommand: report every solution at one scan point.
pub fn cmd_match(
    cfg: &Config,
    process: Process,
    pump_um: f64,
    signal_um: f64,
    phi_deg: f64,
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let phi = phi_deg.to_radians();
    let solutions = match process {
        Process::Spdc => solve_spdc_cone(&cfg.setup, pump_um, signal_um, phi)?,
        Process::Spuc => solve_spuc_arc(&cfg.setup, pump_um, signal_um, phi)?,
    };
    writeln!(out, "process: {process}")?;
    writeln!(out, "pump: {pump_um} um, normally incident")?;
    writeln!(out, "signal: {signal_um} um at azimuth {phi_deg} deg")?;
    if solutions.is_empty() {
        writeln!(out, "no phase-match solution at this azimuth")?;
        return Ok(EXIT_NO_SOLUTION);
    }
    for (i, sol) in solutions.iter().enumerate() {
        let k = |m: &ModeSpec| -> Result<[f64; 3]> {
            let n = mode_index(&cfg.setup, m)?;
            let mag = wavevector_magnitude(n, m.lambda_um)?;
            let u = m.direction.unit();
            Ok([mag * u[0], mag * u[1], mag * u[2]])
        };
        let k1 = k(if process == Process::Spdc { &sol.pump } else { &sol.vacuum_mode })?;
        let k2 = k(if process == Process::Spdc { &sol.vacuum_mode } else { &sol.pump })?;
        let k3 = k(&sol.signal)?;
        let residual = ((k1[0] - k2[0] - k3[0]).powi(2)
            + (k1[1] - k2[1] - k3[1]).powi(2)
            + (k1[2] - k2[2] - k3[2]).powi(2))
        .sqrt();
        writeln!(out, "solution {}:", i + 1)?;
        writeln!(out, "  theta_int_deg = {:.6}", sol.signal.direction.theta.to_degrees())?;
        match sol.external_signal_angle {
            Some(e) => writeln!(out, "  theta_ext_deg = {:.6}", e.to_degrees())?,
            None => writeln!(out, "  theta_ext_deg = trapped (total internal reflection)")?,
        }
        writeln!(
            out,
            "  {} mode: {:.6} um, theta = {:.6} deg, azimuth = {:.6} deg",
            if process == Process::Spdc { "idler" } else { "vacuum" },
            sol.vacuum_mode.lambda_um,
            sol.vacuum_mode.direction.theta.to_degrees(),
            sol.vacuum_mode.direction.phi.to_degrees()
        )?;
        writeln!(out, "  |k1 - k2 - k3| = {residual:.3e} rad/um")?;
    }
    Ok(EXIT_OK)
}

/// `rainbow` subcommand: scan, write the table, print a per-wavelength
/// summary.
#[allow(clippy::too_many_arguments)]
pub fn cmd_rainbow(
    cfg: &Config,
    process: Process,
    pump_um: f64,
    lambda_range: (f64, f64, f64),
    phi_range_deg: (f64, f64, f64),
    format: OutputFormat,
    out_path: &Path,
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let zpf = ZpfSpectrum::default();
    let lambda_grid = expand_range(lambda_range);
    let phi_grid: Vec<f64> = expand_range(phi_range_deg)
        .into_iter()
        .map(f64::to_radians)
        .collect();
    let table = scan_rainbow(
        &cfg.setup,
        &zpf,
        process,
        pump_um,
        cfg.run.pump_intensity,
        &lambda_grid,
        &phi_grid,
    )?;
    let rendered = match format {
        OutputFormat::Csv => table_to_csv(&table),
        OutputFormat::Json => table_to_json(&table)?,
    };
    std::fs::write(out_path, rendered)?;

    writeln!(out, "wrote {} rows to {}", table.rows.len(), out_path.display())?;
    for &lam in &lambda_grid {
        let coverage = table.coverage_fraction(lam);
        let range = table.external_angle_range(lam);
        let peak = table.peak_azimuth(lam);
        match (range, peak) {
            (Some((lo, hi)), Some(p)) => writeln!(
                out,
                "lambda {lam:.4} um: theta_ext [{lo:.3}, {hi:.3}] deg, coverage {coverage:.4}, peak azimuth {p:.1} deg"
            )?,
            _ => writeln!(out, "lambda {lam:.4} um: dark at every azimuth")?,
        }
    }
    Ok(EXIT_OK)
}

/// `ratio` subcommand: up- over down-conversion cross sections at equal
/// pump intensity, against wavelength at the bright meridian and against
/// azimuth at one wavelength. Dark cells are rendered explicitly.
#[allow(clippy::too_many_arguments)]
pub fn cmd_ratio(
    cfg: &Config,
    pump_spuc_um: f64,
    pump_spdc_um: f64,
    signal_um: f64,
    lambda_range: (f64, f64, f64),
    phi_range_deg: (f64, f64, f64),
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let zpf = ZpfSpectrum::default();
    let i2 = cfg.run.pump_intensity;
    writeln!(
        out,
        "# spuc/spdc cross-section ratio, pumps {pump_spuc_um}/{pump_spdc_um} um at equal intensity"
    )?;
    writeln!(out, "# ratio vs lambda at phi = 180 deg")?;
    writeln!(out, "lambda_um,ratio")?;
    for lam in expand_range(lambda_range) {
        match spuc_spdc_ratio(&cfg.setup, &zpf, lam, std::f64::consts::PI, pump_spuc_um, pump_spdc_um, i2) {
            Ok(r) => writeln!(out, "{},{}", fmt_f64(lam), fmt_f64(r))?,
            Err(_) => writeln!(out, "{},dark", fmt_f64(lam))?,
        }
    }
    writeln!(out, "# ratio vs phi at lambda = {signal_um} um")?;
    writeln!(out, "phi_deg,ratio")?;
    for phi_deg in expand_range(phi_range_deg) {
        match spuc_spdc_ratio(&cfg.setup, &zpf, signal_um, phi_deg.to_radians(), pump_spuc_um, pump_spdc_um, i2) {
            Ok(r) => writeln!(out, "{},{}", fmt_f64(phi_deg), fmt_f64(r))?,
            Err(Error::DarkRatio(_)) => writeln!(out, "{},dark", fmt_f64(phi_deg))?,
            Err(e) => return Err(e),
        }
    }
    Ok(EXIT_OK)
}

/// Resolve the configuration: explicit path, or the shipped default.
pub fn load_config(path: Option<&PathBuf>) -> Result<Config> {
    match path {
        Some(p) => crate::config::load(p),
        None => Ok(crate::config::default_config()),
    }
}
