//! Crystal and run configuration: a flat key-value text format with
//! `[crystal]` and `[run]` sections.
//!
//! ```text
//! # comment
//! [crystal]
//! ordinary_b0 = 2.7405         # Sellmeier n² = b0 + b1/(λ²−b2) − b3λ²
//! ordinary_b1 = 0.0184
//! ordinary_b2 = 0.0179
//! ordinary_b3 = 0.0155
//! extraordinary_b0 = 2.3730
//! extraordinary_b1 = 0.0128
//! extraordinary_b2 = 0.0156
//! extraordinary_b3 = 0.0044
//! window_min_um = 0.22
//! window_max_um = 2.30
//! cut_angle_deg = 37.0
//! length_mm = 5.0
//! coupling_scale = 1e-8
//!
//! [run]
//! process = spdc               # spdc | spuc
//! pump_um = 0.351
//! pump_intensity = 1.0
//! lambda_range = 0.6:0.8:0.1   # µm, min:max:step
//! phi_range = 0:355:5          # degrees, min:max:step
//! format = csv                 # csv | json
//! ```
//!
//! Angles in the file are degrees; everything is radians internally.

use std::path::Path;

use crate::dispersion::{DispersionModel, SellmeierSet};
use crate::error::{Error, Result};
use crate::phasematch::CrystalSetup;
use crate::radiometry::Process;

/// Parsed configuration: the crystal plus run defaults that CLI flags may
/// override.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub setup: CrystalSetup,
    pub run: RunDefaults,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunDefaults {
    pub process: Process,
    pub pump_um: f64,
    pub pump_intensity: f64,
    /// (min, max, step) in µm.
    pub lambda_range: (f64, f64, f64),
    /// (min, max, step) in degrees.
    pub phi_range: (f64, f64, f64),
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// The shipped default: beta barium borate cut at 37°, 5 mm deep, with the
/// two pump wavelengths of interest reachable by one flag.
pub fn default_config() -> Config {
    Config {
        setup: CrystalSetup {
            cut_angle: 37f64.to_radians(),
            length_um: 5000.0,
            coupling_scale: 1e-8,
            model: crate::dispersion::BBO,
        },
        run: RunDefaults {
            process: Process::Spdc,
            pump_um: 0.351,
            pump_intensity: 1.0,
            lambda_range: (0.6, 0.8, 0.1),
            phi_range: (0.0, 355.0, 5.0),
            format: OutputFormat::Csv,
        },
    }
}

/// Text of the shipped default configuration file.
pub const DEFAULT_CONFIG_TEXT: &str = include_str!("../../../configs/bbo_default.cfg");

pub fn load(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Config> {
    let mut section = String::new();
    let mut pairs: Vec<(String, String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            section = line[1..line.len() - 1].trim().to_string();
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got `{line}`",
                lineno + 1
            )));
        };
        pairs.push((section.clone(), k.trim().to_string(), v.trim().to_string()));
    }

    let get = |sec: &str, key: &str| -> Result<&str> {
        pairs
            .iter()
            .find(|(s, k, _)| s == sec && k == key)
            .map(|(_, _, v)| v.as_str())
            .ok_or_else(|| Error::Config(format!("missing key `{key}` in section [{sec}]")))
    };
    let num = |sec: &str, key: &str| -> Result<f64> {
        let v = get(sec, key)?;
        v.parse::<f64>()
            .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not a number")))
    };

    let ordinary = SellmeierSet {
        b0: num("crystal", "ordinary_b0")?,
        b1: num("crystal", "ordinary_b1")?,
        b2: num("crystal", "ordinary_b2")?,
        b3: num("crystal", "ordinary_b3")?,
    };
    let extraordinary = SellmeierSet {
        b0: num("crystal", "extraordinary_b0")?,
        b1: num("crystal", "extraordinary_b1")?,
        b2: num("crystal", "extraordinary_b2")?,
        b3: num("crystal", "extraordinary_b3")?,
    };
    let window = (num("crystal", "window_min_um")?, num("crystal", "window_max_um")?);
    let model = DispersionModel {
        ordinary,
        extraordinary,
        window_um: window,
    };
    validate_model(&model)?;

    let cut_angle = num("crystal", "cut_angle_deg")?.to_radians();
    if !(cut_angle > 0.0 && cut_angle < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Config(
            "key `cut_angle_deg`: cut angle must lie strictly between 0 and 90 degrees".into(),
        ));
    }
    let length_um = num("crystal", "length_mm")? * 1000.0;
    if length_um <= 0.0 {
        return Err(Error::Config("key `length_mm`: crystal length must be positive".into()));
    }
    let coupling_scale = num("crystal", "coupling_scale")?;
    if coupling_scale <= 0.0 {
        return Err(Error::Config("key `coupling_scale`: must be positive".into()));
    }

    let process = match get("run", "process")? {
        "spdc" => Process::Spdc,
        "spuc" => Process::Spuc,
        other => {
            return Err(Error::Config(format!(
                "key `process`: expected spdc or spuc, got `{other}`"
            )))
        }
    };
    let format = match get("run", "format")? {
        "csv" => OutputFormat::Csv,
        "json" => OutputFormat::Json,
        other => {
            return Err(Error::Config(format!(
                "key `format`: expected csv or json, got `{other}`"
            )))
        }
    };
    let run = RunDefaults {
        process,
        pump_um: num("run", "pump_um")?,
        pump_intensity: num("run", "pump_intensity")?,
        lambda_range: parse_range(get("run", "lambda_range")?, "lambda_range")?,
        phi_range: parse_range(get("run", "phi_range")?, "phi_range")?,
        format,
    };
    if run.pump_um < model.window_um.0 || run.pump_um > model.window_um.1 {
        return Err(Error::Config(format!(
            "key `pump_um`: {} um is outside the dispersion window [{}, {}] um",
            run.pump_um, model.window_um.0, model.window_um.1
        )));
    }

    Ok(Config {
        setup: CrystalSetup {
            cut_angle,
            length_um,
            coupling_scale,
            model,
        },
        run,
    })
}

fn validate_model(model: &DispersionModel) -> Result<()> {
    let (lo, hi) = model.window_um;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Config(
            "keys `window_min_um`/`window_max_um`: need 0 < min < max".into(),
        ));
    }
    for (name, set) in [("ordinary", &model.ordinary), ("extraordinary", &model.extraordinary)] {
        if set.b2 >= lo * lo {
            return Err(Error::Config(format!(
                "key `{name}_b2`: pole at {} um² is inside the validity window",
                set.b2
            )));
        }
    }
    // sanity sweep: indices defined and negative uniaxial across the window
    let mut lam = lo;
    while lam <= hi {
        let no2 = model.ordinary.n_squared(lam);
        let ne2 = model.extraordinary.n_squared(lam);
        if !(no2 > 1.0 && ne2 > 1.0) {
            return Err(Error::Config(format!(
                "Sellmeier sets give n² ≤ 1 at {lam:.3} um"
            )));
        }
        if no2 <= ne2 {
            return Err(Error::Config(format!(
                "crystal is not negative uniaxial at {lam:.3} um"
            )));
        }
        lam += (hi - lo) / 64.0;
    }
    Ok(())
}

/// Parse `MIN:MAX:STEP`.
pub fn parse_range(text: &str, key: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "key `{key}`: expected MIN:MAX:STEP, got `{text}`"
        )));
    }
    let mut vals = [0.0; 3];
    for (i, p) in parts.iter().enumerate() {
        vals[i] = p
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("key `{key}`: `{p}` is not a number")))?;
    }
    let (min, max, step) = (vals[0], vals[1], vals[2]);
    if step <= 0.0 {
        return Err(Error::Config(format!("key `{key}`: step must be positive")));
    }
    if max < min {
        return Err(Error::Config(format!("key `{key}`: max must be >= min")));
    }
    Ok((min, max, step))
}

/// Expand an inclusive (min, max, step) range into a grid.
pub fn expand_range(range: (f64, f64, f64)) -> Vec<f64> {
    let (min, max, step) = range;
    let n = ((max - min) / step + 0.5).floor() as usize;
    (0..=n).map(|i| min + i as f64 * step).filter(|v| *v <= max + 1e-9 * step).collect()
}
