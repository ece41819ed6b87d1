//! Zeropoint-field-seeded rainbow intensities: sums the per-mode-pair gain
//! over the mode continuum around each matched direction and assembles
//! scan tables.
//!
//! # Mode-sum convention
//!
//! At a fixed outgoing azimuth and wavelength, the mode pairs that feed a
//! detector form a one-parameter family: transverse wave-vector matching is
//! exact, the longitudinal mismatch Δ varies across the family, and the
//! seeded gain carries the sinc²(½Δ′l) envelope. The cross section
//! integrates the signal-channel gain over the family with the signal
//! polar angle as the measure,
//!
//! ```text
//! σ(λ3, φ) = Σ_centers ∫ ΔI3(Δ(θ3)) dθ3,   |Δ| ≤ MISMATCH_WINDOW / l,
//! ```
//!
//! evaluated by composite Simpson quadrature. For up conversion the family
//! is walked along the vacuum-mode polar angle (the signal angle follows
//! explicitly from transverse matching) and re-weighted to the dθ3 measure
//! with a finite-difference Jacobian.
//!
//! Seeds are ζ·ħω/2 per mode and couplings β_r = coupling_scale·ω_r/n_r in
//! the arbitrary-units system ζ = ħ = κ = c = 1. Down conversion uses the
//! conjugate (amplifying) pair transfer, up conversion the passive
//! exchange transfer; in both the reported observable is the above-seed
//! excess ΔI3 = I3(l) − I3(0).
//!
//! A scan row is flagged dark when its cross section falls below
//! `ARC_FLOOR_FRACTION` of the same wavelength's cross section at the
//! φ = 180° meridian (the brightest part of an up-conversion arc). That
//! relative floor is the declared arc-extent convention: down-conversion
//! rings are azimuth uniform and stay fully bright, up-conversion arcs
//! fade toward the optic-axis meridian and drop out.

use serde::{Deserialize, Serialize};

use crate::coupledmode::{amplifier_gain, linearized_gain, CouplingConstants, ModePairState};
use crate::error::{Error, Result};
use crate::phasematch::{
    fold_azimuth, solve_spdc_cone, solve_spuc_arc, uv_wavelength, CrystalSetup,
    PhaseMatchSolution,
};
use crate::solver::simpson;

use num_complex::Complex64;

/// Half-width of the mismatch window in units of 1/l: |Δ| ≤ 100/l.
pub const MISMATCH_WINDOW: f64 = 100.0;
/// Default Simpson point count across the window.
pub const QUAD_POINTS: usize = 2001;
/// Rows dimmer than this fraction of the φ = 180° cross section are dark.
pub const ARC_FLOOR_FRACTION: f64 = 0.25;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Zeropoint-field seed: every mode carries ζ·ħω/2 of intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZpfSpectrum {
    pub zeta: f64,
    pub hbar: f64,
}

impl Default for ZpfSpectrum {
    fn default() -> Self {
        Self { zeta: 1.0, hbar: 1.0 }
    }
}

impl ZpfSpectrum {
    /// Seed intensity of a mode with angular frequency `omega` (rad/µm,
    /// c = 1).
    pub fn seed_intensity(&self, omega: f64) -> f64 {
        0.5 * self.zeta * self.hbar * omega
    }

    /// Seed intensity of a mode with vacuum wavelength `lambda_um`.
    pub fn seed_for_wavelength(&self, lambda_um: f64) -> f64 {
        self.seed_intensity(TWO_PI / lambda_um)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    Spdc,
    Spuc,
}

impl std::fmt::Display for Process {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Process::Spdc => write!(f, "spdc"),
            Process::Spuc => write!(f, "spuc"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowFlag {
    Matched,
    Dark,
    Trapped,
}

impl std::fmt::Display for RowFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowFlag::Matched => write!(f, "matched"),
            RowFlag::Dark => write!(f, "dark"),
            RowFlag::Trapped => write!(f, "trapped"),
        }
    }
}

/// One scan row. Angle cells are empty when no matched direction exists
/// (dark geometry) and the external angle is empty for trapped rays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RainbowRow {
    pub process: Process,
    pub lambda_um: f64,
    pub phi_deg: f64,
    pub theta_int_deg: Option<f64>,
    pub theta_ext_deg: Option<f64>,
    pub cross_section: f64,
    pub flag: RowFlag,
}

/// Scan results, rows sorted by (process, λ, φ).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RainbowTable {
    pub rows: Vec<RainbowRow>,
}

/// Cross section of one scan point together with its brightness flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSection {
    pub value: f64,
    pub dark: bool,
}

fn couplings_for(setup: &CrystalSetup, lambda_vac: f64, n_vac: f64, lambda_sig: f64, n_sig: f64) -> CouplingConstants {
    CouplingConstants {
        beta1: setup.coupling_scale * (TWO_PI / lambda_vac) / n_vac,
        beta3: setup.coupling_scale * (TWO_PI / lambda_sig) / n_sig,
    }
}

fn pair_state(zpf: &ZpfSpectrum, lambda_vac: f64, lambda_sig: f64, i2: f64, delta: f64, l: f64) -> ModePairState {
    ModePairState {
        a1: Complex64::new(zpf.seed_for_wavelength(lambda_vac).sqrt(), 0.0),
        a3: Complex64::new(zpf.seed_for_wavelength(lambda_sig).sqrt(), 0.0),
        i2,
        delta,
        length_um: l,
    }
}

/// Down-conversion mismatch along the family at fixed azimuth: pump along
/// z, signal at `theta3`, idler closing the transverse components on its
/// ordinary surface. Returns Δ in rad/µm.
fn spdc_family_delta(setup: &CrystalSetup, lambda_pump: f64, lambda_idler: f64, lambda_signal: f64, theta3: f64) -> Option<f64> {
    let model = &setup.model;
    let k1z = TWO_PI * model.n_extraordinary(lambda_pump, setup.cut_angle).ok()? / lambda_pump;
    let k3 = TWO_PI * model.n_ordinary(lambda_signal).ok()? / lambda_signal;
    let (s3, c3) = theta3.sin_cos();
    let k3t = k3 * s3;
    let k2 = TWO_PI * model.n_ordinary(lambda_idler).ok()? / lambda_idler;
    let k2z2 = k2 * k2 - k3t * k3t;
    if k2z2 <= 0.0 {
        return None; // idler evanescent: no forward mode with this transverse
    }
    Some(k1z - k2z2.sqrt() - k3 * c3)
}

/// Up-conversion family parameterized by the vacuum (ultraviolet) polar
/// angle: returns (Δ, θ3, n_uv). Transverse matching fixes the signal
/// angle explicitly.
fn spuc_family(setup: &CrystalSetup, lambda_pump: f64, lambda_uv: f64, lambda_signal: f64, phi_folded: f64, theta1: f64) -> Option<(f64, f64, f64)> {
    let model = &setup.model;
    let psi = {
        let cut = setup.cut_angle;
        let c = cut.cos() * theta1.cos() + cut.sin() * theta1.sin() * phi_folded.cos();
        c.clamp(-1.0, 1.0).acos()
    };
    let n1 = model.n_extraordinary(lambda_uv, psi).ok()?;
    let k1 = TWO_PI * n1 / lambda_uv;
    let (s1, c1) = theta1.sin_cos();
    let k1t = k1 * s1;
    let n3 = model.n_ordinary(lambda_signal).ok()?;
    let k3 = TWO_PI * n3 / lambda_signal;
    let arg = k1t / k3;
    if arg.abs() >= 1.0 {
        return None;
    }
    let theta3 = arg.asin();
    let k2z = TWO_PI * model.n_ordinary(lambda_pump).ok()? / lambda_pump;
    let delta = k1 * c1 - k2z - k3 * theta3.cos();
    Some((delta, theta3, n1))
}

/// Expand outward from `center` until `delta` leaves the window, then
/// bisect the edge. Returns the parameter interval covering |Δ| ≤ cap.
fn window_edges<F: Fn(f64) -> Option<f64>>(delta: &F, center: f64, cap: f64, lo_limit: f64, hi_limit: f64) -> (f64, f64) {
    let eps = 1e-7;
    let d0 = delta(center).unwrap_or(0.0);
    let dp = delta(center + eps).unwrap_or(d0);
    let slope = ((dp - d0) / eps).abs().max(1e-9);
    let h = (cap / slope).max(1e-9);

    let edge = |dir: f64, limit: f64| -> f64 {
        let mut inside = center;
        let mut step = h * dir;
        for _ in 0..60 {
            let probe = inside + step;
            let clamped = if dir > 0.0 { probe.min(limit) } else { probe.max(limit) };
            match delta(clamped) {
                Some(d) if d.abs() < cap => {
                    inside = clamped;
                    if clamped == limit {
                        return limit;
                    }
                    step *= 1.5;
                }
                _ => {
                    // bisect between inside and the offending probe
                    let mut a = inside;
                    let mut b = clamped;
                    for _ in 0..60 {
                        let m = 0.5 * (a + b);
                        match delta(m) {
                            Some(d) if d.abs() < cap => a = m,
                            _ => b = m,
                        }
                    }
                    return 0.5 * (a + b);
                }
            }
        }
        inside
    };
    (edge(-1.0, lo_limit), edge(1.0, hi_limit))
}

/// Raw per-center cross sections at one scan point, without the darkness
/// comparison. `None` when no matched center exists.
#[allow(clippy::too_many_arguments)]
pub(crate) fn cross_section_raw(
    setup: &CrystalSetup,
    zpf: &ZpfSpectrum,
    process: Process,
    lambda_pump: f64,
    lambda_signal: f64,
    phi: f64,
    pump_intensity: f64,
    quad_points: usize,
) -> Result<Option<Vec<(PhaseMatchSolution, f64)>>> {
    let m = fold_azimuth(phi);
    let l = setup.length_um;
    let cap = MISMATCH_WINDOW / l;
    let theta_floor = 1e-6;
    let theta_ceil = std::f64::consts::FRAC_PI_2 - 1e-6;

    match process {
        Process::Spdc => {
            let solutions = solve_spdc_cone(setup, lambda_pump, lambda_signal, phi)?;
            if solutions.is_empty() {
                return Ok(None);
            }
            let lambda_idler = solutions[0].vacuum_mode.lambda_um;
            let n_id = setup.model.n_ordinary(lambda_idler)?;
            let n_sig = setup.model.n_ordinary(lambda_signal)?;
            let c = couplings_for(setup, lambda_idler, n_id, lambda_signal, n_sig);
            let delta_of = |t: f64| spdc_family_delta(setup, lambda_pump, lambda_idler, lambda_signal, t);
            let mut out = Vec::with_capacity(solutions.len());
            for sol in solutions {
                let center = sol.signal.direction.theta;
                let (lo, hi) = window_edges(&delta_of, center, cap, theta_floor, theta_ceil);
                let value = simpson(lo, hi, quad_points, |t| {
                    let Some(d) = delta_of(t) else { return 0.0 };
                    let s = pair_state(zpf, lambda_idler, lambda_signal, pump_intensity, d, l);
                    amplifier_gain(&s, &c).delta_i3
                });
                out.push((sol, value));
            }
            Ok(Some(out))
        }
        Process::Spuc => {
            let solutions = solve_spuc_arc(setup, lambda_pump, lambda_signal, phi)?;
            if solutions.is_empty() {
                return Ok(None);
            }
            let lambda_uv = uv_wavelength(lambda_pump, lambda_signal);
            let n_sig = setup.model.n_ordinary(lambda_signal)?;
            let family = |t1: f64| spuc_family(setup, lambda_pump, lambda_uv, lambda_signal, m, t1);
            let delta_of = |t1: f64| family(t1).map(|(d, _, _)| d);
            let mut out = Vec::with_capacity(solutions.len());
            for sol in solutions {
                let center = sol.vacuum_mode.direction.theta;
                let (lo, hi) = window_edges(&delta_of, center, cap, theta_floor, theta_ceil);
                // dθ3/dθ1 re-weights the vacuum-angle walk to the dθ3 measure
                let jac = |t1: f64| -> f64 {
                    let h = 1e-7;
                    match (family(t1 - h), family(t1 + h)) {
                        (Some((_, a, _)), Some((_, b, _))) => ((b - a) / (2.0 * h)).abs(),
                        _ => 0.0,
                    }
                };
                let value = simpson(lo, hi, quad_points, |t1| {
                    let Some((d, _t3, n1)) = family(t1) else { return 0.0 };
                    let c = couplings_for(setup, lambda_uv, n1, lambda_signal, n_sig);
                    let s = pair_state(zpf, lambda_uv, lambda_signal, pump_intensity, d, l);
                    linearized_gain(&s, &c).delta_i3 * jac(t1)
                });
                out.push((sol, value));
            }
            Ok(Some(out))
        }
    }
}

fn total(contributions: &Option<Vec<(PhaseMatchSolution, f64)>>) -> f64 {
    contributions
        .as_ref()
        .map(|v| v.iter().map(|(_, x)| x).sum())
        .unwrap_or(0.0)
}

/// Cross section at one (wavelength, azimuth) point. Dark when no matched
/// center exists, when the net transfer is nonpositive, or when the point
/// is dimmer than `ARC_FLOOR_FRACTION` of the φ = 180° reference.
pub fn mode_sum_cross_section(
    setup: &CrystalSetup,
    zpf: &ZpfSpectrum,
    process: Process,
    lambda_pump: f64,
    lambda_signal: f64,
    phi: f64,
    pump_intensity: f64,
) -> Result<CrossSection> {
    let raw = cross_section_raw(setup, zpf, process, lambda_pump, lambda_signal, phi, pump_intensity, QUAD_POINTS)?;
    let value = total(&raw);
    if raw.is_none() || value <= 0.0 {
        return Ok(CrossSection { value: 0.0, dark: true });
    }
    let reference = meridian_reference(setup, zpf, process, lambda_pump, lambda_signal, pump_intensity)?;
    Ok(CrossSection {
        value,
        dark: value < ARC_FLOOR_FRACTION * reference,
    })
}

/// Reference brightness for the arc criterion: the cross section at the
/// φ = 180° meridian (0 when that point itself is unmatched).
fn meridian_reference(
    setup: &CrystalSetup,
    zpf: &ZpfSpectrum,
    process: Process,
    lambda_pump: f64,
    lambda_signal: f64,
    pump_intensity: f64,
) -> Result<f64> {
    let raw = cross_section_raw(
        setup,
        zpf,
        process,
        lambda_pump,
        lambda_signal,
        std::f64::consts::PI,
        pump_intensity,
        QUAD_POINTS,
    )?;
    Ok(total(&raw).max(0.0))
}

/// Scan the rainbow over wavelength and azimuth grids. Per-point domain
/// failures become dark rows; the scan never aborts. Rows come out sorted
/// by (λ, φ) with one row per matched direction.
pub fn scan_rainbow(
    setup: &CrystalSetup,
    zpf: &ZpfSpectrum,
    process: Process,
    lambda_pump: f64,
    pump_intensity: f64,
    lambda_grid: &[f64],
    phi_grid: &[f64],
) -> Result<RainbowTable> {
    if lambda_grid.is_empty() || phi_grid.is_empty() {
        return Err(Error::Config("scan grids must be nonempty".into()));
    }
    let mut rows = Vec::new();
    for &lam in lambda_grid {
        let reference = meridian_reference(setup, zpf, process, lambda_pump, lam, pump_intensity)
            .unwrap_or(0.0);
        for &phi in phi_grid {
            let phi_deg = phi.to_degrees();
            match cross_section_raw(setup, zpf, process, lambda_pump, lam, phi, pump_intensity, QUAD_POINTS) {
                Ok(Some(contributions)) => {
                    let point_total: f64 = contributions.iter().map(|(_, x)| x).sum();
                    let dim = point_total <= 0.0 || point_total < ARC_FLOOR_FRACTION * reference;
                    for (sol, xs) in contributions {
                        let trapped = sol.external_signal_angle.is_none();
                        let flag = if trapped {
                            RowFlag::Trapped
                        } else if dim {
                            RowFlag::Dark
                        } else {
                            RowFlag::Matched
                        };
                        rows.push(RainbowRow {
                            process,
                            lambda_um: lam,
                            phi_deg,
                            theta_int_deg: Some(sol.signal.direction.theta.to_degrees()),
                            theta_ext_deg: sol.external_signal_angle.map(f64::to_degrees),
                            // a net-negative transfer is not a detectable rainbow
                            cross_section: xs.max(0.0),
                            flag,
                        });
                    }
                }
                Ok(None) | Err(_) => {
                    rows.push(RainbowRow {
                        process,
                        lambda_um: lam,
                        phi_deg,
                        theta_int_deg: None,
                        theta_ext_deg: None,
                        cross_section: 0.0,
                        flag: RowFlag::Dark,
                    });
                }
            }
        }
    }
    Ok(RainbowTable { rows })
}

impl RainbowTable {
    /// Fraction of azimuth grid points that are bright (matched) for the
    /// given wavelength.
    pub fn coverage_fraction(&self, lambda_um: f64) -> f64 {
        let rows: Vec<&RainbowRow> = self
            .rows
            .iter()
            .filter(|r| r.lambda_um == lambda_um)
            .collect();
        if rows.is_empty() {
            return 0.0;
        }
        let mut phis: Vec<f64> = rows.iter().map(|r| r.phi_deg).collect();
        phis.dedup();
        let bright: Vec<f64> = rows
            .iter()
            .filter(|r| r.flag == RowFlag::Matched)
            .map(|r| r.phi_deg)
            .collect();
        let mut bright_unique = bright;
        bright_unique.dedup();
        bright_unique.len() as f64 / phis.len() as f64
    }

    /// Azimuth (degrees) of the brightest row at the given wavelength.
    pub fn peak_azimuth(&self, lambda_um: f64) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.lambda_um == lambda_um)
            .max_by(|a, b| a.cross_section.total_cmp(&b.cross_section))
            .map(|r| r.phi_deg)
    }

    /// (min, max) external angle in degrees over bright rows of the given
    /// wavelength.
    pub fn external_angle_range(&self, lambda_um: f64) -> Option<(f64, f64)> {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for r in self
            .rows
            .iter()
            .filter(|r| r.lambda_um == lambda_um && r.flag == RowFlag::Matched)
        {
            if let Some(e) = r.theta_ext_deg {
                min = min.min(e);
                max = max.max(e);
            }
        }
        (min.is_finite() && max.is_finite()).then_some((min, max))
    }
}

/// Up- over down-conversion cross-section ratio at one point, equal pump
/// intensities. Errors when either side is dark.
pub fn spuc_spdc_ratio(
    setup: &CrystalSetup,
    zpf: &ZpfSpectrum,
    lambda_signal: f64,
    phi: f64,
    lambda_pump_spuc: f64,
    lambda_pump_spdc: f64,
    pump_intensity: f64,
) -> Result<f64> {
    let spuc = mode_sum_cross_section(setup, zpf, Process::Spuc, lambda_pump_spuc, lambda_signal, phi, pump_intensity)?;
    if spuc.dark {
        return Err(Error::DarkRatio("up-conversion"));
    }
    let spdc = mode_sum_cross_section(setup, zpf, Process::Spdc, lambda_pump_spdc, lambda_signal, phi, pump_intensity)?;
    if spdc.dark {
        return Err(Error::DarkRatio("down-conversion"));
    }
    Ok(spuc.value / spdc.value)
}
