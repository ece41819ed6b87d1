//! Vector phase matching inside the crystal for down- and up-conversion,
//! plus refraction of internal directions into the laboratory frame.
//!
//! Geometry conventions: the inward surface normal is the z axis, the
//! optic axis lies in the φ = 0 meridian tilted by the cut angle, and the
//! pump is normally incident, so its wave vector runs along z. Frequency
//! matching `ω3 = ω1 − ω2` holds by construction; the solvers hunt for the
//! signal polar angle that closes the wave-vector triangle, with the
//! extraordinary index of the high-frequency wave evaluated at that wave's
//! own direction.

use serde::{Deserialize, Serialize};

use crate::dispersion::{wavevector_magnitude, Direction, DispersionModel};
use crate::error::{Error, Result};
use crate::solver::bracket_roots;

/// Scan bracket width for the signal polar angle, radians (0.1°).
const BRACKET_STEP: f64 = 0.1 * std::f64::consts::PI / 180.0;
/// Bisection tolerance on the normalized index-mismatch residual.
const RESIDUAL_TOL: f64 = 1e-10;
/// Signal polar scan range (0°, 89°).
const THETA_LO: f64 = 1e-4;
const THETA_HI: f64 = 89.0 * std::f64::consts::PI / 180.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarization {
    Ordinary,
    Extraordinary,
}

/// Crystal cut, depth and coupling scale together with its dispersion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrystalSetup {
    /// Angle between the optic axis and the inward surface normal, radians.
    pub cut_angle: f64,
    /// Crystal depth along z, µm.
    pub length_um: f64,
    /// Effective nonlinear coupling scale; β_r = coupling_scale · ω_r / n_r
    /// in the arbitrary-units system (κ = c = 1).
    pub coupling_scale: f64,
    pub model: DispersionModel,
}

impl CrystalSetup {
    pub fn new(cut_angle: f64, length_um: f64, coupling_scale: f64, model: DispersionModel) -> Self {
        Self {
            cut_angle,
            length_um,
            coupling_scale,
            model,
        }
    }
}

/// One participating wave: vacuum wavelength, polarization and internal
/// direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub lambda_um: f64,
    pub polarization: Polarization,
    pub direction: Direction,
}

/// A matched mode triple. The longitudinal residual is zero by
/// construction for solutions returned by the solvers; the external signal
/// angle is `None` when the signal is trapped by total internal reflection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseMatchSolution {
    pub pump: ModeSpec,
    pub vacuum_mode: ModeSpec,
    pub signal: ModeSpec,
    pub delta_longitudinal: f64,
    pub external_signal_angle: Option<f64>,
}

/// Fold an azimuth into the canonical half-range [0, π].
///
/// The configuration is mirror symmetric about the optic-axis meridian, so
/// every computation depends on the azimuth only through this fold. Folding
/// up front makes θ(φ) = θ(2π − φ) hold bit-exactly on symmetric grids.
pub fn fold_azimuth(phi: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let m = phi.rem_euclid(tau);
    if m > std::f64::consts::PI {
        tau - m
    } else {
        m
    }
}

/// Angle between a propagation direction and the optic axis.
pub fn optic_axis_angle(setup: &CrystalSetup, d: &Direction) -> f64 {
    psi_at(setup.cut_angle, d.theta, fold_azimuth(d.phi))
}

fn psi_at(cut: f64, theta: f64, phi_folded: f64) -> f64 {
    let c = cut.cos() * theta.cos() + cut.sin() * theta.sin() * phi_folded.cos();
    c.clamp(-1.0, 1.0).acos()
}

/// External polar exit angle through the planar face, or `None` when the
/// ray is trapped by total internal reflection. Azimuth is unchanged.
pub fn refract_exit(n_internal: f64, theta_internal: f64) -> Option<f64> {
    let s = n_internal * theta_internal.sin();
    if s.abs() > 1.0 {
        None
    } else {
        Some(s.asin())
    }
}

/// Index seen by a mode: ordinary waves are isotropic, extraordinary waves
/// sample the ellipsoid at their own direction.
pub fn mode_index(setup: &CrystalSetup, mode: &ModeSpec) -> Result<f64> {
    match mode.polarization {
        Polarization::Ordinary => setup.model.n_ordinary(mode.lambda_um),
        Polarization::Extraordinary => setup
            .model
            .n_extraordinary(mode.lambda_um, optic_axis_angle(setup, &mode.direction)),
    }
}

/// Longitudinal mismatch Δ = k1z − k2z − k3z in rad/µm for a mode triple,
/// transverse components assumed matched.
pub fn longitudinal_mismatch(setup: &CrystalSetup, triple: &[ModeSpec; 3]) -> Result<f64> {
    let mut kz = [0.0; 3];
    for (i, m) in triple.iter().enumerate() {
        let n = mode_index(setup, m)?;
        kz[i] = wavevector_magnitude(n, m.lambda_um)? * m.direction.theta.cos();
    }
    Ok(kz[0] - kz[1] - kz[2])
}

/// Normalized residual for the down-conversion cone: the idler closing the
/// triangle must land on its ordinary index surface. Units of refractive
/// index; zero at a matched signal angle.
pub fn spdc_residual(
    setup: &CrystalSetup,
    lambda_pump: f64,
    lambda_signal: f64,
    theta3: f64,
) -> Result<f64> {
    let lambda_idler = idler_wavelength(lambda_pump, lambda_signal)?;
    let n1 = setup
        .model
        .n_extraordinary(lambda_pump, setup.cut_angle)?;
    let u1 = n1 / lambda_pump;
    let u3 = setup.model.n_ordinary(lambda_signal)? / lambda_signal;
    let n2 = setup.model.n_ordinary(lambda_idler)?;
    // |k1 - k3| with k1 along z, in 2π-reduced units n/λ
    let mag = (u1 * u1 + u3 * u3 - 2.0 * u1 * u3 * theta3.cos()).sqrt();
    Ok(mag * lambda_idler - n2)
}

/// Normalized residual for the up-conversion arc: the summed vector
/// k1 = k2 + k3 must land on the extraordinary surface evaluated at its
/// own direction.
pub fn spuc_residual(
    setup: &CrystalSetup,
    lambda_pump_ir: f64,
    lambda_signal: f64,
    phi_folded: f64,
    theta3: f64,
) -> Result<f64> {
    let lambda_uv = uv_wavelength(lambda_pump_ir, lambda_signal);
    let u2 = setup.model.n_ordinary(lambda_pump_ir)? / lambda_pump_ir;
    let u3 = setup.model.n_ordinary(lambda_signal)? / lambda_signal;
    let (s3, c3) = theta3.sin_cos();
    let kt = u3 * s3;
    let kz = u2 + u3 * c3;
    let mag = (kt * kt + kz * kz).sqrt();
    let theta1 = kt.atan2(kz);
    let n1 = setup
        .model
        .n_extraordinary(lambda_uv, psi_at(setup.cut_angle, theta1, phi_folded))?;
    Ok(mag * lambda_uv - n1)
}

/// Idler wavelength from 1/λ2 = 1/λ1 − 1/λ3.
pub fn idler_wavelength(lambda_pump: f64, lambda_signal: f64) -> Result<f64> {
    let inv = 1.0 / lambda_pump - 1.0 / lambda_signal;
    if inv <= 0.0 {
        return Err(Error::Domain(format!(
            "signal wavelength {lambda_signal} um must exceed pump wavelength {lambda_pump} um"
        )));
    }
    Ok(1.0 / inv)
}

/// Up-converted (vacuum ultraviolet) wavelength from 1/λ1 = 1/λ2 + 1/λ3.
pub fn uv_wavelength(lambda_pump_ir: f64, lambda_signal: f64) -> f64 {
    1.0 / (1.0 / lambda_pump_ir + 1.0 / lambda_signal)
}

/// All signal cone angles for down conversion with a normally incident
/// extraordinary pump. The cone is azimuth independent; `phi_signal` only
/// orients the returned directions.
pub fn solve_spdc_cone(
    setup: &CrystalSetup,
    lambda_pump: f64,
    lambda_signal: f64,
    phi_signal: f64,
) -> Result<Vec<PhaseMatchSolution>> {
    let lambda_idler = idler_wavelength(lambda_pump, lambda_signal)?;
    setup.model.n_ordinary(lambda_idler)?; // idler must sit in the window
    let phi = fold_azimuth(phi_signal);
    let residual = |t: f64| spdc_residual(setup, lambda_pump, lambda_signal, t).ok();
    let roots = bracket_roots(residual, THETA_LO, THETA_HI, BRACKET_STEP, RESIDUAL_TOL);

    let n1 = setup.model.n_extraordinary(lambda_pump, setup.cut_angle)?;
    let n3 = setup.model.n_ordinary(lambda_signal)?;
    let u1 = n1 / lambda_pump;
    let u3 = n3 / lambda_signal;

    let mut out = Vec::with_capacity(roots.len());
    for theta3 in roots {
        // idler direction closes the triangle: transverse opposite the signal
        let kt = u3 * theta3.sin();
        let kz = u1 - u3 * theta3.cos();
        let theta2 = kt.atan2(kz);
        let pump = ModeSpec {
            lambda_um: lambda_pump,
            polarization: Polarization::Extraordinary,
            direction: Direction::new(0.0, 0.0),
        };
        let vacuum_mode = ModeSpec {
            lambda_um: lambda_idler,
            polarization: Polarization::Ordinary,
            direction: Direction::new(theta2, phi + std::f64::consts::PI),
        };
        let signal = ModeSpec {
            lambda_um: lambda_signal,
            polarization: Polarization::Ordinary,
            direction: Direction::new(theta3, phi),
        };
        out.push(PhaseMatchSolution {
            pump,
            vacuum_mode,
            signal,
            delta_longitudinal: 0.0,
            external_signal_angle: refract_exit(n3, theta3),
        });
    }
    Ok(out)
}

/// All signal angles for up conversion with a normally incident ordinary
/// infrared pump. The high-frequency vacuum mode is extraordinary and its
/// index is evaluated self-consistently at the direction of k2 + k3, so
/// the solution depends on azimuth.
pub fn solve_spuc_arc(
    setup: &CrystalSetup,
    lambda_pump_ir: f64,
    lambda_signal: f64,
    phi_signal: f64,
) -> Result<Vec<PhaseMatchSolution>> {
    let lambda_uv = uv_wavelength(lambda_pump_ir, lambda_signal);
    setup.model.n_ordinary(lambda_uv)?; // vacuum mode must sit in the window
    let phi = fold_azimuth(phi_signal);
    let residual = |t: f64| spuc_residual(setup, lambda_pump_ir, lambda_signal, phi, t).ok();
    let roots = bracket_roots(residual, THETA_LO, THETA_HI, BRACKET_STEP, RESIDUAL_TOL);

    let u2 = setup.model.n_ordinary(lambda_pump_ir)? / lambda_pump_ir;
    let n3 = setup.model.n_ordinary(lambda_signal)?;
    let u3 = n3 / lambda_signal;

    let mut out = Vec::with_capacity(roots.len());
    for theta3 in roots {
        let kt = u3 * theta3.sin();
        let kz = u2 + u3 * theta3.cos();
        let theta1 = kt.atan2(kz);
        let pump = ModeSpec {
            lambda_um: lambda_pump_ir,
            polarization: Polarization::Ordinary,
            direction: Direction::new(0.0, 0.0),
        };
        let vacuum_mode = ModeSpec {
            lambda_um: lambda_uv,
            polarization: Polarization::Extraordinary,
            direction: Direction::new(theta1, phi),
        };
        let signal = ModeSpec {
            lambda_um: lambda_signal,
            polarization: Polarization::Ordinary,
            direction: Direction::new(theta3, phi),
        };
        out.push(PhaseMatchSolution {
            pump,
            vacuum_mode,
            signal,
            delta_longitudinal: 0.0,
            external_signal_angle: refract_exit(n3, theta3),
        });
    }
    Ok(out)
}
