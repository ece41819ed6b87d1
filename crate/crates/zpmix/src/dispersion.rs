//! Refractive indices and wave-vector magnitudes for a uniaxial crystal.
//!
//! The principal indices follow a Sellmeier form
//!
//! ```text
//! n^2(λ) = b0 + b1 / (λ^2 − b2) − b3 λ^2        (λ in µm)
//! ```
//!
//! and the extraordinary index at an angle `ψ` between the wave vector and
//! the optic axis comes from the index ellipsoid,
//!
//! ```text
//! 1/n^2(λ, ψ) = cos²ψ / n_o²(λ) + sin²ψ / n_e²(λ).
//! ```
//!
//! All functions here are pure; equal inputs give bit-identical outputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of one Sellmeier branch. `b2` is the square of the pole
/// wavelength and must sit below the validity window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SellmeierSet {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl SellmeierSet {
    /// n² at vacuum wavelength `lambda_um`, without window checks.
    pub fn n_squared(&self, lambda_um: f64) -> f64 {
        let l2 = lambda_um * lambda_um;
        self.b0 + self.b1 / (l2 - self.b2) - self.b3 * l2
    }
}

/// Principal ordinary/extraordinary dispersion of a uniaxial crystal plus
/// the wavelength window over which the fit is declared valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionModel {
    pub ordinary: SellmeierSet,
    pub extraordinary: SellmeierSet,
    /// Validity window `[min, max]` in µm.
    pub window_um: (f64, f64),
}

/// Beta barium borate. The window is wide enough to cover the infrared
/// idlers that pair with a blue pump; the Sellmeier form stays smooth and
/// negative uniaxial throughout.
pub const BBO: DispersionModel = DispersionModel {
    ordinary: SellmeierSet {
        b0: 2.7405,
        b1: 0.0184,
        b2: 0.0179,
        b3: 0.0155,
    },
    extraordinary: SellmeierSet {
        b0: 2.3730,
        b1: 0.0128,
        b2: 0.0156,
        b3: 0.0044,
    },
    window_um: (0.22, 2.30),
};

impl DispersionModel {
    fn check_window(&self, lambda_um: f64) -> Result<()> {
        let (lo, hi) = self.window_um;
        if !(lambda_um >= lo && lambda_um <= hi) {
            return Err(Error::OutOfWindow {
                lambda_um,
                min_um: lo,
                max_um: hi,
            });
        }
        Ok(())
    }

    /// Ordinary index n_o(λ).
    pub fn n_ordinary(&self, lambda_um: f64) -> Result<f64> {
        self.check_window(lambda_um)?;
        Ok(self.ordinary.n_squared(lambda_um).sqrt())
    }

    /// Principal extraordinary index n_e(λ), i.e. the ψ = π/2 limit.
    pub fn n_extraordinary_principal(&self, lambda_um: f64) -> Result<f64> {
        self.check_window(lambda_um)?;
        Ok(self.extraordinary.n_squared(lambda_um).sqrt())
    }

    /// Extraordinary index for a wave whose vector makes angle `psi` with
    /// the optic axis.
    pub fn n_extraordinary(&self, lambda_um: f64, psi: f64) -> Result<f64> {
        self.check_window(lambda_um)?;
        let no2 = self.ordinary.n_squared(lambda_um);
        let ne2 = self.extraordinary.n_squared(lambda_um);
        let (s, c) = psi.sin_cos();
        // the ellipsoid degenerates exactly on the principal directions
        if s == 0.0 {
            return Ok(no2.sqrt());
        }
        if c == 0.0 {
            return Ok(ne2.sqrt());
        }
        let inv = c * c / no2 + s * s / ne2;
        Ok(1.0 / inv.sqrt())
    }
}

/// Propagation direction inside the crystal: polar angle `theta` from the
/// inward surface normal (z) and azimuth `phi` measured from the optic-axis
/// meridian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Cartesian unit vector, x axis in the φ = 0 meridian.
    pub fn unit(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// k = 2π n / λ in rad/µm.
pub fn wavevector_magnitude(n: f64, lambda_vac_um: f64) -> Result<f64> {
    if lambda_vac_um <= 0.0 {
        return Err(Error::NonPositiveWavelength(lambda_vac_um));
    }
    Ok(2.0 * std::f64::consts::PI * n / lambda_vac_um)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Frozen against a 40-digit evaluation of the shipped coefficient sets.
    const N_O_600: f64 = 1.6699417483412309;
    const N_O_351: f64 = 1.7068472592716306;
    const N_EP_351: f64 = 1.578421970782544;
    const N_E_351_37DEG: f64 = 1.6567944052262923;

    #[test]
    fn ordinary_index_at_600nm() {
        let n = BBO.n_ordinary(0.600).unwrap();
        assert_relative_eq!(n, N_O_600, max_relative = 1e-12);
    }

    #[test]
    fn closed_form_at_one_micron() {
        // n² at λ = 1 µm is b0 + b1/(1 − b2) − b3 exactly.
        let n = BBO.n_ordinary(1.0).unwrap();
        let expected = 2.7405 + 0.0184 / (1.0 - 0.0179) - 0.0155;
        assert_eq!(n * n, expected);
    }

    #[test]
    fn normal_dispersion_toward_uv() {
        // index rises monotonically toward short wavelengths
        let mut prev = f64::INFINITY;
        let mut lam = 0.25;
        while lam < 1.05 {
            let n = BBO.n_ordinary(lam).unwrap();
            assert!(n < prev, "n_o not decreasing at {lam}");
            prev = n;
            lam += 0.01;
        }
        assert!(BBO.n_ordinary(0.351).unwrap() > BBO.n_ordinary(0.600).unwrap());
    }

    #[test]
    fn extraordinary_on_axis_is_ordinary() {
        let lam = 0.5;
        assert_eq!(
            BBO.n_extraordinary(lam, 0.0).unwrap(),
            BBO.n_ordinary(lam).unwrap()
        );
    }

    #[test]
    fn extraordinary_perpendicular_is_principal() {
        let lam = 0.5;
        let n = BBO.n_extraordinary(lam, std::f64::consts::FRAC_PI_2).unwrap();
        assert_relative_eq!(
            n,
            BBO.n_extraordinary_principal(lam).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn extraordinary_at_cut_angle() {
        let n = BBO.n_extraordinary(0.351, 37f64.to_radians()).unwrap();
        assert_relative_eq!(n, N_E_351_37DEG, max_relative = 1e-12);
        assert!(n > N_EP_351 && n < N_O_351);
    }

    #[test]
    fn extraordinary_monotone_in_psi() {
        // dense sweep: strictly decreasing from n_o to n_e on [0, π/2]
        let lam = 0.351;
        let mut prev = f64::INFINITY;
        for i in 0..=1000 {
            let psi = i as f64 / 1000.0 * std::f64::consts::FRAC_PI_2;
            let n = BBO.n_extraordinary(lam, psi).unwrap();
            assert!(n <= prev);
            prev = n;
        }
        assert_relative_eq!(
            BBO.n_extraordinary(lam, 0.0).unwrap(),
            BBO.n_ordinary(lam).unwrap()
        );
    }

    #[test]
    fn negative_uniaxial_across_window() {
        let mut lam = BBO.window_um.0;
        while lam <= BBO.window_um.1 {
            let no = BBO.n_ordinary(lam).unwrap();
            let ne = BBO.n_extraordinary_principal(lam).unwrap();
            assert!(no > ne, "not negative uniaxial at {lam}");
            assert!(ne * ne > 1.0);
            lam += 0.005;
        }
    }

    #[test]
    fn out_of_window_is_domain_error() {
        let err = BBO.n_ordinary(0.1).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0.22") && msg.contains("2.3"), "{msg}");
        assert!(BBO.n_ordinary(3.0).is_err());
        assert!(BBO.n_extraordinary(0.1, 0.3).is_err());
    }

    #[test]
    fn wavevector_examples() {
        // n = 1, λ = 2π → k = 1
        let k = wavevector_magnitude(1.0, 2.0 * std::f64::consts::PI).unwrap();
        assert_relative_eq!(k, 1.0, max_relative = 1e-15);
        // frozen: 2π · 1.6680 / 0.6
        let k = wavevector_magnitude(1.6680, 0.600).unwrap();
        assert_relative_eq!(k, 17.46725515395925, max_relative = 1e-12);
        assert!(wavevector_magnitude(1.5, 0.0).is_err());
        assert!(wavevector_magnitude(1.5, -1.0).is_err());
    }

    #[test]
    fn purity_bit_identical() {
        let a = BBO.n_extraordinary(0.6328, 0.7).unwrap();
        let b = BBO.n_extraordinary(0.6328, 0.7).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    proptest! {
        #[test]
        fn doubling_n_doubles_k(n in 1.0..3.0f64, lam in 0.2..2.0f64) {
            let k1 = wavevector_magnitude(n, lam).unwrap();
            let k2 = wavevector_magnitude(2.0 * n, lam).unwrap();
            prop_assert!((k2 - 2.0 * k1).abs() <= 1e-12 * k2.abs());
        }

        #[test]
        fn ellipsoid_between_principals(lam in 0.25..2.2f64, psi in 0.0..std::f64::consts::PI) {
            let n = BBO.n_extraordinary(lam, psi).unwrap();
            let no = BBO.n_ordinary(lam).unwrap();
            let ne = BBO.n_extraordinary_principal(lam).unwrap();
            prop_assert!(n <= no + 1e-12 && n >= ne - 1e-12);
        }
    }
}
