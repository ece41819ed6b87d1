//! Linearized coupled-amplitude dynamics of a mode pair driven by an
//! undepleted pump, the closed-form intensity transfer, and a fixed-step
//! numerical integrator that serves as an independent oracle.
//!
//! Two couplings appear. Up conversion exchanges intensity between the
//! pair (passive transfer),
//!
//! ```text
//! dA1/dz =  i β1 A2  e^{ iΔz} A3
//! dA3/dz =  i β3 A2* e^{-iΔz} A1
//! ```
//!
//! while down conversion amplifies both modes through the conjugate
//! coupling (`A3*` drives `A1`). The closed forms below are the
//! second-order transfers for phase-uncorrelated seeds; both are
//! proportional to sinc²(½Δ′l).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mode coupling strengths, (amplitude·µm)⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingConstants {
    pub beta1: f64,
    pub beta3: f64,
}

/// State of one coupled pair: complex seed amplitudes, constant pump
/// intensity, longitudinal mismatch and crystal depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePairState {
    pub a1: Complex64,
    pub a3: Complex64,
    /// Pump intensity |A2|², held constant by the linearization.
    pub i2: f64,
    /// Longitudinal mismatch, rad/µm.
    pub delta: f64,
    /// Crystal depth, µm.
    pub length_um: f64,
}

/// Intensity changes of the pair over the crystal depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainResult {
    pub delta_i1: f64,
    pub delta_i3: f64,
    /// Effective mismatch √(Δ² + β1 I2 β3), rad/µm.
    pub delta_prime: f64,
}

/// sin(x)/x with a series fallback near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Effective mismatch Δ′ = √(Δ² + β1 I2 β3).
pub fn effective_mismatch(delta: f64, c: &CouplingConstants, i2: f64) -> f64 {
    (delta * delta + c.beta1 * i2 * c.beta3).sqrt()
}

/// Closed-form intensity transfer of the up-conversion pair:
///
/// ```text
/// I1(l) − I1(0) = β3 I2 l² [β3 I1(0) − β1 I3(0)] sinc²(½Δ′l)
/// I3(l) − I3(0) = β1 I2 l² [β1 I3(0) − β3 I1(0)] sinc²(½Δ′l)
/// ```
///
/// The exchange identity β1·ΔI1 + β3·ΔI3 = 0 holds exactly.
pub fn linearized_gain(state: &ModePairState, c: &CouplingConstants) -> GainResult {
    let i1 = state.a1.norm_sqr();
    let i3 = state.a3.norm_sqr();
    let l = state.length_um;
    let dp = effective_mismatch(state.delta, c, state.i2);
    let envelope = sinc(0.5 * dp * l).powi(2);
    let bracket = c.beta3 * i1 - c.beta1 * i3;
    GainResult {
        delta_i1: c.beta3 * state.i2 * l * l * bracket * envelope,
        delta_i3: c.beta1 * state.i2 * l * l * (-bracket) * envelope,
        delta_prime: dp,
    }
}

/// Closed-form intensity growth of the down-conversion pair (conjugate
/// coupling, undepleted pump in the same slot):
///
/// ```text
/// I1(l) − I1(0) = β1 I2 l² [β1 I3(0) + β3 I1(0)] sinc²(½Δ″l)
/// I3(l) − I3(0) = β3 I2 l² [β3 I1(0) + β1 I3(0)] sinc²(½Δ″l)
/// ```
///
/// with Δ″² = Δ² − β1 I2 β3; below Δ² the envelope continues as
/// (sinh y / y)². Both modes grow together: ΔI1/β1 = ΔI3/β3.
pub fn amplifier_gain(state: &ModePairState, c: &CouplingConstants) -> GainResult {
    let i1 = state.a1.norm_sqr();
    let i3 = state.a3.norm_sqr();
    let l = state.length_um;
    let radicand = state.delta * state.delta - c.beta1 * state.i2 * c.beta3;
    let envelope = if radicand >= 0.0 {
        sinc(0.5 * radicand.sqrt() * l).powi(2)
    } else {
        let y = 0.5 * (-radicand).sqrt() * l;
        if y < 1e-4 {
            let y2 = y * y;
            (1.0 + y2 / 6.0 + y2 * y2 / 120.0).powi(2)
        } else {
            (y.sinh() / y).powi(2)
        }
    };
    let bracket = c.beta1 * i3 + c.beta3 * i1;
    GainResult {
        delta_i1: c.beta1 * state.i2 * l * l * bracket * envelope,
        delta_i3: c.beta3 * state.i2 * l * l * bracket * envelope,
        delta_prime: radicand.abs().sqrt(),
    }
}

/// Right-hand side selector for the two coupling structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// Passive exchange: dA3/dz ∝ A1 (up conversion).
    Exchange,
    /// Conjugate amplification: dA3/dz ∝ A1* (down conversion).
    Conjugate,
}

/// Integrate the coupled pair from 0 to l with a classical fixed-step
/// fourth-order scheme and return the final amplitudes. The pump amplitude
/// is √I2, real positive.
pub fn ode_oracle(
    state: &ModePairState,
    c: &CouplingConstants,
    coupling: Coupling,
    steps: usize,
) -> Result<(Complex64, Complex64)> {
    if steps < 2 {
        return Err(Error::TooFewSteps(steps));
    }
    let a2 = Complex64::new(state.i2.sqrt(), 0.0);
    let h = state.length_um / steps as f64;
    let i = Complex64::I;
    let rhs = |z: f64, a1: Complex64, a3: Complex64| -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0, state.delta * z);
        match coupling {
            Coupling::Exchange => (
                i * c.beta1 * a2 * phase * a3,
                i * c.beta3 * a2.conj() * phase.conj() * a1,
            ),
            Coupling::Conjugate => (
                i * c.beta1 * a2 * phase * a3.conj(),
                i * c.beta3 * a2 * phase * a1.conj(),
            ),
        }
    };

    let mut a1 = state.a1;
    let mut a3 = state.a3;
    for n in 0..steps {
        let z = n as f64 * h;
        let (k1a, k1b) = rhs(z, a1, a3);
        let (k2a, k2b) = rhs(z + 0.5 * h, a1 + 0.5 * h * k1a, a3 + 0.5 * h * k1b);
        let (k3a, k3b) = rhs(z + 0.5 * h, a1 + 0.5 * h * k2a, a3 + 0.5 * h * k2b);
        let (k4a, k4b) = rhs(z + h, a1 + h * k3a, a3 + h * k3b);
        a1 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        a3 += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }
    Ok((a1, a3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn state(i1: f64, i3: f64, i2: f64, delta: f64, l: f64) -> ModePairState {
        ModePairState {
            a1: Complex64::new(i1.sqrt(), 0.0),
            a3: Complex64::new(i3.sqrt(), 0.0),
            i2,
            delta,
            length_um: l,
        }
    }

    #[test]
    fn sinc_examples() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(std::f64::consts::PI).abs() < 1e-15);
        // frozen: 2/π
        assert_relative_eq!(
            sinc(std::f64::consts::FRAC_PI_2),
            0.6366197723675813,
            epsilon = 1e-15
        );
    }

    #[test]
    fn sinc_series_matches_direct_at_crossover() {
        for x in [9.9e-5, 1.01e-4, 5e-5, -9.9e-5] {
            assert_relative_eq!(sinc(x), x.sin() / x, epsilon = 1e-15);
        }
    }

    #[test]
    fn effective_mismatch_examples() {
        let c = CouplingConstants { beta1: 2.0, beta3: 2.0 };
        assert_eq!(effective_mismatch(-3.0, &c, 0.0), 3.0);
        let c = CouplingConstants { beta1: 4.0, beta3: 1.0 };
        assert_eq!(effective_mismatch(0.0, &c, 1.0), 2.0);
        // 3-4-5 triangle
        let c = CouplingConstants { beta1: 4.0, beta3: 4.0 };
        assert_eq!(effective_mismatch(3.0, &c, 1.0), 5.0);
    }

    #[test]
    fn gain_zero_seeds_zero_signal() {
        let c = CouplingConstants { beta1: 0.7, beta3: 1.3 };
        let g = linearized_gain(&state(0.0, 0.0, 2.0, 0.4, 100.0), &c);
        assert_eq!(g.delta_i1, 0.0);
        assert_eq!(g.delta_i3, 0.0);
    }

    #[test]
    fn gain_balanced_seeds_cancel() {
        let c = CouplingConstants { beta1: 0.9, beta3: 0.9 };
        let g = linearized_gain(&state(0.5, 0.5, 2.0, 0.1, 50.0), &c);
        assert_eq!(g.delta_i1, 0.0);
        assert_eq!(g.delta_i3, 0.0);
    }

    #[test]
    fn gain_frozen_example() {
        // β1 = β3 = 1, I2 = 1, I1(0) = 1, I3(0) = 0, Δ = 0, l = 0.1:
        // ΔI1 = 0.01 sinc²(0.05) = 9.9916694439e-3
        let c = CouplingConstants { beta1: 1.0, beta3: 1.0 };
        let g = linearized_gain(&state(1.0, 0.0, 1.0, 0.0, 0.1), &c);
        assert_relative_eq!(g.delta_i1, 0.009991669443948468, epsilon = 1e-15);
        assert_relative_eq!(g.delta_i3, -0.009991669443948468, epsilon = 1e-15);
    }

    #[test]
    fn exchange_identity_randomized() {
        // β1 ΔI1 + β3 ΔI3 = 0 to machine precision
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let c = CouplingConstants {
                beta1: rng.gen_range(1e-4..10.0),
                beta3: rng.gen_range(1e-4..10.0),
            };
            let s = state(
                rng.gen_range(0.0..4.0),
                rng.gen_range(0.0..4.0),
                rng.gen_range(0.0..4.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(0.01..100.0),
            );
            let g = linearized_gain(&s, &c);
            let lhs = c.beta1 * g.delta_i1 + c.beta3 * g.delta_i3;
            let scale = (c.beta1 * g.delta_i1).abs().max(1e-300);
            assert!(lhs.abs() <= 1e-12 * scale, "identity violated: {lhs}");
        }
    }

    #[test]
    fn amplifier_manley_rowe() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10_000 {
            let c = CouplingConstants {
                beta1: rng.gen_range(1e-4..10.0),
                beta3: rng.gen_range(1e-4..10.0),
            };
            let s = state(
                rng.gen_range(0.0..4.0),
                rng.gen_range(0.0..4.0),
                rng.gen_range(0.0..4.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(0.01..10.0),
            );
            let g = amplifier_gain(&s, &c);
            // pair growth: ΔI1/β1 = ΔI3/β3, both non-negative
            assert!(g.delta_i1 >= 0.0 && g.delta_i3 >= 0.0);
            let lhs = g.delta_i1 * c.beta3 - g.delta_i3 * c.beta1;
            let scale = (g.delta_i1 * c.beta3).abs().max(1e-300);
            assert!(lhs.abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn mismatch_suppression_envelope() {
        // |ΔI3| at Δ′l = 20 sits below the 4/(Δ′l)² envelope
        let c = CouplingConstants { beta1: 1.0, beta3: 2.0 };
        let l = 10.0;
        let s = state(1.0, 0.25, 1e-6, 2.0, l); // Δ′·l ≈ 20
        let g = linearized_gain(&s, &c);
        let dp_l = g.delta_prime * l;
        assert!(dp_l >= 20.0 - 1e-6);
        let bound = c.beta1 * s.i2 * l * l
            * (c.beta1 * 0.25 - c.beta3 * 1.0).abs()
            * 4.0
            / (dp_l * dp_l);
        assert!(g.delta_i3.abs() <= bound);
        // and the envelope bound |ΔI3| ≤ β1 I2 l² |β1 I3 − β3 I1| holds everywhere
        for delta in [-8.0, -1.0, 0.0, 0.3, 4.0] {
            let s = state(1.0, 0.25, 1e-6, delta, l);
            let g = linearized_gain(&s, &c);
            let cap = c.beta1 * s.i2 * l * l * (c.beta1 * 0.25 - c.beta3 * 1.0).abs();
            assert!(g.delta_i3.abs() <= cap * (1.0 + 1e-12));
        }
    }

    #[test]
    fn oracle_decoupled_is_identity() {
        let c = CouplingConstants { beta1: 0.0, beta3: 0.0 };
        let s = state(1.3, 0.4, 2.0, 0.7, 25.0);
        let (a1, a3) = ode_oracle(&s, &c, Coupling::Exchange, 100).unwrap();
        assert_eq!(a1, s.a1);
        assert_eq!(a3, s.a3);
    }

    #[test]
    fn oracle_rejects_tiny_step_count() {
        let c = CouplingConstants { beta1: 1.0, beta3: 1.0 };
        let s = state(1.0, 0.0, 1.0, 0.0, 1.0);
        assert!(matches!(
            ode_oracle(&s, &c, Coupling::Exchange, 1),
            Err(Error::TooFewSteps(1))
        ));
    }

    #[test]
    fn oracle_agrees_with_closed_form_perturbatively() {
        // single-seed states, β1 = β3, β² I2 l² < 1e-3: |ΔI| matches the
        // closed form to better than 1e-2 relative
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..100 {
            let beta = rng.gen_range(1e-4..3e-3);
            let i2 = rng.gen_range(0.1..1.0);
            let l = rng.gen_range(1.0..10.0);
            assert!(beta * beta * i2 * l * l < 1e-3);
            let c = CouplingConstants { beta1: beta, beta3: beta };
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let amp = rng.gen_range(0.1..1.0f64);
            let mut s = state(0.0, 0.0, i2, rng.gen_range(-2.0..2.0), l);
            if k % 2 == 0 {
                s.a1 = Complex64::from_polar(amp.sqrt(), phase);
            } else {
                s.a3 = Complex64::from_polar(amp.sqrt(), phase);
            }
            let g = linearized_gain(&s, &c);
            let (a1, a3) = ode_oracle(&s, &c, Coupling::Exchange, 2000).unwrap();
            let di1 = a1.norm_sqr() - s.a1.norm_sqr();
            let di3 = a3.norm_sqr() - s.a3.norm_sqr();
            assert_relative_eq!(di1.abs(), g.delta_i1.abs(), max_relative = 1e-2);
            assert_relative_eq!(di3.abs(), g.delta_i3.abs(), max_relative = 1e-2);
        }
    }

    #[test]
    fn amplifier_oracle_agrees_perturbatively() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for k in 0..100 {
            let beta = rng.gen_range(1e-4..3e-3);
            let i2 = rng.gen_range(0.1..1.0);
            let l = rng.gen_range(1.0..10.0);
            let c = CouplingConstants { beta1: beta, beta3: beta };
            let mut s = state(0.0, 0.0, i2, rng.gen_range(-2.0..2.0), l);
            let amp = rng.gen_range(0.1..1.0f64);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            if k % 2 == 0 {
                s.a1 = Complex64::from_polar(amp.sqrt(), phase);
            } else {
                s.a3 = Complex64::from_polar(amp.sqrt(), phase);
            }
            let g = amplifier_gain(&s, &c);
            let (a1, a3) = ode_oracle(&s, &c, Coupling::Conjugate, 2000).unwrap();
            let di1 = a1.norm_sqr() - s.a1.norm_sqr();
            let di3 = a3.norm_sqr() - s.a3.norm_sqr();
            assert_relative_eq!(di1.abs(), g.delta_i1.abs(), max_relative = 1e-2);
            assert_relative_eq!(di3.abs(), g.delta_i3.abs(), max_relative = 1e-2);
        }
    }

    #[test]
    fn oracle_step_halving_fourth_order() {
        // Richardson: the self-error contracts by ≈ 2⁴ per halving
        let c = CouplingConstants { beta1: 0.05, beta3: 0.08 };
        let s = ModePairState {
            a1: Complex64::new(0.8, 0.3),
            a3: Complex64::new(0.1, -0.2),
            i2: 2.0,
            delta: 0.9,
            length_um: 20.0,
        };
        let run = |steps: usize| ode_oracle(&s, &c, Coupling::Exchange, steps).unwrap();
        let (a1a, a3a) = run(200);
        let (a1b, a3b) = run(400);
        let (a1c, a3c) = run(800);
        let e1 = ((a1a - a1b).norm_sqr() + (a3a - a3b).norm_sqr()).sqrt();
        let e2 = ((a1b - a1c).norm_sqr() + (a3b - a3c).norm_sqr()).sqrt();
        let ratio = e1 / e2;
        assert!((12.0..=20.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn oracle_conserves_exchange_invariant() {
        // the passive pair conserves β3 I1 + β1 I3 along z
        let c = CouplingConstants { beta1: 0.4, beta3: 0.9 };
        let s = ModePairState {
            a1: Complex64::new(0.6, 0.1),
            a3: Complex64::new(-0.3, 0.5),
            i2: 1.5,
            delta: 0.0,
            length_um: 8.0,
        };
        let before = c.beta3 * s.a1.norm_sqr() + c.beta1 * s.a3.norm_sqr();
        let (a1, a3) = ode_oracle(&s, &c, Coupling::Exchange, 4000).unwrap();
        let after = c.beta3 * a1.norm_sqr() + c.beta1 * a3.norm_sqr();
        assert_relative_eq!(before, after, max_relative = 1e-9);
    }

    proptest! {
        #[test]
        fn sinc_squared_bounded(x in -1e3..1e3f64) {
            let s2 = sinc(x) * sinc(x);
            prop_assert!((0.0..=1.0 + 1e-15).contains(&s2));
        }

        #[test]
        fn exchange_identity_prop(
            b1 in 1e-3..5.0f64,
            b3 in 1e-3..5.0f64,
            i1 in 0.0..2.0f64,
            i3 in 0.0..2.0f64,
            i2 in 0.0..2.0f64,
            delta in -3.0..3.0f64,
            l in 0.01..50.0f64,
        ) {
            let c = CouplingConstants { beta1: b1, beta3: b3 };
            let g = linearized_gain(&state(i1, i3, i2, delta, l), &c);
            let lhs = c.beta1 * g.delta_i1 + c.beta3 * g.delta_i3;
            let scale = (c.beta1 * g.delta_i1).abs().max(1e-300);
            prop_assert!(lhs.abs() <= 1e-12 * scale);
        }
    }
}
