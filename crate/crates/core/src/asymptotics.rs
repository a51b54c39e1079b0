//! Closed-form results for ideal-metal plates: the T = 0 law, the low
//! temperature expansions with and without the zero-frequency TE mode, and
//! the classical high-temperature limit.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{thermal_parameter, HBAR_C, K_B, ZETA3};

/// Default upper bound on x = 2ak_BT/(ħc) for the low-T formulas.
pub const DEFAULT_VALIDITY_THRESHOLD: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRegime {
    pub x: f64,
    /// False when x is too large for the low-temperature expansions.
    pub valid: bool,
}

impl AsymptoticRegime {
    pub fn new(gap: f64, temperature: f64, threshold: f64) -> Self {
        let x = thermal_parameter(gap, temperature);
        Self { x, valid: x < threshold }
    }
}

/// Pressure, free energy and entropy from a closed form, all per unit area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub pressure: f64,
    pub free_energy: f64,
    pub entropy: f64,
    pub regime: AsymptoticRegime,
}

/// −π²ħc/(240a⁴).
pub fn casimir_pressure_ideal_t0(gap: f64) -> f64 {
    -PI * PI * HBAR_C / (240.0 * gap.powi(4))
}

/// −π²ħc/(720a³).
pub fn casimir_free_energy_ideal_t0(gap: f64) -> f64 {
    -PI * PI * HBAR_C / (720.0 * gap.powi(3))
}

pub fn im_pressure(gap: f64, temperature: f64) -> f64 {
    let x = thermal_parameter(gap, temperature);
    casimir_pressure_ideal_t0(gap) * (1.0 + x.powi(4) / 3.0)
}

/// Includes the gap-independent x³ term.
pub fn im_free_energy(gap: f64, temperature: f64) -> f64 {
    let x = thermal_parameter(gap, temperature);
    casimir_free_energy_ideal_t0(gap) * (1.0 + 45.0 * ZETA3 / PI.powi(3) * x.powi(3) - x.powi(4))
}

pub fn im_entropy(gap: f64, temperature: f64) -> f64 {
    let theta = K_B * temperature / HBAR_C;
    3.0 * K_B * ZETA3 / (2.0 * PI) * theta * theta - 4.0 * K_B * PI * PI * gap / 45.0 * theta.powi(3)
}

/// Pressure correction from removing the zero-frequency TE mode.
pub fn mim_pressure_shift(gap: f64, temperature: f64) -> f64 {
    K_B * temperature * ZETA3 / (8.0 * PI * gap.powi(3))
}

pub fn mim_free_energy_shift(gap: f64, temperature: f64) -> f64 {
    K_B * temperature * ZETA3 / (16.0 * PI * gap * gap)
}

/// −k_B ζ(3)/(16πa²), the entropy left at T = 0 without the TE zero mode.
pub fn mim_entropy_defect(gap: f64) -> f64 {
    -K_B * ZETA3 / (16.0 * PI * gap * gap)
}

pub fn mim_pressure(gap: f64, temperature: f64) -> f64 {
    im_pressure(gap, temperature) + mim_pressure_shift(gap, temperature)
}

pub fn mim_free_energy(gap: f64, temperature: f64) -> f64 {
    im_free_energy(gap, temperature) + mim_free_energy_shift(gap, temperature)
}

pub fn mim_entropy(gap: f64, temperature: f64) -> f64 {
    im_entropy(gap, temperature) + mim_entropy_defect(gap)
}

pub fn im_low_t_with_threshold(gap: f64, temperature: f64, threshold: f64) -> ClosedForm {
    ClosedForm {
        pressure: im_pressure(gap, temperature),
        free_energy: im_free_energy(gap, temperature),
        entropy: im_entropy(gap, temperature),
        regime: AsymptoticRegime::new(gap, temperature, threshold),
    }
}

/// Low-temperature ideal-metal expansion. Outside its regime the result is
/// still returned, with `regime.valid == false`.
pub fn im_low_t(gap: f64, temperature: f64) -> ClosedForm {
    im_low_t_with_threshold(gap, temperature, DEFAULT_VALIDITY_THRESHOLD)
}

pub fn mim_low_t_with_threshold(gap: f64, temperature: f64, threshold: f64) -> ClosedForm {
    ClosedForm {
        pressure: mim_pressure(gap, temperature),
        free_energy: mim_free_energy(gap, temperature),
        entropy: mim_entropy(gap, temperature),
        regime: AsymptoticRegime::new(gap, temperature, threshold),
    }
}

/// Low-temperature expansion without the zero-frequency TE mode.
pub fn mim_low_t(gap: f64, temperature: f64) -> ClosedForm {
    mim_low_t_with_threshold(gap, temperature, DEFAULT_VALIDITY_THRESHOLD)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModePolicy {
    IM,
    MIM,
}

/// Pressure from the m = 0 term alone: −k_BTζ(3)/(4πa³) with both zero
/// modes, half that without the TE one.
pub fn classical_limit_pressure(gap: f64, temperature: f64, policy: ModePolicy) -> f64 {
    let im = -K_B * temperature * ZETA3 / (4.0 * PI * gap.powi(3));
    match policy {
        ModePolicy::IM => im,
        ModePolicy::MIM => 0.5 * im,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Temperature giving x = 2ak_BT/(ħc).
    fn temp_for_x(gap: f64, x: f64) -> f64 {
        x * HBAR_C / (2.0 * gap * K_B)
    }

    #[test]
    fn t0_pressure_values() {
        let p1 = casimir_pressure_ideal_t0(1e-6);
        assert!(rel(p1, -1.300e-3) < 1e-3);
        assert!(rel(casimir_pressure_ideal_t0(2e-6), p1 / 16.0) < 1e-14);
        assert!(rel(casimir_pressure_ideal_t0(1e-7), -13.00) < 1e-3);
    }

    #[test]
    fn im_at_zero_temperature() {
        let r = im_low_t(1e-6, 0.0);
        assert_eq!(r.pressure, casimir_pressure_ideal_t0(1e-6));
        assert!(rel(r.free_energy, -PI * PI * HBAR_C / 720e-18) < 1e-14);
        assert_eq!(r.entropy, 0.0);
        assert!(r.regime.valid);
    }

    #[test]
    fn im_correction_factor() {
        let a = 1e-6;
        let t = temp_for_x(a, 0.1);
        let r = im_low_t(a, t);
        let factor = r.pressure / casimir_pressure_ideal_t0(a) - 1.0;
        assert!(rel(factor, 1e-4 / 3.0) < 1e-9);
        assert!(rel(r.regime.x, 0.1) < 1e-12);
    }

    #[test]
    fn im_entropy_positive_and_vanishing() {
        let a = 1e-6;
        let mut last = f64::INFINITY;
        for x in [0.2, 0.1, 0.05, 0.01, 0.001] {
            let s = im_low_t(a, temp_for_x(a, x)).entropy;
            assert!(s > 0.0 && s < last);
            last = s;
        }
        // quadratic vanishing: S(T/2)/S(T) → 1/4
        let t = temp_for_x(a, 1e-4);
        assert!(rel(im_entropy(a, t / 2.0) / im_entropy(a, t), 0.25) < 1e-3);
    }

    #[test]
    fn mim_entropy_defect_value() {
        let s0 = mim_low_t(1e-6, 0.0).entropy;
        assert_eq!(s0, mim_entropy_defect(1e-6));
        // k_B ζ(3)/(16π·1e-12) by hand: 3.3017e-13
        assert!(rel(s0, -3.3017e-13) < 1e-3);
    }

    #[test]
    fn mim_im_differences() {
        for (a, t) in [(1e-6, 10.0), (5e-7, 100.0), (2e-6, 3.0)] {
            let d = mim_low_t(a, t).pressure - im_low_t(a, t).pressure;
            assert!(rel(d, K_B * t * ZETA3 / (8.0 * PI * a.powi(3))) < 1e-9);
        }
        assert_eq!(mim_low_t(1e-6, 0.0).pressure, im_low_t(1e-6, 0.0).pressure);
    }

    #[test]
    fn classical_limit_values() {
        let (a, t) = (7e-6, 300.0);
        let im = classical_limit_pressure(a, t, ModePolicy::IM);
        assert!(rel(im, -1.155e-6) < 1e-3);
        assert_eq!(classical_limit_pressure(a, t, ModePolicy::MIM), 0.5 * im);
        assert!(rel(classical_limit_pressure(a, 2.0 * t, ModePolicy::IM), 2.0 * im) < 1e-15);
    }

    #[test]
    fn regime_flag() {
        let a = 1e-6;
        assert!(!im_low_t(a, temp_for_x(a, 0.5)).regime.valid);
        assert!(im_low_t_with_threshold(a, temp_for_x(a, 0.5), 1.0).regime.valid);
    }

    #[test]
    fn closed_forms_are_thermodynamically_consistent() {
        // five-point stencils on the closed forms; gap-independent x³ term
        // drops out of −∂F/∂a
        let d5 = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
        for (a, t) in [(1e-6, 30.0), (5e-7, 100.0), (2e-6, 20.0)] {
            let ha = 1e-3 * a;
            let ht = 1e-3 * t;
            let p_im = -d5(&|g| im_free_energy(g, t), a, ha);
            assert!(rel(p_im, im_pressure(a, t)) < 1e-8, "{p_im} {}", im_pressure(a, t));
            let p_mim = -d5(&|g| mim_free_energy(g, t), a, ha);
            assert!(rel(p_mim, mim_pressure(a, t)) < 1e-8);
            let s_im = -d5(&|x| im_free_energy(a, x), t, ht);
            assert!(rel(s_im, im_entropy(a, t)) < 1e-8);
            let s_mim = -d5(&|x| mim_free_energy(a, x), t, ht);
            assert!(rel(s_mim, mim_entropy(a, t)) < 1e-8);
        }
        let _ = HBAR;
    }
}
