//! Physical constants (CODATA 2018) and the eV ↔ rad/s conversion.
//!
//! Everything inside the crate works in SI units. Electron-volts are only
//! accepted at the edges (CLI flags, convenience constructors).

use crate::error::{Error, Result};

/// The set of constants every other module reads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light in vacuum, m/s.
    pub c: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// One electron-volt in joules.
    pub ev: f64,
    /// Riemann ζ(3).
    pub zeta3: f64,
}

/// The single shared instance.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    k_b: 1.380_649e-23,
    ev: 1.602_176_634e-19,
    zeta3: 1.202_056_903_159_594_2,
};

pub const HBAR: f64 = CONSTANTS.hbar;
pub const C: f64 = CONSTANTS.c;
pub const K_B: f64 = CONSTANTS.k_b;
pub const EV: f64 = CONSTANTS.ev;
pub const ZETA3: f64 = CONSTANTS.zeta3;

/// ħc in J·m.
pub const HBAR_C: f64 = HBAR * C;

/// Converts an energy in eV to the angular frequency E/ħ in rad/s.
pub fn ev_to_angular_frequency(energy_ev: f64) -> Result<f64> {
    if !(energy_ev >= 0.0) || !energy_ev.is_finite() {
        return Err(Error::Domain(format!("energy must be finite and non-negative, got {energy_ev} eV")));
    }
    Ok(energy_ev * EV / HBAR)
}

/// Inverse of [`ev_to_angular_frequency`].
pub fn angular_frequency_to_ev(omega: f64) -> Result<f64> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("angular frequency must be finite and non-negative, got {omega} rad/s")));
    }
    Ok(omega * HBAR / EV)
}

/// Dimensionless temperature-gap parameter x = 2 a k_B T / (ħc).
pub fn thermal_parameter(gap: f64, temperature: f64) -> f64 {
    2.0 * gap * K_B * temperature / HBAR_C
}
