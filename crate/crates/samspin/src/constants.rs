//! Physical constants (CODATA 2018) and frequency-unit helpers.
//!
//! All constants are frozen in source so that derived numbers are
//! reproducible bit-for-bit. Internally the crate works in SI units and
//! expresses energies and frequencies as angular frequency (rad/s); the
//! helpers below convert to Hz/MHz for display.

use std::f64::consts::TAU;

/// Bohr magneton, J/T.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;

/// Free-electron g-factor, dimensionless.
pub const FREE_ELECTRON_G: f64 = 2.002_319_304_36;

/// Planck constant, J·s (exact by SI definition).
pub const PLANCK_H: f64 = 6.626_070_15e-34;

/// Reduced Planck constant h/2π, J·s.
pub const REDUCED_PLANCK: f64 = PLANCK_H / TAU;

/// μ₀/4π, T·m/A.
pub const VACUUM_PERMEABILITY_OVER_4PI: f64 = 1.0e-7;

/// The fundamental constants used throughout the simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Bohr magneton, J/T.
    pub bohr_magneton: f64,
    /// Free-electron g-factor.
    pub free_electron_g: f64,
    /// Planck constant, J·s.
    pub planck_h: f64,
    /// h/2π, J·s.
    pub reduced_planck: f64,
    /// μ₀/4π, T·m/A.
    pub vacuum_permeability_over_4pi: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values.
    pub const CODATA_2018: Self = Self {
        bohr_magneton: BOHR_MAGNETON,
        free_electron_g: FREE_ELECTRON_G,
        planck_h: PLANCK_H,
        reduced_planck: REDUCED_PLANCK,
        vacuum_permeability_over_4pi: VACUUM_PERMEABILITY_OVER_4PI,
    };

    /// Free-electron gyromagnetic ratio g_e·μB/ħ, rad·s⁻¹·T⁻¹.
    pub fn gyromagnetic_ratio(&self) -> f64 {
        self.free_electron_g * self.bohr_magneton / self.reduced_planck
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Angular frequency (rad/s) to ordinary frequency (Hz).
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / TAU
}

/// Angular frequency (rad/s) to MHz.
pub fn angular_to_mhz(omega: f64) -> f64 {
    omega / (TAU * 1e6)
}

/// MHz to angular frequency (rad/s).
pub fn mhz_to_angular(mhz: f64) -> f64 {
    mhz * TAU * 1e6
}
