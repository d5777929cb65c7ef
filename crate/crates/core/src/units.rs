//! Physical constants and unit systems.

use serde::{Deserialize, Serialize};

/// CODATA 2018 values.
pub mod codata {
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
    pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;
    pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;
}

/// Unit system used to interpret frequencies and lengths.
///
/// `Natural` sets `c = eps0 = mu0 = hbar = 1`; it exists for cross-checks where
/// all quantities are of order one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    #[default]
    Si,
    Natural,
}

impl Units {
    pub fn c(self) -> f64 {
        match self {
            Units::Si => codata::SPEED_OF_LIGHT,
            Units::Natural => 1.0,
        }
    }

    pub fn eps0(self) -> f64 {
        match self {
            Units::Si => codata::VACUUM_PERMITTIVITY,
            Units::Natural => 1.0,
        }
    }

    pub fn mu0(self) -> f64 {
        match self {
            Units::Si => codata::VACUUM_PERMEABILITY,
            Units::Natural => 1.0,
        }
    }

    pub fn hbar(self) -> f64 {
        match self {
            Units::Si => codata::REDUCED_PLANCK,
            Units::Natural => 1.0,
        }
    }

    /// Vacuum wavenumber `omega / c`.
    pub fn k0(self, omega: f64) -> f64 {
        omega / self.c()
    }
}
