//! Cylindrical TE (`M`) and TM (`N`) vector wave functions.
//!
//! Components are returned in the local cylindrical frame `(e_r, e_psi, e_z)`;
//! [`cyl_to_cartesian`] rotates them into the fixed Cartesian frame. The radial
//! factors `n J_n(lr)/r` and `dJ_n(lr)/dr` are evaluated through
//! `l (J_{n-1} +/- J_{n+1}) / 2`, which is regular on the axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bessel_j_orders, CVec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    /// `M` waves.
    #[serde(rename = "TE")]
    Te,
    /// `N` waves.
    #[serde(rename = "TM")]
    Tm,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Te, Polarization::Tm];

    pub fn label(self) -> &'static str {
        match self {
            Polarization::Te => "TE",
            Polarization::Tm => "TM",
        }
    }
}

/// Sign of the axial wavenumber carried by a wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `+h`, travelling or decaying towards `+z`.
    Up,
    /// `-h`.
    Down,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }
}

/// Label of one spectral channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeIndex {
    pub omega: f64,
    pub lambda: f64,
    pub n: u32,
    pub parity: Parity,
    pub polarization: Polarization,
    pub direction: Direction,
}

impl ModeIndex {
    /// Axisymmetric even mode travelling upwards; enough to label r/t channels,
    /// which do not depend on `n` or parity.
    pub fn new(omega: f64, lambda: f64, polarization: Polarization) -> Self {
        Self { omega, lambda, n: 0, parity: Parity::Even, polarization, direction: Direction::Up }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::Domain(format!("frequency must be > 0, got {}", self.omega)));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::Domain(format!("transverse wavenumber must be >= 0, got {}", self.lambda)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylPoint {
    pub r: f64,
    pub psi: f64,
    pub z: f64,
}

impl CylPoint {
    pub fn new(r: f64, psi: f64, z: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() || !psi.is_finite() || !z.is_finite() {
            return Err(Error::Domain(format!("invalid cylindrical point ({r}, {psi}, {z})")));
        }
        Ok(Self { r, psi, z })
    }

    pub fn from_cartesian(p: [f64; 3]) -> Self {
        Self { r: p[0].hypot(p[1]), psi: p[1].atan2(p[0]), z: p[2] }
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        [self.r * self.psi.cos(), self.r * self.psi.sin(), self.z]
    }
}

/// `(J_n(lr), n J_n(lr)/r, dJ_n(lr)/dr)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFactors {
    pub j: f64,
    pub j_over_r: f64,
    pub dj: f64,
}

pub fn radial_factors(n: u32, lambda: f64, r: f64) -> RadialFactors {
    let n = n as usize;
    let js = bessel_j_orders(n + 1, lambda * r);
    radial_from_orders(n, lambda, &js)
}

/// Same as [`radial_factors`] given `J_0..J_{n+1}` at `lr`.
pub fn radial_from_orders(n: usize, lambda: f64, js: &[f64]) -> RadialFactors {
    if n == 0 {
        RadialFactors { j: js[0], j_over_r: 0.0, dj: -lambda * js[1] }
    } else {
        RadialFactors {
            j: js[n],
            j_over_r: 0.5 * lambda * (js[n - 1] + js[n + 1]),
            dj: 0.5 * lambda * (js[n - 1] - js[n + 1]),
        }
    }
}

/// `(cos n psi, sin n psi)` arranged as `(c, s)` for the selected parity:
/// the even wave uses `(cos, sin)`, the odd one `(sin, -cos)` so that one
/// formula serves both.
fn angular(n: u32, psi: f64, parity: Parity) -> (f64, f64) {
    let (s, c) = (n as f64 * psi).sin_cos();
    match parity {
        Parity::Even => (c, s),
        Parity::Odd => (s, -c),
    }
}

/// `M` wave in cylindrical components, from precomputed radial factors.
pub fn m_from_factors(rf: &RadialFactors, n: u32, parity: Parity, psi: f64, phase: Complex64) -> CVec3 {
    let (ca, sa) = angular(n, psi, parity);
    [phase * (-rf.j_over_r * sa), phase * (-rf.dj * ca), Complex64::new(0.0, 0.0)]
}

/// `N` wave in cylindrical components, from precomputed radial factors.
pub fn n_from_factors(
    rf: &RadialFactors,
    n: u32,
    parity: Parity,
    psi: f64,
    lambda: f64,
    h: Complex64,
    k: Complex64,
    phase: Complex64,
) -> CVec3 {
    let (ca, sa) = angular(n, psi, parity);
    let ih_k = Complex64::i() * h / k;
    [
        phase * ih_k * (rf.dj * ca),
        phase * ih_k * (-rf.j_over_r * sa),
        phase * (lambda * lambda * rf.j * ca) / k,
    ]
}

pub fn vector_wave_m(mode: &ModeIndex, h: Complex64, p: &CylPoint) -> CVec3 {
    let rf = radial_factors(mode.n, mode.lambda, p.r);
    let phase = (Complex64::i() * h * p.z).exp();
    m_from_factors(&rf, mode.n, mode.parity, p.psi, phase)
}

pub fn vector_wave_n(mode: &ModeIndex, h: Complex64, k: Complex64, p: &CylPoint) -> Result<CVec3> {
    if k.norm() < 1e-30 {
        return Err(Error::Degenerate(format!("medium wavenumber too small: |k| = {:e}", k.norm())));
    }
    let rf = radial_factors(mode.n, mode.lambda, p.r);
    let phase = (Complex64::i() * h * p.z).exp();
    Ok(n_from_factors(&rf, mode.n, mode.parity, p.psi, mode.lambda, h, k, phase))
}

/// Rotates cylindrical components at azimuth `psi` into Cartesian ones.
pub fn cyl_to_cartesian(v: &CVec3, psi: f64) -> CVec3 {
    let (s, c) = psi.sin_cos();
    [v[0] * c - v[1] * s, v[0] * s + v[1] * c, v[2]]
}
