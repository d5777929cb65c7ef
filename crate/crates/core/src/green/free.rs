use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::Complex3Tensor;
use crate::units::Units;

/// Free-space tensor `(U + grad grad / k^2) exp(ikR) / (4 pi R)` for medium
/// wavenumber `k`, `R = |r - s|`. The delta-function term at `R = 0` is not
/// represented; points closer than `1e-12` (in the length unit) are rejected.
pub fn free_green_k(k: Complex64, r: [f64; 3], s: [f64; 3]) -> Result<Complex3Tensor> {
    let d = [r[0] - s[0], r[1] - s[1], r[2] - s[2]];
    let dist = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    if dist < 1e-12 {
        return Err(Error::Coincident);
    }
    let kr = k * dist;
    let inv = Complex64::new(1.0, 0.0) / kr;
    let i = Complex64::i();
    let g = (i * kr).exp() / (4.0 * std::f64::consts::PI * dist);
    let a = g * (1.0 + i * inv - inv * inv);
    let b = g * (-1.0 - 3.0 * i * inv + 3.0 * inv * inv);
    let u = [d[0] / dist, d[1] / dist, d[2] / dist];
    Ok(Complex3Tensor::from_fn(|m, n| {
        let delta = if m == n { a } else { Complex64::new(0.0, 0.0) };
        delta + b * (u[m] * u[n])
    }))
}

/// Free-space tensor of a medium with permittivity `eps` at angular frequency
/// `omega` (SI units, `[1/m]`).
pub fn free_green(eps: Complex64, omega: f64, r: [f64; 3], s: [f64; 3]) -> Result<Complex3Tensor> {
    free_green_units(eps, omega, r, s, Units::Si)
}

pub fn free_green_units(eps: Complex64, omega: f64, r: [f64; 3], s: [f64; 3], units: Units) -> Result<Complex3Tensor> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("frequency must be > 0, got {omega}")));
    }
    free_green_k(eps.sqrt() * units.k0(omega), r, s)
}
