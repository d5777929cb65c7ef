use num_complex::Complex64;

use crate::units::Units;

/// `h = sqrt(k^2 - lambda^2)` on the sheet `Im h >= 0` (ties broken by `Re h >= 0`).
///
/// With `exp(i h z)` this makes every evanescent or absorbed channel decay
/// toward growing `z`.
pub fn axial_wavenumber_from_k2(k2: Complex64, lambda: Complex64) -> Complex64 {
    let h = (k2 - lambda * lambda).sqrt();
    if h.im < 0.0 || (h.im == 0.0 && h.re < 0.0) {
        -h
    } else {
        h
    }
}

/// Axial wavenumber in SI units for permittivity `eps`, angular frequency `omega`
/// (rad/s) and transverse wavenumber `lambda` (1/m).
pub fn axial_wavenumber(eps: Complex64, omega: f64, lambda: f64) -> Complex64 {
    let k0 = Units::Si.k0(omega);
    axial_wavenumber_from_k2(eps * (k0 * k0), Complex64::new(lambda, 0.0))
}
