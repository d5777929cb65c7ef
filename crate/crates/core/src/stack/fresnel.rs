//! Single-interface Fresnel coefficients.
//!
//! Amplitudes multiply the vector waves `M` (TE) and `N` (TM) as written, so
//! the TM coefficients are those of the electric field: tangential `E` and `H`
//! are both continuous, and `t_TM` coincides with the textbook `t_p`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::axial_wavenumber_from_k2;
use crate::units::Units;
use crate::waves::Polarization;

/// Admittance-like factor whose product with the amplitude difference is continuous.
pub(crate) fn admittance(pol: Polarization, eps: Complex64, h: Complex64) -> Complex64 {
    match pol {
        Polarization::Te => h,
        Polarization::Tm => h / eps,
    }
}

/// Ratio between the continuous "sum" amplitude and the wave amplitude
/// (1 for TE, `sqrt(eps)` for TM; the common `k0` cancels in every ratio).
pub(crate) fn amplitude_scale(pol: Polarization, eps: Complex64) -> Complex64 {
    match pol {
        Polarization::Te => Complex64::new(1.0, 0.0),
        Polarization::Tm => eps.sqrt(),
    }
}

/// `(r, t)` for a wave in medium `a` hitting medium `b`, given the axial wavenumbers.
pub(crate) fn fresnel_from_h(
    pol: Polarization,
    eps_a: Complex64,
    eps_b: Complex64,
    h_a: Complex64,
    h_b: Complex64,
) -> Result<(Complex64, Complex64)> {
    if eps_a == eps_b {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)));
    }
    let (ya, yb) = (admittance(pol, eps_a, h_a), admittance(pol, eps_b, h_b));
    let sum = ya + yb;
    if !(sum.norm() > 1e-15 * (ya.norm() + yb.norm())) || !sum.re.is_finite() || !sum.im.is_finite() {
        return Err(Error::Degenerate(format!(
            "interface admittances cancel ({pol:?}): Y_a = {ya}, Y_b = {yb}"
        )));
    }
    let r = (ya - yb) / sum;
    let t = 2.0 * ya / sum * amplitude_scale(pol, eps_a) / amplitude_scale(pol, eps_b);
    Ok((r, t))
}

/// Fresnel `(r, t)` with `k0 = omega / c` supplied directly; `lambda` may be complex.
pub fn interface_fresnel_k0(
    eps_a: Complex64,
    eps_b: Complex64,
    k0: f64,
    lambda: Complex64,
    pol: Polarization,
) -> Result<(Complex64, Complex64)> {
    let h_a = axial_wavenumber_from_k2(eps_a * (k0 * k0), lambda);
    let h_b = axial_wavenumber_from_k2(eps_b * (k0 * k0), lambda);
    fresnel_from_h(pol, eps_a, eps_b, h_a, h_b)
}

/// Fresnel `(r, t)` in SI units.
///
/// TE: `r = (h_a - h_b)/(h_a + h_b)`, `t = 2 h_a/(h_a + h_b)`.
/// TM: `r = (eps_b h_a - eps_a h_b)/(eps_b h_a + eps_a h_b)`, `t` for the electric field.
pub fn interface_fresnel(
    eps_a: Complex64,
    eps_b: Complex64,
    omega: f64,
    lambda: f64,
    pol: Polarization,
) -> Result<(Complex64, Complex64)> {
    if !(omega > 0.0) || !(lambda >= 0.0) {
        return Err(Error::Domain(format!("need omega > 0 and lambda >= 0, got {omega}, {lambda}")));
    }
    interface_fresnel_k0(eps_a, eps_b, Units::Si.k0(omega), Complex64::new(lambda, 0.0), pol)
}
