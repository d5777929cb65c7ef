//! Surface-guided-wave poles: zeros of the characteristic function in the
//! complex transverse-wavenumber plane.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{find_roots_in_rect, Rect};
use crate::stack::{CharacteristicFunction, LayerStack};
use crate::waves::Polarization;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole {
    pub lambda: Complex64,
    /// `|D|` at the polished root, with `D` normalized as in [`CharacteristicFunction`].
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleSearch {
    /// Sorted by real, then imaginary part.
    pub poles: Vec<Pole>,
    /// Zero count of the window from the argument principle.
    pub winding: i32,
    /// Sub-windows (in lambda) holding zeros that Newton could not polish.
    pub unpolished: Vec<Rect>,
}

/// Points of the branch cut `h = 0 .. i inf` of an exterior with wavenumber
/// squared `k2`: `lambda = +-sqrt(k2 - t)`, `t >= 0`.
fn cut_hits(k2: Complex64, rect: &Rect) -> bool {
    let span = rect.re_min.abs().max(rect.re_max.abs()).max(rect.im_min.abs()).max(rect.im_max.abs());
    let t_max = (span * span + k2.norm()) * 4.0 + 1.0;
    let n = 4000;
    (0..=n).any(|i| {
        // dense near t = 0, where the cut starts at the branch point
        let t = t_max * (i as f64 / n as f64).powi(2);
        let l = (k2 - t).sqrt();
        rect.contains(l) || rect.contains(-l)
    })
}

/// All zeros of the characteristic function inside `window` (in lambda).
///
/// The window must not meet the branch cuts of the exterior wavenumbers; the
/// search runs in `xi = lambda / k0` so that `tol` is relative.
pub fn find_surface_poles(stack: &LayerStack, omega: f64, pol: Polarization, window: Rect, tol: f64) -> Result<PoleSearch> {
    if !(window.re_min < window.re_max && window.im_min < window.im_max) {
        return Err(Error::Domain("pole window must have positive extent".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let sample = stack.sample(omega)?;
    let k0 = sample.k0;
    let scaled = Rect {
        re_min: window.re_min / k0,
        re_max: window.re_max / k0,
        im_min: window.im_min / k0,
        im_max: window.im_max / k0,
    };
    let last = sample.eps.len() - 1;
    for (name, j) in [("left", 0), ("right", last)] {
        if cut_hits(sample.eps[j], &scaled) {
            return Err(Error::Precondition(format!("pole window crosses the {name} exterior branch cut")));
        }
    }
    let d = CharacteristicFunction::new(sample, pol);
    let search = find_roots_in_rect(|xi| d.eval(xi * k0), &scaled, tol)?;
    let mut poles: Vec<Pole> = search
        .roots
        .iter()
        .zip(&search.residuals)
        .map(|(xi, r)| Pole { lambda: xi * k0, residual: *r })
        .collect();
    poles.sort_by(|a, b| a.lambda.re.total_cmp(&b.lambda.re).then(a.lambda.im.total_cmp(&b.lambda.im)));
    let unpolished = search
        .unpolished
        .iter()
        .map(|r| Rect { re_min: r.re_min * k0, re_max: r.re_max * k0, im_min: r.im_min * k0, im_max: r.im_max * k0 })
        .collect();
    Ok(PoleSearch { poles, winding: search.winding, unpolished })
}
