use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iterations: usize,
    /// Relative step used for the central-difference derivative.
    pub derivative_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iterations: 100, derivative_step: 1e-7 }
    }
}

/// Damped Newton iteration from `seed` until either `|f(z)| < tol` with the last
/// step at rounding level, or the Newton step falls below `tol` relative to `|z|`.
/// The second test matters when `f` is large near its zero and its rounding
/// floor exceeds `tol`.
pub fn find_root_complex(f: impl Fn(Complex64) -> Complex64, seed: Complex64, tol: f64) -> Result<Complex64> {
    find_root_complex_with(f, seed, NewtonOptions { tol, ..Default::default() })
}

pub fn find_root_complex_with(
    f: impl Fn(Complex64) -> Complex64,
    seed: Complex64,
    opts: NewtonOptions,
) -> Result<Complex64> {
    let mut z = seed;
    let mut fz = f(z);
    for _ in 0..opts.max_iterations {
        if !(fz.re.is_finite() && fz.im.is_finite()) {
            break;
        }
        let d = opts.derivative_step * z.norm().max(1e-3);
        let dx = Complex64::new(d, 0.0);
        let deriv = (f(z + dx) - f(z - dx)) / (2.0 * dx);
        if deriv.norm() == 0.0 || !deriv.re.is_finite() || !deriv.im.is_finite() {
            break;
        }
        let step = fz / deriv;
        let mut damping = 1.0;
        let mut next = z - step;
        let mut fnext = f(next);
        while !(fnext.norm() < fz.norm()) && damping > 1e-6 {
            damping *= 0.5;
            next = z - step * damping;
            fnext = f(next);
        }
        let moved = (next - z).norm();
        let rounding = 64.0 * f64::EPSILON * z.norm().max(1e-300);
        if step.norm() <= (opts.tol * z.norm().max(1e-300)).max(rounding) {
            return Ok(if fnext.norm() < fz.norm() { next } else { z });
        }
        if fz.norm() < opts.tol && (moved <= 8.0 * f64::EPSILON * z.norm().max(1e-300) || !(fnext.norm() < fz.norm())) {
            return Ok(z);
        }
        if !(fnext.norm() < fz.norm()) {
            // no descent possible: accept if already within tolerance
            break;
        }
        z = next;
        fz = fnext;
        if fz.norm() == 0.0 {
            return Ok(z);
        }
    }
    if fz.norm() < opts.tol {
        return Ok(z);
    }
    Err(Error::NonConvergence {
        context: "complex Newton iteration".into(),
        estimate: vec![z],
        error_bound: fz.norm(),
        evaluations: opts.max_iterations,
    })
}
