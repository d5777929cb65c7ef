//! Argument-principle zero counting on rectangles.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::roots::{find_root_complex_with, NewtonOptions};
use crate::error::{Error, Result};

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    /// Split into four, off-centre so that a root on a symmetry line of the
    /// parent does not land on a child edge.
    fn quarters(&self) -> [Rect; 4] {
        let xm = self.re_min + 0.5137 * (self.re_max - self.re_min);
        let ym = self.im_min + 0.4871 * (self.im_max - self.im_min);
        [
            Rect { re_max: xm, im_max: ym, ..*self },
            Rect { re_min: xm, im_max: ym, ..*self },
            Rect { re_min: xm, im_min: ym, ..*self },
            Rect { re_max: xm, im_min: ym, ..*self },
        ]
    }
}

fn wrap(d: f64) -> f64 {
    let mut d = d % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d < -PI {
        d += 2.0 * PI;
    }
    d
}

fn edge_phase(f: &impl Fn(Complex64) -> Complex64, a: Complex64, b: Complex64, fa: Complex64, fb: Complex64, depth: u32) -> Result<f64> {
    let d = wrap(fb.arg() - fa.arg());
    if d.abs() <= PI / 6.0 {
        return Ok(d);
    }
    if depth == 0 {
        return Err(Error::Domain(format!(
            "argument jumps by {d:.3} between {a} and {b}: zero on the contour or branch cut crossing it"
        )));
    }
    let m = 0.5 * (a + b);
    let fm = eval(f, m)?;
    Ok(edge_phase(f, a, m, fa, fm, depth - 1)? + edge_phase(f, m, b, fm, fb, depth - 1)?)
}

fn eval(f: &impl Fn(Complex64) -> Complex64, z: Complex64) -> Result<Complex64> {
    let v = f(z);
    if !(v.re.is_finite() && v.im.is_finite()) || v.norm() == 0.0 {
        return Err(Error::Domain(format!("function vanishes or is non-finite on the contour at {z}")));
    }
    Ok(v)
}

/// Number of zeros (minus poles) of `f` inside `rect`, from the total change of
/// `arg f` along the boundary.
pub fn winding_number(f: impl Fn(Complex64) -> Complex64, rect: &Rect) -> Result<i32> {
    let corners = rect.corners();
    let mut total = 0.0;
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let steps = 32;
        let mut za = a;
        let mut fa = eval(&f, za)?;
        for s in 1..=steps {
            let zb = a + (b - a) * (s as f64 / steps as f64);
            let fb = eval(&f, zb)?;
            total += edge_phase(&f, za, zb, fa, fb, 40)?;
            za = zb;
            fa = fb;
        }
    }
    let w = total / (2.0 * PI);
    let rounded = w.round();
    if (w - rounded).abs() > 0.1 {
        return Err(Error::Domain(format!("non-integer winding number {w:.4}")));
    }
    Ok(rounded as i32)
}

#[derive(Debug, Clone, Default)]
pub struct RootSearch {
    /// Polished roots, each listed once per unit of multiplicity.
    pub roots: Vec<Complex64>,
    /// Residual `|f|` at each polished root.
    pub residuals: Vec<f64>,
    /// Winding number of the full search rectangle.
    pub winding: i32,
    /// Sub-rectangles that contain zeros which could not be polished.
    pub unpolished: Vec<Rect>,
}

/// Locate all zeros of an analytic `f` inside `rect`: count with the argument
/// principle, subdivide until each cell holds one zero, polish with Newton.
pub fn find_roots_in_rect(f: impl Fn(Complex64) -> Complex64, rect: &Rect, tol: f64) -> Result<RootSearch> {
    let winding = winding_number(&f, rect)?;
    let mut search = RootSearch { winding, ..Default::default() };
    if winding > 0 {
        isolate(&f, rect, winding, tol, rect.diameter() * 1e-10, 0, &mut search)?;
    }
    Ok(search)
}

fn isolate(
    f: &impl Fn(Complex64) -> Complex64,
    rect: &Rect,
    count: i32,
    tol: f64,
    min_size: f64,
    depth: u32,
    out: &mut RootSearch,
) -> Result<()> {
    if count <= 0 {
        return Ok(());
    }
    let opts = NewtonOptions { tol, ..Default::default() };
    if count == 1 {
        if let Ok(z) = find_root_complex_with(f, rect.center(), opts) {
            if rect.contains(z) {
                out.roots.push(z);
                out.residuals.push(f(z).norm());
                return Ok(());
            }
        }
    }
    if rect.diameter() < min_size || depth > 40 {
        // multiple zero (or cluster) below resolution
        match find_root_complex_with(f, rect.center(), opts) {
            Ok(z) => {
                for _ in 0..count {
                    out.roots.push(z);
                    out.residuals.push(f(z).norm());
                }
            }
            Err(_) => out.unpolished.push(*rect),
        }
        return Ok(());
    }
    let mut assigned = 0;
    for q in rect.quarters() {
        let c = winding_number(f, &q)?;
        assigned += c;
        isolate(f, &q, c, tol, min_size, depth + 1, out)?;
    }
    if assigned != count {
        return Err(Error::Domain(format!(
            "sub-rectangle winding numbers sum to {assigned}, parent has {count}"
        )));
    }
    Ok(())
}
