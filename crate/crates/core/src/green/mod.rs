//! Free and scattering Green tensors and their region decomposition.
//!
//! For a field point in region `f` and a source in region `s` the total tensor is
//! `G = G_free(f) [s = f] + G_scat(f, s)`. When `s != f` the scattering part
//! carries the whole field, including the transmitted direct wave.

mod free;
mod spectral;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Complex3Tensor, QuadratureSpec, SpectralPath};
use crate::stack::{LayerStack, Region};

pub use free::{free_green, free_green_k, free_green_units};
pub use spectral::AzimuthalFrame;

use spectral::{check_lossless_poles, cutoff, integrate, Integrand, Pair};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenOptions {
    pub quad: QuadratureSpec,
    /// Highest azimuthal order summed in the global frame.
    pub n_max: u32,
    #[serde(default)]
    pub frame: AzimuthalFrame,
}

impl GreenOptions {
    pub fn new(quad: QuadratureSpec) -> Self {
        Self { quad, n_max: 60, frame: AzimuthalFrame::SourceAxis }
    }

    /// Default tolerances scaled to the largest medium wavenumber of the stack.
    pub fn for_stack(stack: &LayerStack, omega: f64) -> Result<Self> {
        Ok(Self::new(QuadratureSpec::for_wavenumber(stack.sample(omega)?.max_abs_k())))
    }
}

/// One evaluated Green-tensor part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenSample {
    pub value: Complex3Tensor,
    pub field_point: [f64; 3],
    pub source_point: [f64; 3],
    pub omega: f64,
    /// Quadrature error bound plus the azimuthal truncation estimate.
    pub error_bound: f64,
    /// Estimated size of the neglected azimuthal orders (zero in the source-axis frame).
    pub truncation_estimate: f64,
    /// Number of azimuthal orders summed.
    pub n_terms: u32,
    /// Set when `n_max` was reached before the azimuthal sum converged.
    pub truncated: bool,
    pub evaluations: usize,
}

impl GreenSample {
    fn exact(value: Complex3Tensor, r: [f64; 3], s: [f64; 3], omega: f64) -> Self {
        Self {
            value,
            field_point: r,
            source_point: s,
            omega,
            error_bound: 0.0,
            truncation_estimate: 0.0,
            n_terms: 0,
            truncated: false,
            evaluations: 0,
        }
    }
}

/// Source part of a decomposition label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourcePart {
    /// Free tensor of the field region's medium; requires the source in that region.
    Free,
    /// Scattering part for sources in the given region.
    Region(Region),
}

/// `(f, 0)`, `(f, 1)`, `(f, 2i)`, `(f, 3)` style label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GreenPartLabel {
    pub field: Region,
    pub source: SourcePart,
}

fn check_point(stack: &LayerStack, region: Region, p: [f64; 3], what: &str) -> Result<()> {
    if !p.iter().all(|x| x.is_finite()) {
        return Err(Error::Domain(format!("{what} point must be finite")));
    }
    if !stack.contains(region, p[2])? {
        let (lo, hi) = stack.region_bounds(region)?;
        return Err(Error::RegionMismatch(format!(
            "{what} point z = {:e} is outside the {region} region [{lo:e}, {hi:e}]",
            p[2]
        )));
    }
    Ok(())
}

/// Scattering part for a field point `r` in region `f` and a source `s` in region `src`.
pub fn scattering_green(
    stack: &LayerStack,
    omega: f64,
    f: Region,
    src: Region,
    r: [f64; 3],
    s: [f64; 3],
    opts: &GreenOptions,
) -> Result<GreenSample> {
    opts.quad.validate()?;
    check_point(stack, f, r, "field")?;
    check_point(stack, src, s, "source")?;
    let sample = stack.sample(omega)?;
    let pair = Pair { fi: stack.region_index(f)?, si: stack.region_index(src)?, r, s };
    let (lambda_max, delta) = cutoff(&sample, &pair, &opts.quad);
    check_lossless_poles(&sample, lambda_max)?;
    let spec = QuadratureSpec { lambda_max, ..opts.quad };
    let mut branch_points: Vec<f64> = sample.wavenumbers().iter().map(|k| k.norm()).collect();
    branch_points.push(sample.k0);
    let dx = r[0] - s[0];
    let dy = r[1] - s[1];
    let rho = dx.hypot(dy);
    let integrand = Integrand::new(&sample, pair);
    let span = rho + (r[2] - s[2]).abs() + stack.total_thickness();

    match opts.frame {
        AzimuthalFrame::SourceAxis => {
            // a K21 panel integrates two periods of J(lambda span) well; adaptivity does the rest
            let path = SpectralPath {
                branch_points,
                panels_per_unit: span / (4.0 * std::f64::consts::PI),
                decay_rate: (delta > 0.0).then_some(delta),
            };
            let (local, err, evals) = integrate(|l| integrand.source_axis(l, rho), &spec, &path)?;
            let phi = dy.atan2(dx);
            Ok(GreenSample {
                value: local.rotate_z(phi),
                field_point: r,
                source_point: s,
                omega,
                error_bound: err,
                truncation_estimate: 0.0,
                n_terms: opts.n_max.min(1) + 1,
                truncated: opts.n_max < 1,
                evaluations: evals,
            })
        }
        AzimuthalFrame::Global => {
            let span = r[0].hypot(r[1]) + s[0].hypot(s[1]) + (r[2] - s[2]).abs() + stack.total_thickness();
            let path = SpectralPath {
                branch_points,
                panels_per_unit: span / (4.0 * std::f64::consts::PI),
                decay_rate: (delta > 0.0).then_some(delta),
            };
            let mut sum = Complex3Tensor::zero();
            let mut err_sum = 0.0;
            let mut evals = 0;
            let mut prev_norm = f64::INFINITY;
            let mut small_run = 0;
            let mut last_norm = 0.0;
            let mut ratio = 1.0;
            let mut n_terms = 0;
            let mut converged = false;
            for n in 0..=opts.n_max {
                let (term, err, e) = integrate(|l| integrand.global_order(l, n), &spec, &path)?;
                sum += term;
                err_sum += err;
                evals += e;
                n_terms = n + 1;
                let t = term.frobenius_norm();
                ratio = if prev_norm > 0.0 && prev_norm.is_finite() { t / prev_norm } else { 1.0 };
                prev_norm = t;
                last_norm = t;
                let tol = opts.quad.abs_tol.max(opts.quad.rel_tol * sum.frobenius_norm());
                if n >= 1 && t < 0.01 * tol {
                    small_run += 1;
                    if small_run >= 2 {
                        converged = true;
                        break;
                    }
                } else {
                    small_run = 0;
                }
            }
            let truncation = if ratio < 1.0 { last_norm / (1.0 - ratio) } else { f64::INFINITY };
            let truncation = if last_norm == 0.0 { 0.0 } else { truncation };
            Ok(GreenSample {
                value: sum,
                field_point: r,
                source_point: s,
                omega,
                // a series that has not started to decay gives no usable bound
                error_bound: err_sum + truncation,
                truncation_estimate: truncation,
                n_terms,
                truncated: !converged,
                evaluations: evals,
            })
        }
    }
}

/// One part of the region decomposition.
pub fn green_part(
    stack: &LayerStack,
    omega: f64,
    label: GreenPartLabel,
    r: [f64; 3],
    s: [f64; 3],
    opts: &GreenOptions,
) -> Result<GreenSample> {
    match label.source {
        SourcePart::Free => {
            check_point(stack, label.field, r, "field")?;
            if !stack.contains(label.field, s[2])? {
                return Err(Error::RegionMismatch(format!(
                    "free part requested for field region {} but the source z = {:e} lies outside it",
                    label.field, s[2]
                )));
            }
            let eps = stack.medium(label.field)?.permittivity(omega)?.eps;
            let g = free_green_units(eps, omega, r, s, stack.units)?;
            Ok(GreenSample::exact(g, r, s, omega))
        }
        SourcePart::Region(src) => scattering_green(stack, omega, label.field, src, r, s, opts),
    }
}

/// Total tensor, with the regions taken from the point positions (a point
/// on an interface is assigned to the region below it).
pub fn total_green(stack: &LayerStack, omega: f64, r: [f64; 3], s: [f64; 3], opts: &GreenOptions) -> Result<GreenSample> {
    let (f, src) = (stack.region_of(r[2]), stack.region_of(s[2]));
    total_green_in(stack, omega, f, src, r, s, opts)
}

/// Total tensor with explicit region assignment.
pub fn total_green_in(
    stack: &LayerStack,
    omega: f64,
    f: Region,
    src: Region,
    r: [f64; 3],
    s: [f64; 3],
    opts: &GreenOptions,
) -> Result<GreenSample> {
    let mut out = scattering_green(stack, omega, f, src, r, s, opts)?;
    if f == src {
        let eps = stack.medium(f)?.permittivity(omega)?.eps;
        out.value += free_green_units(eps, omega, r, s, stack.units)?;
    }
    Ok(out)
}

/// Medium wavenumber of a region.
pub fn region_wavenumber(stack: &LayerStack, omega: f64, region: Region) -> Result<Complex64> {
    Ok(stack.medium(region)?.permittivity(omega)?.eps.sqrt() * stack.units.k0(omega))
}
