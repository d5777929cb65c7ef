//! Adaptive Gauss-Kronrod quadrature and the spectral (Sommerfeld-type) path.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tensor::Complex3Tensor;
use crate::error::{Error, Result};

/// Values that can be integrated: complex scalars and 3x3 tensors.
pub trait QuadValue: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn norm(&self) -> f64;
    fn components(&self) -> Vec<Complex64>;
    fn is_finite(&self) -> bool;
}

impl QuadValue for Complex64 {
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn components(&self) -> Vec<Complex64> {
        vec![*self]
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl QuadValue for Complex3Tensor {
    fn norm(&self) -> f64 {
        self.frobenius_norm()
    }
    fn components(&self) -> Vec<Complex64> {
        Complex3Tensor::components(self)
    }
    fn is_finite(&self) -> bool {
        Complex3Tensor::is_finite(self)
    }
}

/// Controls for the spectral integral over the transverse wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Upper limit of the transverse-wavenumber integral [1/m].
    pub lambda_max: f64,
}

impl QuadratureSpec {
    /// Default tolerances with `lambda_max = 20 * k_max`.
    pub fn for_wavenumber(k_max: f64) -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-300, max_subdivisions: 4000, lambda_max: 20.0 * k_max }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.rel_tol > 0.0) {
            problems.push(format!("rel_tol must be > 0, got {}", self.rel_tol));
        }
        if !(self.abs_tol > 0.0) {
            problems.push(format!("abs_tol must be > 0, got {}", self.abs_tol));
        }
        if self.max_subdivisions < 1 {
            problems.push("max_subdivisions must be >= 1".to_string());
        }
        if !(self.lambda_max > 0.0) || !self.lambda_max.is_finite() {
            problems.push(format!("lambda_max must be finite and > 0, got {}", self.lambda_max));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(problems.join("; ")))
        }
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    /// Sum of per-panel `|K21 - G10|` plus any truncated-tail estimate.
    pub error_bound: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

// Kronrod 21-point abscissae (positive half, descending) and weights; the
// 10-point Gauss rule uses the odd-indexed abscissae.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_224_372_405,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_138,
];

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<V: QuadValue>(f: &mut impl FnMut(f64) -> V, a: f64, b: f64) -> Result<Panel<V>> {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = V::default();
    for i in 0..10 {
        let dx = hw * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k = k + s * WGK[i];
        if i % 2 == 1 {
            g = g + s * WG[i / 2];
        }
    }
    let value = k * hw;
    if !value.is_finite() {
        return Err(Error::Domain(format!("non-finite integrand on [{a:e}, {b:e}]")));
    }
    let error = (k - g).norm() * hw.abs();
    Ok(Panel { a, b, value, error })
}

/// Globally adaptive 21-point Gauss-Kronrod over the given starting panels
/// (consecutive breakpoints). Returns the estimate and a conservative error bound.
pub fn gauss_kronrod_adaptive<V: QuadValue>(
    mut f: impl FnMut(f64) -> V,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadResult<V>> {
    if breakpoints.len() < 2 {
        return Err(Error::Domain("need at least two breakpoints".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod(&mut f, w[0], w[1])?);
            evaluations += 21;
        }
    }
    let sum = |heap: &BinaryHeap<Panel<V>>| {
        heap.iter().fold((V::default(), 0.0), |(v, e), p| (v + p.value, e + p.error))
    };
    let mut subdivisions = 0;
    let mut resolution_floor = 0.0;
    loop {
        let (value, error) = sum(&heap);
        let tol = spec.tolerance(value.norm());
        if error + resolution_floor <= tol {
            return Ok(QuadResult { value, error_bound: error + resolution_floor, evaluations, subdivisions });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                context: "adaptive quadrature".into(),
                estimate: value.components(),
                error_bound: error + resolution_floor,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) <= 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()) {
            // panel cannot be split further; its error stays in the bound
            resolution_floor += worst.error;
            if heap.is_empty() {
                return Err(Error::NonConvergence {
                    context: "adaptive quadrature (panel resolution exhausted)".into(),
                    estimate: worst.value.components(),
                    error_bound: resolution_floor,
                    evaluations,
                });
            }
            let mut frozen = worst;
            frozen.error = 0.0;
            heap.push(frozen);
            subdivisions += 1;
            continue;
        }
        heap.push(kronrod(&mut f, worst.a, mid)?);
        heap.push(kronrod(&mut f, mid, worst.b)?);
        evaluations += 42;
        subdivisions += 1;
    }
}

/// Integration path over `[0, lambda_max]` for a spectral integrand.
#[derive(Debug, Clone, Default)]
pub struct SpectralPath {
    /// Points inside `(0, lambda_max)` where the integrand has square-root
    /// branch behaviour (typically `|k_j|`); the path is split there.
    pub branch_points: Vec<f64>,
    /// Minimum number of starting panels per unit length, for oscillatory integrands.
    pub panels_per_unit: f64,
    /// Known exponential decay rate of the integrand beyond `lambda_max`, used
    /// for the tail estimate. `None` estimates it from two samples.
    pub decay_rate: Option<f64>,
}

/// `int_0^{lambda_max} f(lambda) d lambda` with the default path (no branch points).
pub fn integrate_spectral(f: impl Fn(f64) -> Complex64, spec: &QuadratureSpec) -> Result<QuadResult<Complex64>> {
    integrate_spectral_path(f, spec, &SpectralPath::default())
}

/// Spectral integral along `[0, lambda_max]`, split at the branch points.
///
/// Each segment `[a, b]` is mapped with `lambda = a + (b - a)(3s^2 - 2s^3)`,
/// whose vanishing Jacobian at both ends removes inverse-square-root endpoint
/// singularities. The tail beyond `lambda_max` is estimated from the decay
/// rate and added to the error bound.
pub fn integrate_spectral_path<V: QuadValue>(
    f: impl Fn(f64) -> V,
    spec: &QuadratureSpec,
    path: &SpectralPath,
) -> Result<QuadResult<V>> {
    spec.validate()?;
    let lmax = spec.lambda_max;
    let mut cuts: Vec<f64> = vec![0.0];
    let mut bps: Vec<f64> = path.branch_points.iter().copied().filter(|&p| p > 0.0 && p < lmax).collect();
    bps.sort_by(f64::total_cmp);
    bps.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * lmax);
    cuts.extend(bps);
    cuts.push(lmax);

    // Each segment occupies [i, i+1] in the mapped coordinate.
    let nseg = cuts.len() - 1;
    let mapped = |u: f64| -> V {
        let i = (u.floor() as usize).min(nseg - 1);
        let s = u - i as f64;
        let (a, b) = (cuts[i], cuts[i + 1]);
        let lam = a + (b - a) * s * s * (3.0 - 2.0 * s);
        let jac = (b - a) * 6.0 * s * (1.0 - s);
        if jac == 0.0 {
            return V::default();
        }
        f(lam) * jac
    };
    let mut breakpoints = Vec::new();
    for i in 0..nseg {
        let len = cuts[i + 1] - cuts[i];
        let panels = ((path.panels_per_unit * len).ceil() as usize).clamp(1, 4096);
        for p in 0..panels {
            breakpoints.push(i as f64 + p as f64 / panels as f64);
        }
    }
    breakpoints.push(nseg as f64);
    let mut result = gauss_kronrod_adaptive(mapped, &breakpoints, spec)?;

    let f_end = f(lmax).norm();
    let tail = match path.decay_rate {
        Some(rate) if rate > 0.0 => f_end / rate,
        _ => {
            let f_before = f(0.9 * lmax).norm();
            if f_before > f_end && f_end > 0.0 {
                let rate = (f_before / f_end).ln() / (0.1 * lmax);
                f_end / rate
            } else {
                f_end * lmax
            }
        }
    };
    result.error_bound += tail;
    result.evaluations += 2;
    Ok(result)
}
