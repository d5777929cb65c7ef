//! Spectral (Sommerfeld-type) evaluation of the scattering part.

use std::cell::RefCell;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    bessel_j_orders, integrate_spectral_path, Complex3Tensor, QuadratureSpec, SpectralPath,
};
use crate::stack::{CharacteristicFunction, Emission, ModeSolver, StackSample};
use crate::waves::{cyl_to_cartesian, m_from_factors, n_from_factors, radial_from_orders, Parity, Polarization, RadialFactors};

/// Choice of the cylinder axis for the azimuthal expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AzimuthalFrame {
    /// Axis through the source point; only `n = 0, 1` contribute, so the sum is exact.
    #[default]
    SourceAxis,
    /// Axis through the coordinate origin; the `n` sum is truncated adaptively.
    Global,
}

/// Geometry of one field/source pair.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Pair {
    pub fi: usize,
    pub si: usize,
    pub r: [f64; 3],
    pub s: [f64; 3],
}

/// Integrand builder for one pair at one frequency.
pub(crate) struct Integrand<'a> {
    pub sample: &'a StackSample,
    pub pair: Pair,
    pub k: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn wave(
    pol: Polarization,
    rf: &RadialFactors,
    n: u32,
    parity: Parity,
    psi: f64,
    lambda: f64,
    h: Complex64,
    k: Complex64,
) -> [Complex64; 3] {
    let one = Complex64::new(1.0, 0.0);
    let v = match pol {
        Polarization::Te => m_from_factors(rf, n, parity, psi, one),
        Polarization::Tm => n_from_factors(rf, n, parity, psi, lambda, h, k, one),
    };
    cyl_to_cartesian(&v, psi)
}

impl<'a> Integrand<'a> {
    pub fn new(sample: &'a StackSample, pair: Pair) -> Self {
        Self { sample, pair, k: sample.wavenumbers() }
    }

    /// Per-polarization data: for each emission, the source weight and the
    /// up/down parts at the field point.
    fn channels(&self, lambda: f64, pol: Polarization) -> Result<(Complex64, Complex64, [(Complex64, Complex64, Complex64); 2])> {
        let solver = ModeSolver::from_sample(self.sample, Complex64::new(lambda, 0.0), pol)?;
        let Pair { fi, si, r, s } = self.pair;
        let mut out = [(ZERO, ZERO, ZERO); 2];
        for (slot, e) in [Emission::Up, Emission::Down].into_iter().enumerate() {
            let w = solver.emission_factor(si, e, s[2]);
            if w == ZERO {
                continue;
            }
            let amps = solver.source_response(si, e);
            let (up, dn) = solver.waves_at(&amps, fi, r[2]);
            out[slot] = (w, up, dn);
        }
        Ok((solver.h[si], solver.h[fi], out))
    }

    /// Integrand with the axis through the source; the field point lies at
    /// transverse distance `rho` on the local x axis.
    pub fn source_axis(&self, lambda: f64, rho: f64) -> Result<Complex3Tensor> {
        let js = bessel_j_orders(2, lambda * rho);
        let field_rf = [radial_from_orders(0, lambda, &js), radial_from_orders(1, lambda, &js)];
        let axis = [1.0, 0.0, 0.0];
        let src_rf = [radial_from_orders(0, lambda, &axis), radial_from_orders(1, lambda, &axis)];
        let modes = [(0u32, Parity::Even, 1.0), (1, Parity::Even, 2.0), (1, Parity::Odd, 2.0)];
        self.accumulate(lambda, |n| (field_rf[n as usize], src_rf[n as usize]), &modes, 0.0, 0.0)
    }

    /// Integrand of azimuthal order `n` with the axis through the coordinate origin.
    pub fn global_order(&self, lambda: f64, n: u32) -> Result<Complex3Tensor> {
        let Pair { r, s, .. } = self.pair;
        let (rr, psi_r) = (r[0].hypot(r[1]), r[1].atan2(r[0]));
        let (rs, psi_s) = (s[0].hypot(s[1]), s[1].atan2(s[0]));
        let jr = bessel_j_orders(n as usize + 1, lambda * rr);
        let js = bessel_j_orders(n as usize + 1, lambda * rs);
        let (fr, sr) = (radial_from_orders(n as usize, lambda, &jr), radial_from_orders(n as usize, lambda, &js));
        let weight = if n == 0 { 1.0 } else { 2.0 };
        let modes: Vec<(u32, Parity, f64)> = if n == 0 {
            vec![(0, Parity::Even, weight)]
        } else {
            vec![(n, Parity::Even, weight), (n, Parity::Odd, weight)]
        };
        self.accumulate(lambda, |_| (fr, sr), &modes, psi_r, psi_s)
    }

    fn accumulate(
        &self,
        lambda: f64,
        factors: impl Fn(u32) -> (RadialFactors, RadialFactors),
        modes: &[(u32, Parity, f64)],
        psi_r: f64,
        psi_s: f64,
    ) -> Result<Complex3Tensor> {
        let Pair { fi, si, .. } = self.pair;
        let (kf, ks) = (self.k[fi], self.k[si]);
        let mut acc = Complex3Tensor::zero();
        for pol in Polarization::BOTH {
            let (hs, hf, ch) = self.channels(lambda, pol)?;
            let pre = Complex64::new(1.0, 0.0) / (lambda * hs);
            for &(n, parity, w_n) in modes {
                let (frf, srf) = factors(n);
                let f_up = wave(pol, &frf, n, parity, psi_r, lambda, hf, kf);
                let f_dn = wave(pol, &frf, n, parity, psi_r, lambda, -hf, kf);
                for (slot, &(w, up, dn)) in ch.iter().enumerate() {
                    if w == ZERO || (up == ZERO && dn == ZERO) {
                        continue;
                    }
                    let src_h = if slot == 0 { -hs } else { hs };
                    let src = wave(pol, &srf, n, parity, psi_s, lambda, src_h, ks);
                    let field = [0, 1, 2].map(|i| up * f_up[i] + dn * f_dn[i]);
                    acc += Complex3Tensor::outer(&field, &src) * (pre * w * w_n);
                }
            }
        }
        Ok(acc * (Complex64::i() / (4.0 * std::f64::consts::PI)))
    }
}

/// Effective cutoff and decay rate for the pair.
pub(crate) fn cutoff(sample: &StackSample, pair: &Pair, spec: &QuadratureSpec) -> (f64, f64) {
    let last = sample.eps.len() - 1;
    let dist = |j: usize, z: f64| {
        let lo = if j == 0 { f64::INFINITY } else { (z - sample.z[j - 1]).abs() };
        let hi = if j == last { f64::INFINITY } else { (sample.z[j] - z).abs() };
        lo.min(hi)
    };
    let delta = if pair.fi == pair.si {
        dist(pair.fi, pair.r[2]) + dist(pair.si, pair.s[2])
    } else {
        (pair.r[2] - pair.s[2]).abs()
    };
    let kmax = sample.max_abs_k();
    let geometric = if delta > 0.0 { (40.0 / delta).min(1e3 * kmax) } else { 1e3 * kmax };
    (spec.lambda_max.max(geometric), delta)
}

/// Fails when an all-lossless stack has a bound mode on the real axis, where
/// the real-axis integral is undefined.
pub(crate) fn check_lossless_poles(sample: &StackSample, lambda_max: f64) -> Result<()> {
    if !sample.is_lossless() {
        return Ok(());
    }
    let last = sample.eps.len() - 1;
    let k_ext = (sample.eps[0].re.max(sample.eps[last].re)).max(0.0).sqrt() * sample.k0;
    let lo = k_ext * (1.0 + 1e-9) + 1e-12 * sample.k0;
    if !(lambda_max > lo) {
        return Ok(());
    }
    let samples = 4000;
    for pol in Polarization::BOTH {
        let d = CharacteristicFunction::new(sample.clone(), pol);
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=samples {
            let l = lo + (lambda_max - lo) * (i as f64 / samples as f64).powi(2);
            let v = d.eval(Complex64::new(l, 0.0)).im;
            if let Some((pl, pv)) = prev {
                if v == 0.0 || pv * v < 0.0 {
                    return Err(Error::LosslessPole { lambda: 0.5 * (pl + l) });
                }
            }
            prev = Some((l, v));
        }
    }
    Ok(())
}

/// Integrates `f` over `[0, lambda_max]`, surfacing errors raised inside the integrand.
pub(crate) fn integrate(
    f: impl Fn(f64) -> Result<Complex3Tensor>,
    spec: &QuadratureSpec,
    path: &SpectralPath,
) -> Result<(Complex3Tensor, f64, usize)> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let wrapped = |l: f64| match f(l) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex3Tensor::from_fn(|_, _| Complex64::new(f64::NAN, 0.0))
        }
    };
    let res = integrate_spectral_path(wrapped, spec, path);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = res?;
    Ok((r.value, r.error_bound, r.evaluations))
}
