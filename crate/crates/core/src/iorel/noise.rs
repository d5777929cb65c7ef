//! Absorption-noise kernels and the per-mode energy balance.
//!
//! Inside layer `j` (thickness `d`, local coordinate `x = z - z_{j-1}`) every
//! amplitude profile is a combination of `exp(i h x)` and `exp(i h (d - x))`,
//! so all depth integrals are closed-form.

use num_complex::Complex64;
use serde::Serialize;

use super::{noise_amplitude_units, NoiseAmplitude};
use crate::error::{Error, Result};
use crate::stack::{scattering_coefficients, Emission, LayerStack, ModeSolver, Region};
use crate::waves::{ModeIndex, Polarization};

/// `int_0^d exp(-kappa x) dx`.
fn decay_integral(kappa: f64, d: f64) -> f64 {
    if kappa == 0.0 {
        d
    } else {
        -(-kappa * d).exp_m1() / kappa
    }
}

/// `int_0^d exp(i q x) dx` for real `q`, without cancellation for small `q d`.
fn phase_integral(q: f64, d: f64) -> Complex64 {
    if q == 0.0 {
        return Complex64::new(d, 0.0);
    }
    let theta = q * d;
    let half = (0.5 * theta).sin();
    let em1 = Complex64::new(-2.0 * half * half, theta.sin());
    em1 / Complex64::new(0.0, q)
}

/// Depth integrals of the two profiles `p(x) = exp(i h (d - x))` and `q(x) = exp(i h x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepthIntegrals {
    /// `int |p|^2`.
    pub pp: f64,
    /// `int |q|^2`.
    pub qq: f64,
    /// `int p q*`.
    pub pq: Complex64,
}

impl DepthIntegrals {
    pub fn new(h: Complex64, d: f64) -> Self {
        let same = decay_integral(2.0 * h.im, d);
        let pq = (Complex64::i() * h * d).exp() * phase_integral(-2.0 * h.re, d);
        Self { pp: same, qq: same, pq }
    }

    /// `int |a p + b q|^2` and `int |a p - b q|^2`.
    fn sum_and_difference(&self, a: Complex64, b: Complex64) -> (f64, f64) {
        let diag = a.norm_sqr() * self.pp + b.norm_sqr() * self.qq;
        let cross = 2.0 * (a * b.conj() * self.pq).re;
        ((diag + cross).max(0.0), (diag - cross).max(0.0))
    }
}

/// `int |E|^2` (in units of the incident intensity) for amplitudes `a` on the
/// `p` profile and `b` on the `q` profile.
fn intensity(pol: Polarization, di: &DepthIntegrals, a: Complex64, b: Complex64, h: Complex64, lambda: f64, k2: f64) -> f64 {
    let (plus, minus) = di.sum_and_difference(a, b);
    match pol {
        Polarization::Te => plus,
        // N waves: transverse part ~ h (up - down), axial part ~ lambda (up + down)
        Polarization::Tm => (h.norm_sqr() * minus + lambda * lambda * plus) / k2,
    }
}

/// Noise data of one layer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerNoiseKernel {
    /// Zero-based layer index.
    pub layer: usize,
    pub polarization: Polarization,
    pub eps: Complex64,
    pub h: Complex64,
    pub amplitude: NoiseAmplitude,
    /// `-omega mu0 / (4 pi) * (2 - delta_0n) / (lambda h)`.
    pub prefactor: Complex64,
    /// Left-output wave per unit up/down emission at the layer boundary (zero if lossless).
    pub left: [Complex64; 2],
    /// Right-output wave per unit up/down emission at the layer boundary (zero if lossless).
    pub right: [Complex64; 2],
    /// Absolute-phase coefficients `(c, d)` of the left region for sources in this layer.
    pub left_coefficients: [Complex64; 2],
    /// Absolute-phase coefficients `(a, b)` of the right region for sources in this layer.
    pub right_coefficients: [Complex64; 2],
    pub depth: DepthIntegrals,
    /// Contribution to the left output's noise strength, in units of the incident flux.
    pub strength_left: Option<f64>,
    pub strength_right: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseKernelSet {
    pub mode: ModeIndex,
    pub layers: Vec<LayerNoiseKernel>,
    /// Total noise strength in the left output; `None` when that channel carries no flux.
    pub strength_left: Option<f64>,
    pub strength_right: Option<f64>,
}

pub fn noise_kernels(stack: &LayerStack, mode: &ModeIndex) -> Result<NoiseKernelSet> {
    mode.validate()?;
    let units = stack.units;
    let omega = mode.omega;
    let mu0 = units.mu0();
    let solver = ModeSolver::new(stack, omega, mode.lambda, mode.polarization)?;
    let last = solver.num_regions() - 1;
    let k0 = solver.k0;
    let lambda = mode.lambda;
    let weight = if mode.n == 0 { 1.0 } else { 2.0 };
    // flux of a unit incident mode, hbar omega^2 mu0 / (4 pi Re h)
    let flux = |h: Complex64| {
        (h.re > 0.0).then(|| units.hbar() * omega * omega * mu0 / (4.0 * std::f64::consts::PI * h.re))
    };
    let (flux_l, flux_r) = (flux(solver.h[0]), flux(solver.h[last]));
    let zero = Complex64::new(0.0, 0.0);
    let mut layers = Vec::with_capacity(stack.num_layers());
    let (mut total_l, mut total_r) = (flux_l.map(|_| 0.0), flux_r.map(|_| 0.0));
    for (i, layer) in stack.layers.iter().enumerate() {
        let j = i + 1;
        let eps = solver.eps[j];
        let h = solver.h[j];
        let amplitude = noise_amplitude_units(eps.im.max(0.0), omega, units)?;
        let prefactor = -omega * mu0 / (4.0 * std::f64::consts::PI) * weight / (lambda * h);
        let depth = DepthIntegrals::new(h, layer.thickness);
        let (mut left, mut right) = ([zero; 2], [zero; 2]);
        let (mut left_coefficients, mut right_coefficients) = ([zero; 2], [zero; 2]);
        let (mut s_l, mut s_r) = (flux_l.map(|_| 0.0), flux_r.map(|_| 0.0));
        if eps.im > 0.0 {
            let up = solver.source_response(j, Emission::Up);
            let dn = solver.source_response(j, Emission::Down);
            left = [up.down(0), dn.down(0)];
            right = [up.up(last), dn.up(last)];
            let sc_l = scattering_coefficients(stack, mode, Region::Left, Region::Layer(i))?;
            let sc_r = scattering_coefficients(stack, mode, Region::Right, Region::Layer(i))?;
            left_coefficients = [sc_l.c, sc_l.d];
            right_coefficients = [sc_r.a, sc_r.b];
            let k2 = k0 * k0 * eps.norm();
            // |omega mu0 / (2 h) * amplitude|^2, the squared source strength per unit kernel
            let src = (omega * mu0 * amplitude.value / 2.0).powi(2) / h.norm_sqr();
            if let Some(f) = flux_l {
                let v = src * intensity(mode.polarization, &depth, left[0], left[1], h, lambda, k2) / f;
                s_l = Some(v);
                total_l = total_l.map(|t| t + v);
            }
            if let Some(f) = flux_r {
                let v = src * intensity(mode.polarization, &depth, right[0], right[1], h, lambda, k2) / f;
                s_r = Some(v);
                total_r = total_r.map(|t| t + v);
            }
        }
        layers.push(LayerNoiseKernel {
            layer: i,
            polarization: mode.polarization,
            eps,
            h,
            amplitude,
            prefactor,
            left,
            right,
            left_coefficients,
            right_coefficients,
            depth,
            strength_left: s_l,
            strength_right: s_r,
        });
    }
    Ok(NoiseKernelSet { mode: *mode, layers, strength_left: total_l, strength_right: total_r })
}

/// Per-mode energy bookkeeping for incidence from the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBalance {
    /// `|r|^2`.
    pub reflectance: f64,
    /// Transmitted flux over incident flux, `|t|^2 Re h_R / Re h_L`.
    pub transmittance: f64,
    /// Absorbed fraction from the layer depth integrals.
    pub absorption: f64,
    /// `|absorption - (1 - reflectance - transmittance)|`.
    pub residual: f64,
}

pub fn energy_balance(stack: &LayerStack, mode: &ModeIndex) -> Result<EnergyBalance> {
    mode.validate()?;
    let solver = ModeSolver::new(stack, mode.omega, mode.lambda, mode.polarization)?;
    energy_balance_with(stack, &solver)
}

pub(crate) fn energy_balance_with(stack: &LayerStack, solver: &ModeSolver) -> Result<EnergyBalance> {
    let last = solver.num_regions() - 1;
    let (el, er) = (solver.eps[0], solver.eps[last]);
    if el.im != 0.0 || er.im != 0.0 {
        return Err(Error::Precondition("energy balance needs lossless exterior media".into()));
    }
    let (hl, hr) = (solver.h[0], solver.h[last]);
    if !(hl.im == 0.0 && hl.re > 0.0 && hr.im == 0.0 && hr.re > 0.0) {
        return Err(Error::Precondition("energy balance needs a mode propagating in both exterior media".into()));
    }
    let lambda = solver.lambda.re;
    let k0 = solver.k0;
    let amps = solver.incidence_left();
    let mut absorbed = 0.0;
    for (i, layer) in stack.layers.iter().enumerate() {
        let j = i + 1;
        let eps = solver.eps[j];
        if eps.im <= 0.0 {
            continue;
        }
        let depth = DepthIntegrals::new(solver.h[j], layer.thickness);
        // up wave lives on the q profile, down wave on the p profile
        let (a, b) = (amps.down(j), amps.up(j));
        absorbed += eps.im * intensity(solver.polarization, &depth, a, b, solver.h[j], lambda, k0 * k0 * eps.norm());
    }
    let absorption = k0 * k0 * absorbed / hl.re;
    let reflectance = amps.down(0).norm_sqr();
    let transmittance = amps.up(last).norm_sqr() * hr.re / hl.re;
    let residual = (absorption - (1.0 - reflectance - transmittance)).abs();
    Ok(EnergyBalance { reflectance, transmittance, absorption, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::DispersionModel;
    use crate::stack::{slab_rt, Layer};
    use crate::units::Units;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn depth_integrals_match_midpoint_rule() {
        for &(h, d) in &[(c(1.3, 0.4), 2.0), (c(0.0, 3.0), 0.7), (c(2.0, 0.0), 1.1), (c(1e-9, 1e-9), 0.5)] {
            let di = DepthIntegrals::new(h, d);
            let n = 200_000;
            let dx = d / n as f64;
            let (mut pp, mut qq, mut pq) = (0.0, 0.0, c(0.0, 0.0));
            for k in 0..n {
                let x = (k as f64 + 0.5) * dx;
                let p = (Complex64::i() * h * (d - x)).exp();
                let q = (Complex64::i() * h * x).exp();
                pp += p.norm_sqr() * dx;
                qq += q.norm_sqr() * dx;
                pq += p * q.conj() * dx;
            }
            assert!((di.pp - pp).abs() < 1e-8 * pp.max(1.0));
            assert!((di.qq - qq).abs() < 1e-8 * qq.max(1.0));
            assert!((di.pq - pq).norm() < 1e-8 * pq.norm().max(1.0));
        }
    }

    #[test]
    fn empty_stack_balance() {
        let s = LayerStack::half_spaces(DispersionModel::real(1.0), DispersionModel::real(1.0)).with_units(Units::Natural);
        let b = energy_balance(&s, &ModeIndex::new(1.0, 0.3, Polarization::Te)).unwrap();
        assert_eq!((b.reflectance, b.transmittance, b.absorption, b.residual), (0.0, 1.0, 0.0, 0.0));
        assert!(noise_kernels(&s, &ModeIndex::new(1.0, 0.3, Polarization::Te)).unwrap().layers.is_empty());
    }

    #[test]
    fn half_wave_absorbing_slab() {
        // d = half the vacuum wavelength, normal incidence
        let d = std::f64::consts::PI;
        let s = LayerStack::slab(DispersionModel::real(1.0), DispersionModel::constant(c(2.25, 0.1)), d)
            .unwrap()
            .with_units(Units::Natural);
        for pol in Polarization::BOTH {
            let m = ModeIndex::new(1.0, 0.0, pol);
            let b = energy_balance(&s, &m).unwrap();
            let (r, t) = slab_rt(&s, &m).unwrap();
            assert!(b.absorption > 0.0);
            assert!((b.absorption - (1.0 - r.norm_sqr() - t.norm_sqr())).abs() < 1e-6);
            assert!(b.residual < 1e-6);
        }
    }

    #[test]
    fn lossless_layers_carry_no_noise() {
        let s = LayerStack::new(
            DispersionModel::real(1.0),
            vec![
                Layer { medium: DispersionModel::real(2.0), thickness: 0.4 },
                Layer { medium: DispersionModel::constant(c(3.0, 0.3)), thickness: 0.4 },
            ],
            DispersionModel::real(1.0),
        )
        .unwrap()
        .with_units(Units::Natural);
        let set = noise_kernels(&s, &ModeIndex::new(1.0, 0.5, Polarization::Tm)).unwrap();
        let l0 = &set.layers[0];
        assert_eq!(l0.amplitude.value, 0.0);
        assert!(l0.left.iter().chain(&l0.right).all(|z| *z == c(0.0, 0.0)));
        assert_eq!(l0.strength_left, Some(0.0));
        assert!(set.layers[1].strength_left.unwrap() > 0.0);
    }

    #[test]
    fn noise_strength_equals_absorption() {
        let s = LayerStack::new(
            DispersionModel::real(1.0),
            vec![
                Layer { medium: DispersionModel::constant(c(2.0, 0.4)), thickness: 0.6 },
                Layer { medium: DispersionModel::real(5.0), thickness: 0.3 },
                Layer { medium: DispersionModel::constant(c(-4.0, 1.0)), thickness: 0.05 },
            ],
            DispersionModel::real(1.7),
        )
        .unwrap()
        .with_units(Units::Natural);
        for pol in Polarization::BOTH {
            for &l in &[0.0, 0.4, 0.95] {
                let m = ModeIndex::new(1.0, l, pol);
                let set = noise_kernels(&s, &m).unwrap();
                let b = energy_balance(&s, &m).unwrap();
                assert!(b.residual < 1e-10, "{b:?}");
                let sl = set.strength_left.unwrap();
                assert!((sl - (1.0 - b.reflectance - b.transmittance)).abs() < 1e-10, "{pol:?} {l} {sl} {b:?}");
                // right output: balance of the mirrored stack
                let br = energy_balance(&s.reversed(), &m).unwrap();
                let sr = set.strength_right.unwrap();
                assert!((sr - br.absorption).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn lossy_exterior_is_rejected() {
        let s = LayerStack::half_spaces(DispersionModel::constant(c(1.0, 0.1)), DispersionModel::real(1.0)).with_units(Units::Natural);
        assert!(matches!(energy_balance(&s, &ModeIndex::new(1.0, 0.3, Polarization::Te)), Err(Error::Precondition(_))));
    }
}
