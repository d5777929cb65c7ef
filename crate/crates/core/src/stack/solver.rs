//! Generalized reflection recursion and the region amplitudes it produces.
//!
//! Inside region `j` the field of one polarization is
//! `A_j exp(i h_j (z - zu_j)) X(+h_j) + B_j exp(-i h_j (z - zd_j)) X(-h_j)`,
//! where `X` is `M` or `N` without its `exp(+-ihz)` factor, `zu_j` is the lower
//! boundary of the region (`z_0` for the left half-space) and `zd_j` the upper
//! one (`z_N` for the right half-space). With these local references every
//! exponential evaluated inside its own region has modulus `<= 1`, so the
//! recursion below never overflows however thick or lossy the layers are.

use num_complex::Complex64;

use super::fresnel::{admittance, amplitude_scale, fresnel_from_h};
use super::{LayerStack, Region, StackSample};
use crate::error::{Error, Result};
use crate::numerics::axial_wavenumber_from_k2;
use crate::waves::{ModeIndex, Polarization};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which way a point source radiates the wave being followed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emission {
    /// Towards `+z`; pairs with the source factor `X(s, -h_s)`.
    Up,
    /// Towards `-z`; pairs with the source factor `X(s, +h_s)`.
    Down,
}

/// `(A_j, B_j)` for every region `0..=N+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionAmplitudes(pub Vec<(Complex64, Complex64)>);

impl RegionAmplitudes {
    pub fn up(&self, j: usize) -> Complex64 {
        self.0[j].0
    }

    pub fn down(&self, j: usize) -> Complex64 {
        self.0[j].1
    }
}

/// One polarization at one `(omega, lambda)`.
#[derive(Debug, Clone)]
pub struct ModeSolver {
    pub polarization: Polarization,
    pub k0: f64,
    pub lambda: Complex64,
    pub eps: Vec<Complex64>,
    pub h: Vec<Complex64>,
    /// Interface positions `z_0..z_N`.
    pub z: Vec<f64>,
    /// `exp(i h_j d_j)` for layers, `0` for the half-spaces.
    pub p: Vec<Complex64>,
    /// Fresnel coefficients of interface `i` seen from region `i`.
    pub r_if: Vec<Complex64>,
    pub t_up: Vec<Complex64>,
    pub t_dn: Vec<Complex64>,
    /// Ratio of down to up amplitude at the top of region `j`, looking towards `+z`.
    pub r_up: Vec<Complex64>,
    /// Ratio of up to down amplitude at the bottom of region `j`, looking towards `-z`.
    pub r_dn: Vec<Complex64>,
}

impl ModeSolver {
    pub fn new(stack: &LayerStack, omega: f64, lambda: f64, pol: Polarization) -> Result<Self> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("transverse wavenumber must be >= 0, got {lambda}")));
        }
        Self::from_sample(&stack.sample(omega)?, Complex64::new(lambda, 0.0), pol)
    }

    pub fn from_sample(sample: &StackSample, lambda: Complex64, pol: Polarization) -> Result<Self> {
        let n = sample.num_layers();
        let k0 = sample.k0;
        let eps = sample.eps.clone();
        let h: Vec<Complex64> = eps.iter().map(|e| axial_wavenumber_from_k2(e * (k0 * k0), lambda)).collect();
        let mut p = vec![ZERO; n + 2];
        for j in 1..=n {
            p[j] = (Complex64::i() * h[j] * sample.thickness[j - 1]).exp();
        }
        let mut r_if = Vec::with_capacity(n + 1);
        let mut t_up = Vec::with_capacity(n + 1);
        let mut t_dn = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let (r, t) = fresnel_from_h(pol, eps[i], eps[i + 1], h[i], h[i + 1])?;
            let (_, tb) = fresnel_from_h(pol, eps[i + 1], eps[i], h[i + 1], h[i])?;
            r_if.push(r);
            t_up.push(t);
            t_dn.push(tb);
        }
        let mut r_up = vec![ZERO; n + 2];
        for j in (0..=n).rev() {
            let g = r_up[j + 1] * p[j + 1] * p[j + 1];
            r_up[j] = (r_if[j] + g) / (ONE + r_if[j] * g);
        }
        let mut r_dn = vec![ZERO; n + 2];
        for j in 1..=n + 1 {
            let g = r_dn[j - 1] * p[j - 1] * p[j - 1];
            let r = -r_if[j - 1];
            r_dn[j] = (r + g) / (ONE + r * g);
        }
        Ok(Self { polarization: pol, k0, lambda, eps, h, z: sample.z.clone(), p, r_if, t_up, t_dn, r_up, r_dn })
    }

    pub fn num_regions(&self) -> usize {
        self.eps.len()
    }

    fn last(&self) -> usize {
        self.eps.len() - 1
    }

    /// Reference plane of the up-going amplitude in region `j`.
    pub fn up_reference(&self, j: usize) -> f64 {
        if j == 0 {
            self.z[0]
        } else {
            self.z[j - 1]
        }
    }

    /// Reference plane of the down-going amplitude in region `j`.
    pub fn down_reference(&self, j: usize) -> f64 {
        self.z[j.min(self.z.len() - 1)]
    }

    /// Up- and down-going parts `(A e^{ih(z-zu)}, B e^{-ih(z-zd)})` at `z` in region `j`.
    pub fn waves_at(&self, amps: &RegionAmplitudes, j: usize, z: f64) -> (Complex64, Complex64) {
        let (a, b) = amps.0[j];
        let ih = Complex64::i() * self.h[j];
        let up = if a == ZERO { ZERO } else { a * (ih * (z - self.up_reference(j))).exp() };
        let dn = if b == ZERO { ZERO } else { b * (-ih * (z - self.down_reference(j))).exp() };
        (up, dn)
    }

    /// Continuous interface quantities `(F, G)`: sum and admittance-weighted
    /// difference of the scaled amplitudes. Tangential E and H are multiples of these.
    pub fn tangential(&self, j: usize, up: Complex64, down: Complex64) -> (Complex64, Complex64) {
        let s = amplitude_scale(self.polarization, self.eps[j]);
        let y = admittance(self.polarization, self.eps[j], self.h[j]) / self.k0;
        (s * (up + down), y * s * (up - down))
    }

    /// Propagates a total up amplitude `u` at the top of region `s` into all regions above.
    fn fill_up(&self, s: usize, u: Complex64, out: &mut [(Complex64, Complex64)]) {
        let mut u = u;
        for j in s..self.last() {
            let g = self.r_up[j + 1] * self.p[j + 1] * self.p[j + 1];
            let a = self.t_up[j] * u / (ONE + self.r_if[j] * g);
            let b = self.r_up[j + 1] * a * self.p[j + 1];
            out[j + 1] = (a, b);
            u = a * self.p[j + 1];
        }
    }

    /// Propagates a total down amplitude `v` at the bottom of region `s` into all regions below.
    fn fill_down(&self, s: usize, v: Complex64, out: &mut [(Complex64, Complex64)]) {
        let mut v = v;
        for j in (1..=s).rev() {
            let g = self.r_dn[j - 1] * self.p[j - 1] * self.p[j - 1];
            let d = self.t_dn[j - 1] * v / (ONE - self.r_if[j - 1] * g);
            let a = self.r_dn[j - 1] * d * self.p[j - 1];
            out[j - 1] = (a, d);
            v = d * self.p[j - 1];
        }
    }

    /// Unit up-going wave arriving at `z_0` from the left half-space.
    pub fn incidence_left(&self) -> RegionAmplitudes {
        let mut out = vec![(ZERO, ZERO); self.num_regions()];
        out[0] = (ONE, self.r_up[0]);
        self.fill_up(0, ONE, &mut out);
        RegionAmplitudes(out)
    }

    /// Unit down-going wave arriving at `z_N` from the right half-space.
    pub fn incidence_right(&self) -> RegionAmplitudes {
        let last = self.last();
        let mut out = vec![(ZERO, ZERO); self.num_regions()];
        out[last] = (self.r_dn[last], ONE);
        self.fill_down(last, ONE, &mut out);
        RegionAmplitudes(out)
    }

    /// Scattered amplitudes in every region for a source in region `s` whose
    /// emitted wave has unit amplitude on the boundary it travels towards
    /// (`z_s` for [`Emission::Up`], `z_{s-1}` for [`Emission::Down`]).
    /// The direct wave itself is not included.
    pub fn source_response(&self, s: usize, emission: Emission) -> RegionAmplitudes {
        let last = self.last();
        let mut out = vec![(ZERO, ZERO); self.num_regions()];
        if (emission == Emission::Up && s == last) || (emission == Emission::Down && s == 0) {
            return RegionAmplitudes(out);
        }
        let p = self.p[s];
        let denom = ONE - self.r_dn[s] * self.r_up[s] * p * p;
        let (a, b) = match emission {
            Emission::Up => (self.r_dn[s] * p * self.r_up[s] / denom, self.r_up[s] / denom),
            Emission::Down => (self.r_dn[s] / denom, self.r_up[s] * p * self.r_dn[s] / denom),
        };
        out[s] = (a, b);
        let (u, v) = match emission {
            Emission::Up => (ONE + p * a, p * b),
            Emission::Down => (p * a, ONE + p * b),
        };
        self.fill_up(s, u, &mut out);
        self.fill_down(s, v, &mut out);
        RegionAmplitudes(out)
    }

    /// Amplitude of the direct wave of a source at `z_src` on the boundary it
    /// travels towards; zero when the wave escapes to infinity.
    pub fn emission_factor(&self, s: usize, emission: Emission, z_src: f64) -> Complex64 {
        let ih = Complex64::i() * self.h[s];
        match emission {
            Emission::Up if s < self.last() => (ih * (self.z[s] - z_src)).exp(),
            Emission::Down if s > 0 => (ih * (z_src - self.z[s - 1])).exp(),
            _ => ZERO,
        }
    }
}

/// Reflection and transmission from both sides, each referenced to the
/// surface it is measured at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabRt {
    /// Reflection at `z = -L/2` of a wave incident from the left.
    pub r: Complex64,
    /// Transmission to `z = +L/2` of a wave incident at `z = -L/2`.
    pub t: Complex64,
    /// Reflection at `z = +L/2` of a wave incident from the right.
    pub r_rev: Complex64,
    /// Transmission to `z = -L/2` of a wave incident at `z = +L/2`.
    pub t_rev: Complex64,
}

pub fn slab_rt_full(stack: &LayerStack, mode: &ModeIndex) -> Result<SlabRt> {
    mode.validate()?;
    let solver = ModeSolver::new(stack, mode.omega, mode.lambda, mode.polarization)?;
    let last = solver.num_regions() - 1;
    let fwd = solver.incidence_left();
    let rev = solver.incidence_right();
    Ok(SlabRt { r: fwd.down(0), t: fwd.up(last), r_rev: rev.up(last), t_rev: rev.down(0) })
}

/// `(r, t)` for incidence from the left half-space.
pub fn slab_rt(stack: &LayerStack, mode: &ModeIndex) -> Result<(Complex64, Complex64)> {
    let rt = slab_rt_full(stack, mode)?;
    Ok((rt.r, rt.t))
}

/// Amplitudes of the four scattered dyads for one polarization, field region
/// `f` and source region `s`, with absolute `exp(+-ihz)` phases:
///
/// | field | coefficient of |
/// |---|---|
/// | `a` | `X(r, +h_f) X(s, -h_s)` |
/// | `b` | `X(r, +h_f) X(s, +h_s)` |
/// | `c` | `X(r, -h_f) X(s, -h_s)` |
/// | `d` | `X(r, -h_f) X(s, +h_s)` |
///
/// Coefficients that cannot exist are exactly zero: no up-going wave in the
/// left half-space (`a = b = 0`), no down-going wave in the right one
/// (`c = d = 0`), no returning wave from a left source's downward emission
/// (`b = d = 0`) or a right source's upward emission (`a = c = 0`).
/// For `f != s` the coefficients include the unscattered continuation of the
/// direct wave, which is absent from the free part in that case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringCoeffs {
    pub polarization: Polarization,
    pub field: Region,
    pub source: Region,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

pub fn scattering_coefficients(stack: &LayerStack, mode: &ModeIndex, f: Region, s: Region) -> Result<ScatteringCoeffs> {
    mode.validate()?;
    let fi = stack.region_index(f)?;
    let si = stack.region_index(s)?;
    let solver = ModeSolver::new(stack, mode.omega, mode.lambda, mode.polarization)?;
    let last = solver.num_regions() - 1;
    let i = Complex64::i();
    let (hs, hf) = (solver.h[si], solver.h[fi]);
    let ref_up_f = (-i * hf * solver.up_reference(fi)).exp();
    let ref_dn_f = (i * hf * solver.down_reference(fi)).exp();
    let (mut a, mut b, mut c, mut d) = (ZERO, ZERO, ZERO, ZERO);
    if si < last {
        let up = solver.source_response(si, Emission::Up);
        let src = (i * hs * solver.z[si]).exp();
        if fi > 0 {
            a = up.up(fi) * src * ref_up_f;
        }
        if fi < last {
            c = up.down(fi) * src * ref_dn_f;
        }
    }
    if si > 0 {
        let dn = solver.source_response(si, Emission::Down);
        let src = (-i * hs * solver.z[si - 1]).exp();
        if fi > 0 {
            b = dn.up(fi) * src * ref_up_f;
        }
        if fi < last {
            d = dn.down(fi) * src * ref_dn_f;
        }
    }
    Ok(ScatteringCoeffs { polarization: mode.polarization, field: f, source: s, a, b, c, d })
}
