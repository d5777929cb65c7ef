//! Input-output relations: field kernels at the stack surfaces, per-mode
//! reflection and transmission, absorption-noise kernels, balance checks and
//! surface-guided-wave poles.

mod noise;
mod poles;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::green::{green_part, GreenOptions, GreenPartLabel, GreenSample, SourcePart};
use crate::numerics::{axial_wavenumber_from_k2, Complex3Tensor};
use crate::stack::{scattering_coefficients, LayerStack, Region};
use crate::units::Units;
use crate::waves::{ModeIndex, Polarization};

pub use noise::{energy_balance, noise_kernels, DepthIntegrals, EnergyBalance, LayerNoiseKernel, NoiseKernelSet};
pub use poles::{find_surface_poles, Pole, PoleSearch};

/// Strength `omega sqrt(hbar eps0 eps'' / pi)` of the noise current density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseAmplitude {
    pub value: f64,
}

pub fn noise_amplitude(eps_im: f64, omega: f64) -> Result<NoiseAmplitude> {
    noise_amplitude_units(eps_im, omega, Units::Si)
}

pub fn noise_amplitude_units(eps_im: f64, omega: f64, units: Units) -> Result<NoiseAmplitude> {
    if !(eps_im >= 0.0) || !eps_im.is_finite() {
        return Err(Error::Domain(format!("Im eps must be >= 0, got {eps_im}")));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("frequency must be > 0, got {omega}")));
    }
    Ok(NoiseAmplitude { value: omega * (units.hbar() * units.eps0() * eps_im / std::f64::consts::PI).sqrt() })
}

/// Stack surface at which a field kernel is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Surface {
    /// `z = -L/2`, seen from the left half-space.
    Left,
    /// `z = +L/2`, seen from the right half-space.
    Right,
}

/// Which source population a kernel collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelPart {
    /// Sources on the same side, propagating freely (the input field).
    In,
    /// Sources on the same side, returned by the stack.
    Refl,
    /// Sources on the far side, transmitted through the stack.
    Transm,
    /// Noise sources inside layer `i` (zero-based).
    Layer(usize),
}

/// Direction of transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transit {
    LeftToRight,
    RightToLeft,
}

impl Surface {
    pub fn region(self) -> Region {
        match self {
            Surface::Left => Region::Left,
            Surface::Right => Region::Right,
        }
    }

    pub fn z(self, stack: &LayerStack) -> f64 {
        let z = stack.interfaces();
        match self {
            Surface::Left => z[0],
            Surface::Right => z[z.len() - 1],
        }
    }
}

/// Decomposition label used by [`field_kernel`] for a surface and part.
pub fn kernel_label(surface: Surface, part: KernelPart) -> GreenPartLabel {
    let field = surface.region();
    let source = match (surface, part) {
        (_, KernelPart::In) => SourcePart::Free,
        (Surface::Left, KernelPart::Refl) => SourcePart::Region(Region::Left),
        (Surface::Right, KernelPart::Refl) => SourcePart::Region(Region::Right),
        (Surface::Left, KernelPart::Transm) => SourcePart::Region(Region::Right),
        (Surface::Right, KernelPart::Transm) => SourcePart::Region(Region::Left),
        (_, KernelPart::Layer(i)) => SourcePart::Region(Region::Layer(i)),
    };
    GreenPartLabel { field, source }
}

/// `i omega mu0 G_part(r, s)` with `r = (r_perp, z_surface)`: the kernel that
/// maps a current density at `s` to the field on the surface.
pub fn field_kernel(
    stack: &LayerStack,
    omega: f64,
    surface: Surface,
    part: KernelPart,
    r_perp: [f64; 2],
    s: [f64; 3],
    opts: &GreenOptions,
) -> Result<GreenSample> {
    if let KernelPart::Layer(i) = part {
        if i >= stack.num_layers() {
            return Err(Error::RegionMismatch(format!("layer {} requested but the stack has {}", i + 1, stack.num_layers())));
        }
    }
    let r = [r_perp[0], r_perp[1], surface.z(stack)];
    let mut g = green_part(stack, omega, kernel_label(surface, part), r, s, opts)?;
    let f = Complex64::new(0.0, omega * stack.units.mu0());
    g.value = g.value * f;
    g.error_bound *= f.norm();
    g.truncation_estimate *= f.norm();
    Ok(g)
}

/// Per-mode reflection and transmission from both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients {
    pub mode: ModeIndex,
    pub r: Complex64,
    pub t: Complex64,
    pub t_rev: Complex64,
    pub r_rev: Complex64,
}

struct SpectralKernels {
    free: Complex64,
    scattered: Complex64,
}

fn ratio(k: SpectralKernels, what: &str) -> Result<Complex64> {
    if !(k.free.norm() >= 1e-300) || !k.free.re.is_finite() || !k.free.im.is_finite() {
        return Err(Error::IllPosed(format!("{what}: free kernel magnitude {:e} cannot be inverted", k.free.norm())));
    }
    let v = k.scattered / k.free;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::IllPosed(format!("{what}: kernel ratio is not finite")));
    }
    Ok(v)
}

fn axial(stack: &LayerStack, mode: &ModeIndex, region: Region) -> Result<Complex64> {
    let eps = stack.medium(region)?.permittivity(mode.omega)?.eps;
    let k0 = stack.units.k0(mode.omega);
    Ok(axial_wavenumber_from_k2(eps * (k0 * k0), Complex64::new(mode.lambda, 0.0)))
}

/// Spectral kernel `exp(i h (z - z'))`-type factor written as a product of the
/// two absolute vector-wave phases, as they appear in the mode expansion.
fn phase(h: Complex64, z: f64) -> Complex64 {
    (Complex64::i() * h * z).exp()
}

/// Mode-diagonal reflection coefficient for incidence from the left: the
/// returned-wave kernel divided by the incident free kernel, both taken with
/// field and source on the surface `z = -L/2`.
pub fn reflection_coeff(stack: &LayerStack, mode: &ModeIndex) -> Result<Complex64> {
    reflection_coeff_side(stack, mode, Surface::Left)
}

pub fn reflection_coeff_side(stack: &LayerStack, mode: &ModeIndex, side: Surface) -> Result<Complex64> {
    let region = side.region();
    let z = side.z(stack);
    let h = axial(stack, mode, region)?;
    let sc = scattering_coefficients(stack, mode, region, region)?;
    let k = match side {
        // free: X(r, +h) X(s, -h) for z > z'; returned: c X(r, -h) X(s, -h)
        Surface::Left => SpectralKernels { free: phase(h, z) * phase(-h, z), scattered: sc.c * phase(-h, z) * phase(-h, z) },
        // free: X(r, -h) X(s, +h) for z < z'; returned: b X(r, +h) X(s, +h)
        Surface::Right => SpectralKernels { free: phase(-h, z) * phase(h, z), scattered: sc.b * phase(h, z) * phase(h, z) },
    };
    ratio(k, "reflection coefficient")
}

/// Mode-diagonal transmission coefficient: transmitted kernel on the exit
/// surface divided by the incident free kernel on the entrance surface.
pub fn transmission_coeff(stack: &LayerStack, mode: &ModeIndex, transit: Transit) -> Result<Complex64> {
    let (from, to) = match transit {
        Transit::LeftToRight => (Surface::Left, Surface::Right),
        Transit::RightToLeft => (Surface::Right, Surface::Left),
    };
    let (z_in, z_out) = (from.z(stack), to.z(stack));
    let h_in = axial(stack, mode, from.region())?;
    let h_out = axial(stack, mode, to.region())?;
    let sc = scattering_coefficients(stack, mode, to.region(), from.region())?;
    let k = match transit {
        Transit::LeftToRight => SpectralKernels {
            free: phase(h_in, z_in) * phase(-h_in, z_in),
            scattered: sc.a * phase(h_out, z_out) * phase(-h_in, z_in),
        },
        Transit::RightToLeft => SpectralKernels {
            free: phase(-h_in, z_in) * phase(h_in, z_in),
            scattered: sc.d * phase(-h_out, z_out) * phase(h_in, z_in),
        },
    };
    ratio(k, "transmission coefficient")
}

pub fn mode_coefficients(stack: &LayerStack, mode: &ModeIndex) -> Result<ModeCoefficients> {
    Ok(ModeCoefficients {
        mode: *mode,
        r: reflection_coeff(stack, mode)?,
        t: transmission_coeff(stack, mode, Transit::LeftToRight)?,
        t_rev: transmission_coeff(stack, mode, Transit::RightToLeft)?,
        r_rev: reflection_coeff_side(stack, mode, Surface::Right)?,
    })
}

/// `2x2` matrix in the (TE, TM) basis.
pub type PolarizationMatrix = [[Complex64; 2]; 2];

/// Reflection and transmission matrices in the (TE, TM) basis. Planar stacks
/// never convert one polarization into the other, so the off-diagonal
/// entries are exact zeros.
pub fn polarization_matrices(stack: &LayerStack, omega: f64, lambda: f64) -> Result<(PolarizationMatrix, PolarizationMatrix)> {
    let zero = Complex64::new(0.0, 0.0);
    let mut r = [[zero; 2]; 2];
    let mut t = [[zero; 2]; 2];
    for (i, pol) in Polarization::BOTH.into_iter().enumerate() {
        let m = ModeIndex::new(omega, lambda, pol);
        r[i][i] = reflection_coeff(stack, &m)?;
        t[i][i] = transmission_coeff(stack, &m, Transit::LeftToRight)?;
    }
    Ok((r, t))
}

/// Convenience: the scattering tensor scaled to a kernel.
pub fn kernel_scale(stack: &LayerStack, omega: f64, g: &Complex3Tensor) -> Complex3Tensor {
    *g * Complex64::new(0.0, omega * stack.units.mu0())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::DispersionModel;
    use crate::stack::{interface_fresnel_k0, slab_rt_full, Layer};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn noise_amplitude_values() {
        assert_eq!(noise_amplitude(0.0, 1e15).unwrap().value, 0.0);
        let a = noise_amplitude(0.1, 1e15).unwrap().value;
        assert!((noise_amplitude(0.4, 1e15).unwrap().value - 2.0 * a).abs() <= 1e-15 * a);
        let direct = 1e15 * (1.054_571_817e-34 * 8.854_187_812_8e-12 * 0.1 / std::f64::consts::PI).sqrt();
        assert!((a - direct).abs() <= 1e-14 * direct);
        assert!(noise_amplitude(-1e-3, 1e15).is_err());
        assert!(noise_amplitude(0.1, 0.0).is_err());
    }

    fn stack3() -> LayerStack {
        LayerStack::new(
            DispersionModel::real(1.0),
            vec![
                Layer { medium: DispersionModel::constant(c(2.1, 0.2)), thickness: 0.7 },
                Layer { medium: DispersionModel::constant(c(-3.0, 0.5)), thickness: 0.1 },
                Layer { medium: DispersionModel::constant(c(4.0, 0.0)), thickness: 0.9 },
            ],
            DispersionModel::real(2.25),
        )
        .unwrap()
        .with_units(Units::Natural)
    }

    #[test]
    fn kernel_ratios_agree_with_recursion() {
        let s = stack3();
        for pol in Polarization::BOTH {
            for &l in &[0.0, 0.5, 1.2, 1.8, 3.0] {
                let m = ModeIndex::new(1.0, l, pol);
                let mc = mode_coefficients(&s, &m).unwrap();
                let rt = slab_rt_full(&s, &m).unwrap();
                for (a, b) in [(mc.r, rt.r), (mc.t, rt.t), (mc.r_rev, rt.r_rev), (mc.t_rev, rt.t_rev)] {
                    assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300), "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn half_space_reflection_is_fresnel() {
        let (ea, eb) = (c(1.5, 0.0), c(3.0, 0.7));
        let s = LayerStack::half_spaces(DispersionModel::constant(ea), DispersionModel::constant(eb)).with_units(Units::Natural);
        for pol in Polarization::BOTH {
            let (r, _) = interface_fresnel_k0(ea, eb, 1.0, c(0.9, 0.0), pol).unwrap();
            let got = reflection_coeff(&s, &ModeIndex::new(1.0, 0.9, pol)).unwrap();
            assert!((got - r).norm() <= 1e-12 * r.norm());
        }
    }

    #[test]
    fn empty_stack() {
        let s = LayerStack::half_spaces(DispersionModel::real(1.0), DispersionModel::real(1.0)).with_units(Units::Natural);
        let m = ModeIndex::new(1.0, 0.4, Polarization::Tm);
        assert_eq!(reflection_coeff(&s, &m).unwrap(), c(0.0, 0.0));
        assert!((transmission_coeff(&s, &m, Transit::LeftToRight).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn deep_evanescent_inversion_is_fenced() {
        let s = LayerStack::slab(DispersionModel::real(1.0), DispersionModel::real(2.0), 100.0).unwrap().with_units(Units::Natural);
        let m = ModeIndex::new(1.0, 40.0, Polarization::Te);
        assert!(matches!(reflection_coeff(&s, &m), Err(Error::IllPosed(_))));
    }

    #[test]
    fn off_diagonal_polarization_entries_vanish() {
        let (r, t) = polarization_matrices(&stack3(), 1.0, 0.7).unwrap();
        for m in [r, t] {
            assert_eq!(m[0][1], c(0.0, 0.0));
            assert_eq!(m[1][0], c(0.0, 0.0));
            assert!(m[0][0].norm() > 0.0 && m[1][1].norm() > 0.0);
        }
    }
}
