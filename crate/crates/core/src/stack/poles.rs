//! Characteristic function whose zeros are the guided and surface modes.

use num_complex::Complex64;

use super::fresnel::admittance;
use super::{LayerStack, StackSample};
use crate::error::Result;
use crate::numerics::axial_wavenumber_from_k2;
use crate::waves::Polarization;

/// `D(lambda)` built from the characteristic (Abeles) matrices of the layers,
///
/// `D = Y_R m11 - m21 + Y_L m22 - Y_L Y_R m12`,
///
/// with `Y = h/k0` (TE) or `h/(eps k0)` (TM) and `m = M_N ... M_1`. It vanishes
/// exactly where a field decaying into both half-spaces exists, i.e. at the
/// poles of the reflection coefficient. Each layer matrix is divided by
/// `exp(|Im delta|)`, a positive factor that leaves the zeros and the phase of
/// `D` untouched but prevents overflow.
#[derive(Debug, Clone)]
pub struct CharacteristicFunction {
    sample: StackSample,
    pol: Polarization,
}

impl CharacteristicFunction {
    pub fn new(sample: StackSample, pol: Polarization) -> Self {
        Self { sample, pol }
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        let k0 = self.sample.k0;
        let y = |j: usize| {
            let eps = self.sample.eps[j];
            let h = axial_wavenumber_from_k2(eps * (k0 * k0), lambda);
            (admittance(self.pol, eps, h) / k0, h)
        };
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut m = [[one, zero], [zero, one]];
        for (i, d) in self.sample.thickness.iter().enumerate() {
            let (yj, h) = y(i + 1);
            let delta = h * d;
            let scale = (-delta.im.abs()).exp();
            let (cd, sd) = (delta.cos() * scale, delta.sin() * scale);
            // sin(delta)/Y stays finite as Y -> 0 because sin(delta) ~ delta ~ h
            let s_over_y = if yj.norm() == 0.0 {
                match self.pol {
                    Polarization::Te => Complex64::new(d * k0, 0.0) * scale,
                    Polarization::Tm => self.sample.eps[i + 1] * d * k0 * scale,
                }
            } else {
                sd / yj
            };
            let layer = [[cd, Complex64::i() * s_over_y], [Complex64::i() * yj * sd, cd]];
            m = [
                [
                    layer[0][0] * m[0][0] + layer[0][1] * m[1][0],
                    layer[0][0] * m[0][1] + layer[0][1] * m[1][1],
                ],
                [
                    layer[1][0] * m[0][0] + layer[1][1] * m[1][0],
                    layer[1][0] * m[0][1] + layer[1][1] * m[1][1],
                ],
            ];
        }
        let (yl, _) = y(0);
        let (yr, _) = y(self.sample.eps.len() - 1);
        yr * m[0][0] - m[1][0] + yl * m[1][1] - yl * yr * m[0][1]
    }
}

/// Convenience wrapper evaluating `D` at one complex `lambda`.
pub fn characteristic_function(stack: &LayerStack, omega: f64, pol: Polarization, lambda: Complex64) -> Result<Complex64> {
    Ok(CharacteristicFunction::new(stack.sample(omega)?, pol).eval(lambda))
}
