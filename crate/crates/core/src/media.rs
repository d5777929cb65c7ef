//! Frequency-dependent complex permittivity of homogeneous media.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Units;

/// One Lorentz term `omega_p^2 / (omega_0^2 - omega^2 - i gamma omega)`.
/// `omega_0 = 0` gives a Drude term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Oscillator {
    pub omega_p: f64,
    pub omega_0: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DispersionModel {
    ConstantComplex(ConstantParams),
    DrudeLorentz(DrudeLorentzParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantParams {
    pub eps_re: f64,
    #[serde(default)]
    pub eps_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrudeLorentzParams {
    pub eps_inf: f64,
    pub oscillators: Vec<Oscillator>,
}

/// A permittivity sample at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermittivityValue {
    pub eps: Complex64,
}

impl PermittivityValue {
    /// Medium wavenumber `k = sqrt(eps) omega / c` (principal root, `Im k >= 0`).
    pub fn wavenumber(&self, omega: f64, units: Units) -> Complex64 {
        self.eps.sqrt() * units.k0(omega)
    }
}

impl DispersionModel {
    pub fn constant(eps: Complex64) -> Self {
        DispersionModel::ConstantComplex(ConstantParams { eps_re: eps.re, eps_im: eps.im })
    }

    pub fn real(eps: f64) -> Self {
        Self::constant(Complex64::new(eps, 0.0))
    }

    pub fn vacuum() -> Self {
        Self::real(1.0)
    }

    pub fn drude_lorentz(eps_inf: f64, oscillators: Vec<Oscillator>) -> Self {
        DispersionModel::DrudeLorentz(DrudeLorentzParams { eps_inf, oscillators })
    }

    /// Checks the passivity invariants; returns every violation found.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        match self {
            DispersionModel::ConstantComplex(p) => {
                if !p.eps_re.is_finite() || !p.eps_im.is_finite() {
                    problems.push("permittivity must be finite".to_string());
                }
                if p.eps_im < 0.0 {
                    problems.push(format!("Im eps must be >= 0 (passive medium), got {}", p.eps_im));
                }
            }
            DispersionModel::DrudeLorentz(p) => {
                if !p.eps_inf.is_finite() {
                    problems.push("eps_inf must be finite".to_string());
                }
                for (i, o) in p.oscillators.iter().enumerate() {
                    if !(o.gamma > 0.0) {
                        problems.push(format!("oscillator {i}: gamma must be > 0, got {}", o.gamma));
                    }
                    if !(o.omega_p >= 0.0) {
                        problems.push(format!("oscillator {i}: omega_p must be >= 0, got {}", o.omega_p));
                    }
                    if !(o.omega_0 >= 0.0) {
                        problems.push(format!("oscillator {i}: omega_0 must be >= 0, got {}", o.omega_0));
                    }
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(problems.join("; ")))
        }
    }

    pub fn permittivity(&self, omega: f64) -> Result<PermittivityValue> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Domain(format!("frequency must be > 0, got {omega}")));
        }
        Ok(PermittivityValue { eps: self.eps_unchecked(omega) })
    }

    pub(crate) fn eps_unchecked(&self, omega: f64) -> Complex64 {
        match self {
            DispersionModel::ConstantComplex(p) => Complex64::new(p.eps_re, p.eps_im),
            DispersionModel::DrudeLorentz(p) => {
                let mut eps = Complex64::new(p.eps_inf, 0.0);
                for o in &p.oscillators {
                    let denom = Complex64::new(o.omega_0 * o.omega_0 - omega * omega, -o.gamma * omega);
                    eps += o.omega_p * o.omega_p / denom;
                }
                eps
            }
        }
    }

    /// True when `Im eps` is exactly zero at every frequency.
    pub fn is_lossless(&self) -> bool {
        match self {
            DispersionModel::ConstantComplex(p) => p.eps_im == 0.0,
            DispersionModel::DrudeLorentz(p) => p.oscillators.iter().all(|o| o.omega_p == 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_model() {
        let m = DispersionModel::real(2.25);
        assert_eq!(m.permittivity(1e15).unwrap().eps, Complex64::new(2.25, 0.0));
    }

    #[test]
    fn resonance_value() {
        let o = Oscillator { omega_p: 2.0e15, omega_0: 5.0e15, gamma: 3.0e13 };
        let m = DispersionModel::drude_lorentz(1.5, vec![o]);
        let eps = m.permittivity(5.0e15).unwrap().eps;
        let expect = Complex64::new(1.5, o.omega_p * o.omega_p / (o.gamma * o.omega_0));
        assert!((eps - expect).norm() <= 1e-12 * expect.norm());
    }

    #[test]
    fn matches_direct_formula() {
        let (wp, w0, g, w): (f64, f64, f64, f64) = (1.5e16, 8e15, 1e14, 4e15);
        let m = DispersionModel::drude_lorentz(1.0, vec![Oscillator { omega_p: wp, omega_0: w0, gamma: g }]);
        let eps = m.permittivity(w).unwrap().eps;
        // expanded real/imaginary parts of the Lorentz term
        let dr = w0 * w0 - w * w;
        let den = dr * dr + g * g * w * w;
        let expect = Complex64::new(1.0 + wp * wp * dr / den, wp * wp * g * w / den);
        assert!((eps - expect).norm() <= 1e-14 * expect.norm());
    }

    #[test]
    fn rejects_nonpositive_frequency() {
        assert!(DispersionModel::vacuum().permittivity(0.0).is_err());
        assert!(DispersionModel::vacuum().permittivity(-1.0).is_err());
    }

    #[test]
    fn validation_lists_all_violations() {
        let m = DispersionModel::drude_lorentz(
            1.0,
            vec![
                Oscillator { omega_p: -1.0, omega_0: 1.0, gamma: 0.0 },
                Oscillator { omega_p: 1.0, omega_0: 1.0, gamma: -2.0 },
            ],
        );
        let Err(Error::Domain(msg)) = m.validate() else { panic!() };
        assert_eq!(msg.matches("oscillator").count(), 3);
        assert!(DispersionModel::constant(Complex64::new(1.0, -0.1)).validate().is_err());
    }

    #[test]
    fn high_frequency_limit() {
        let m = DispersionModel::drude_lorentz(
            2.0,
            vec![Oscillator { omega_p: 1e16, omega_0: 3e15, gamma: 1e14 }, Oscillator { omega_p: 4e15, omega_0: 0.0, gamma: 5e13 }],
        );
        let eps = m.permittivity(1e3 * 1e16).unwrap().eps;
        assert!((eps - 2.0).norm() < 1e-4);
    }

    proptest! {
        #[test]
        fn passivity(
            eps_inf in 0.5f64..10.0,
            wp in 0.0f64..3e16, w0 in 0.0f64..1e16, g in 1e12f64..1e15,
            wp2 in 0.0f64..3e16, w02 in 0.0f64..1e16, g2 in 1e12f64..1e15,
            log_w in 13.0f64..17.0,
        ) {
            let m = DispersionModel::drude_lorentz(eps_inf, vec![
                Oscillator { omega_p: wp, omega_0: w0, gamma: g },
                Oscillator { omega_p: wp2, omega_0: w02, gamma: g2 },
            ]);
            m.validate().unwrap();
            let eps = m.permittivity(10f64.powf(log_w)).unwrap().eps;
            prop_assert!(eps.im >= 0.0);
        }
    }
}
