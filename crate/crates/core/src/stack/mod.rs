//! Layer-stack geometry and per-mode scattering amplitudes.
//!
//! Regions are numbered `0..=N+1`: `0` is the left half-space (`z < -L/2`),
//! `1..=N` the layers, `N+1` the right half-space. Interface `i` (`0..=N`)
//! separates region `i` from region `i+1` and sits at `z_i`, with
//! `z_0 = -L/2` and `z_N = +L/2`.

mod fresnel;
mod poles;
mod solver;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::DispersionModel;
use crate::units::Units;

pub use fresnel::{interface_fresnel, interface_fresnel_k0};
pub use poles::{characteristic_function, CharacteristicFunction};
pub use solver::{
    scattering_coefficients, slab_rt, slab_rt_full, Emission, ModeSolver, RegionAmplitudes, ScatteringCoeffs,
    SlabRt,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub medium: DispersionModel,
    /// Thickness in metres (or in units of `c/omega_ref` with natural units).
    pub thickness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerStack {
    pub left: DispersionModel,
    #[serde(default)]
    pub layers: Vec<Layer>,
    pub right: DispersionModel,
    #[serde(default)]
    pub units: Units,
}

/// A region of space. `Layer(i)` is zero-based: `Layer(0)` is the first
/// layer met when moving from the left half-space towards `+z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Left,
    Layer(usize),
    Right,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::Left => write!(f, "left"),
            Region::Layer(i) => write!(f, "layer {}", i + 1),
            Region::Right => write!(f, "right"),
        }
    }
}

impl LayerStack {
    pub fn new(left: DispersionModel, layers: Vec<Layer>, right: DispersionModel) -> Result<Self> {
        let s = Self { left, layers, right, units: Units::Si };
        s.validate()?;
        Ok(s)
    }

    pub fn with_units(mut self, units: Units) -> Self {
        self.units = units;
        self
    }

    /// Two half-spaces in contact at `z = 0`.
    pub fn half_spaces(left: DispersionModel, right: DispersionModel) -> Self {
        Self { left, layers: Vec::new(), right, units: Units::Si }
    }

    /// A single slab of `medium` between two copies of `outside`.
    pub fn slab(outside: DispersionModel, medium: DispersionModel, thickness: f64) -> Result<Self> {
        Self::new(outside.clone(), vec![Layer { medium, thickness }], outside)
    }

    /// Reports every violated invariant at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if let Err(e) = self.left.validate() {
            problems.push(format!("left medium: {e}"));
        }
        if let Err(e) = self.right.validate() {
            problems.push(format!("right medium: {e}"));
        }
        for (i, l) in self.layers.iter().enumerate() {
            if !(l.thickness > 0.0) || !l.thickness.is_finite() {
                problems.push(format!("layer {}: thickness must be > 0, got {}", i + 1, l.thickness));
            }
            if let Err(e) = l.medium.validate() {
                problems.push(format!("layer {}: {e}", i + 1));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidStack(problems.join("; ")))
        }
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn total_thickness(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness).sum()
    }

    /// `z_0 .. z_N`.
    pub fn interfaces(&self) -> Vec<f64> {
        let half = 0.5 * self.total_thickness();
        let mut z = Vec::with_capacity(self.layers.len() + 1);
        let mut acc = -half;
        z.push(acc);
        for (i, l) in self.layers.iter().enumerate() {
            acc += l.thickness;
            // pin the last interface so that the stack stays symmetric in z
            z.push(if i + 1 == self.layers.len() { half } else { acc });
        }
        z
    }

    pub fn region_index(&self, region: Region) -> Result<usize> {
        match region {
            Region::Left => Ok(0),
            Region::Layer(i) if i < self.layers.len() => Ok(i + 1),
            Region::Layer(i) => Err(Error::RegionMismatch(format!(
                "layer {} requested but the stack has {} layers",
                i + 1,
                self.layers.len()
            ))),
            Region::Right => Ok(self.layers.len() + 1),
        }
    }

    pub fn region_at(&self, index: usize) -> Region {
        let n = self.layers.len();
        if index == 0 {
            Region::Left
        } else if index <= n {
            Region::Layer(index - 1)
        } else {
            Region::Right
        }
    }

    pub fn medium(&self, region: Region) -> Result<&DispersionModel> {
        Ok(match region {
            Region::Left => &self.left,
            Region::Right => &self.right,
            Region::Layer(i) => {
                self.region_index(region)?;
                &self.layers[i].medium
            }
        })
    }

    /// Region containing `z`; points on an interface belong to the region below it.
    pub fn region_of(&self, z: f64) -> Region {
        let zs = self.interfaces();
        for (i, zi) in zs.iter().enumerate() {
            if z <= *zi {
                return self.region_at(i);
            }
        }
        Region::Right
    }

    /// Closed z-interval of a region.
    pub fn region_bounds(&self, region: Region) -> Result<(f64, f64)> {
        let j = self.region_index(region)?;
        let zs = self.interfaces();
        let lo = if j == 0 { f64::NEG_INFINITY } else { zs[j - 1] };
        let hi = if j == zs.len() { f64::INFINITY } else { zs[j] };
        Ok((lo, hi))
    }

    pub fn contains(&self, region: Region, z: f64) -> Result<bool> {
        let (lo, hi) = self.region_bounds(region)?;
        Ok(z >= lo && z <= hi)
    }

    pub fn regions(&self) -> Vec<Region> {
        (0..self.layers.len() + 2).map(|j| self.region_at(j)).collect()
    }

    /// True when every medium has `Im eps = 0` identically.
    pub fn is_lossless(&self) -> bool {
        self.left.is_lossless() && self.right.is_lossless() && self.layers.iter().all(|l| l.medium.is_lossless())
    }

    /// Permittivities and geometry at one frequency.
    pub fn sample(&self, omega: f64) -> Result<StackSample> {
        let mut eps = Vec::with_capacity(self.layers.len() + 2);
        eps.push(self.left.permittivity(omega)?.eps);
        for l in &self.layers {
            eps.push(l.medium.permittivity(omega)?.eps);
        }
        eps.push(self.right.permittivity(omega)?.eps);
        Ok(StackSample {
            omega,
            k0: self.units.k0(omega),
            eps,
            z: self.interfaces(),
            thickness: self.layers.iter().map(|l| l.thickness).collect(),
        })
    }

    /// The same stack with adjacent identical layers merged.
    pub fn merged(&self) -> Self {
        let mut layers: Vec<Layer> = Vec::new();
        for l in &self.layers {
            match layers.last_mut() {
                Some(prev) if prev.medium == l.medium => prev.thickness += l.thickness,
                _ => layers.push(l.clone()),
            }
        }
        Self { layers, ..self.clone() }
    }

    /// The stack mirrored through `z = 0`.
    pub fn reversed(&self) -> Self {
        Self {
            left: self.right.clone(),
            layers: self.layers.iter().rev().cloned().collect(),
            right: self.left.clone(),
            units: self.units,
        }
    }
}

/// Stack data evaluated at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct StackSample {
    pub omega: f64,
    pub k0: f64,
    /// Permittivity per region, `0..=N+1`.
    pub eps: Vec<Complex64>,
    /// Interface positions `z_0..z_N`.
    pub z: Vec<f64>,
    /// Layer thicknesses `d_1..d_N`.
    pub thickness: Vec<f64>,
}

impl StackSample {
    pub fn num_layers(&self) -> usize {
        self.thickness.len()
    }

    /// Medium wavenumber per region (principal root, `Im k >= 0`).
    pub fn wavenumbers(&self) -> Vec<Complex64> {
        self.eps.iter().map(|e| e.sqrt() * self.k0).collect()
    }

    pub fn max_abs_k(&self) -> f64 {
        self.wavenumbers().iter().map(|k| k.norm()).fold(0.0, f64::max)
    }

    pub fn is_lossless(&self) -> bool {
        self.eps.iter().all(|e| e.im == 0.0)
    }
}
