//! Mode-resolved electromagnetics of absorbing planar multilayers.
//!
//! The crate computes, for a stack of homogeneous dielectric layers between two
//! half-spaces with complex, frequency-dependent permittivities:
//!
//! * the free and scattering dyadic Green tensors in the cylindrical TE/TM
//!   vector-wave basis ([`green`]),
//! * the per-mode reflection and transmission coefficients that enter the
//!   input-output relations of the quantized field ([`iorel`]),
//! * the noise kernels that carry the absorption-induced field contributions,
//!   together with the balance checks tying them to `1 - |r|^2 - |t|^2`,
//! * surface-guided-wave poles in the complex transverse-wavenumber plane.
//!
//! Geometry: the stack occupies `-L/2 <= z <= L/2`. The half-space `z < -L/2`
//! is the *left* region, `z > L/2` the *right* region. All fields use the
//! `exp(-i omega t)` time convention.

pub mod error;
pub mod green;
pub mod iorel;
pub mod media;
pub mod numerics;
pub mod stack;
pub mod units;
pub mod waves;

pub use error::{Error, Result};
pub use media::{DispersionModel, Oscillator, PermittivityValue};
pub use numerics::{Complex3Tensor, QuadratureSpec};
pub use stack::{Layer, LayerStack, Region};
pub use units::Units;
pub use waves::{CylPoint, Direction, ModeIndex, Parity, Polarization};

pub use num_complex::Complex64;
