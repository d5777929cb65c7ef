//! Special functions, branch handling, quadrature and root finding.

mod bessel;
mod branch;
mod contour;
mod quadrature;
mod roots;
mod tensor;

pub use bessel::{bessel_j, bessel_j_orders};
pub use branch::{axial_wavenumber, axial_wavenumber_from_k2};
pub use contour::{find_roots_in_rect, winding_number, Rect, RootSearch};
pub use quadrature::{
    gauss_kronrod_adaptive, integrate_spectral, integrate_spectral_path, QuadResult, QuadValue,
    QuadratureSpec, SpectralPath,
};
pub use roots::{find_root_complex, find_root_complex_with, NewtonOptions};
pub use tensor::{CVec3, Complex3Tensor};
