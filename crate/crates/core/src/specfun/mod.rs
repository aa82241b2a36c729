//! Special functions: spherical Bessel/Hankel, associated Legendre and
//! spherical harmonics, vector multipole fields, sine/cosine integrals.
//!
//! Everything here is a pure function of its arguments.

pub mod bessel;
pub mod legendre;
pub mod multipole;
pub mod sici;

pub use bessel::{
    sph_bessel_j, sph_bessel_j_array, sph_bessel_y, sph_bessel_y_array, sph_hankel1,
    sph_hankel1_array,
};
pub use legendre::{assoc_legendre, sph_harm, sph_harm_dtheta, LegendreTable, SphericalIndex};
pub use multipole::{multipole_field, vector_harmonic, MultipoleKind, RadialKind, SphericalVector};
pub use sici::{aux_f, aux_g, cos_int, sin_int};
