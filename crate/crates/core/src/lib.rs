//! QED observables of a two-level dipole near the focus of a spherical
//! mirror: normalized spontaneous-emission rate, excited-state shift and
//! ground-state Casimir–Polder shift, with a partial-wave cross-check.

pub mod error;
pub mod mirror1d;
pub mod modefield;
pub mod observables;
pub mod partialwave;
pub mod quadrature;
pub mod specfun;
pub mod sweep;
