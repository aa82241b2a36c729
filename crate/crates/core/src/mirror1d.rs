//! One-dimensional mirror model: a single standing-wave mode terminated by a
//! perfect mirror a distance R from the atom. All outputs are ratios to the
//! free-space 1D decay rate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{QedError, Result};

/// Mirror distance expressed as the phase a = k0 R (radians).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PhaseDistance(f64);

impl PhaseDistance {
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(QedError::param(
                "a",
                format!("phase distance must be finite and >= 0, got {a}"),
            ));
        }
        Ok(PhaseDistance(a))
    }

    /// a = 2π R/λ.
    pub fn from_wavelengths(r_over_lambda: f64) -> Result<Self> {
        Self::new(2.0 * PI * r_over_lambda)
    }

    /// a = n π, the standing-wave node at the focus.
    pub fn node(n: u32) -> Self {
        PhaseDistance(n as f64 * PI)
    }

    /// a = (n + 1/2) π, the antinode at the focus.
    pub fn antinode(n: u32) -> Self {
        PhaseDistance((n as f64 + 0.5) * PI)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn in_wavelengths(self) -> f64 {
        self.0 / (2.0 * PI)
    }
}

impl TryFrom<f64> for PhaseDistance {
    type Error = QedError;
    fn try_from(a: f64) -> Result<Self> {
        Self::new(a)
    }
}

impl From<PhaseDistance> for f64 {
    fn from(a: PhaseDistance) -> f64 {
        a.0
    }
}

/// |e_k(z)|² scaled so that its average over many wavelengths is 1.
///
/// `z_in_wavelengths` is measured from the focus (atom side positive), so the
/// mirror sits at z = -R.
pub fn mode_intensity_1d(k_over_k0: f64, z_in_wavelengths: f64, a: PhaseDistance) -> Result<f64> {
    if !(k_over_k0.is_finite() && k_over_k0 > 0.0) {
        return Err(QedError::domain(
            "mode_intensity_1d",
            format!("k/k0 must be positive, got {k_over_k0}"),
        ));
    }
    if !z_in_wavelengths.is_finite() {
        return Err(QedError::domain("mode_intensity_1d", "z must be finite"));
    }
    let kz = 2.0 * PI * z_in_wavelengths;
    if kz < -a.value() * (1.0 + 1e-12) {
        return Err(QedError::domain(
            "mode_intensity_1d",
            "z lies behind the mirror",
        ));
    }
    let phase = k_over_k0 * (a.value() + kz);
    Ok(1.0 - (2.0 * phase).cos())
}

/// γ/γ_FS at the focus.
pub fn gamma_1d(a: PhaseDistance) -> f64 {
    1.0 - (2.0 * a.value()).cos()
}

/// Δ_e/γ_FS at the focus.
pub fn shift_1d(a: PhaseDistance) -> f64 {
    (2.0 * a.value()).sin()
}
