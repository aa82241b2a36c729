//! Electric (TE) and magnetic (TM) multipole fields in spherical components.
//!
//! TM: `e = g_l(kr) X_{l,m}`, transverse to `r̂`.
//! TE: `e = -(1/k) ∇×(f_l(kr) X_{l,m})`, whose radial part is
//! `-i √(l(l+1)) f_l Y_{l,m} / (kr)`. The overall phase is chosen so that the
//! radial component carries the `-i` and the field stays divergence free.

use num_complex::Complex64;

use super::bessel::{derivative_from_array, sph_bessel_j_array, sph_hankel1_array};
use super::legendre::{LegendreTable, SphericalIndex};
use crate::error::{QedError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum MultipoleKind {
    TM,
    TE,
}

/// Radial dependence: standing (`j_l`) or outgoing (`h_l^(1)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadialKind {
    Regular,
    Outgoing,
}

/// Complex vector in the local `(r̂, θ̂, φ̂)` basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SphericalVector {
    pub r: Complex64,
    pub theta: Complex64,
    pub phi: Complex64,
}

impl SphericalVector {
    pub fn norm_sqr(&self) -> f64 {
        self.r.norm_sqr() + self.theta.norm_sqr() + self.phi.norm_sqr()
    }
}

/// `m Ȳ_l^m(θ) / sin θ`, continued to the poles.
fn m_over_sin(table: &LegendreTable, l: usize, m: i64) -> f64 {
    let s = table.theta().sin();
    if s.abs() > 1e-12 {
        return m as f64 * table.get(l, m) / s;
    }
    if m.abs() != 1 {
        return 0.0;
    }
    // Ȳ ≈ c sin θ near the pole, so Ȳ/sin θ → ±∂θȲ
    let d = table.get_dtheta(l, m);
    let sign = if table.theta().cos() > 0.0 { 1.0 } else { -1.0 };
    m as f64 * sign * d
}

/// Vector spherical harmonic `X_{l,m} = L Y_{l,m} / √(l(l+1))` as
/// `(θ̂, φ̂)` components; `l >= 1`.
pub fn vector_harmonic(
    idx: SphericalIndex,
    theta: f64,
    phi: f64,
) -> Result<(Complex64, Complex64)> {
    let (l, m) = (idx.l(), idx.m());
    if l == 0 {
        return Err(QedError::domain(
            "vector_harmonic",
            "no vector harmonic for l = 0",
        ));
    }
    let table = LegendreTable::new(l, theta);
    let norm = ((l * (l + 1)) as f64).sqrt();
    let e = Complex64::from_polar(1.0, m as f64 * phi);
    let x_theta = e * (-m_over_sin(&table, l, m) / norm);
    let x_phi = e * Complex64::new(0.0, -table.get_dtheta(l, m) / norm);
    Ok((x_theta, x_phi))
}

/// Multipole field with unit radial coefficient at `(r, θ, φ)`.
pub fn multipole_field(
    kind: MultipoleKind,
    idx: SphericalIndex,
    radial: RadialKind,
    k: f64,
    r: f64,
    theta: f64,
    phi: f64,
) -> Result<SphericalVector> {
    let (l, m) = (idx.l(), idx.m());
    if l == 0 {
        return Err(QedError::domain(
            "multipole_field",
            "vector multipoles start at l = 1",
        ));
    }
    if !(r > 0.0) || !(k > 0.0) {
        return Err(QedError::domain(
            "multipole_field",
            format!("need r > 0 and k > 0, got r = {r}, k = {k}"),
        ));
    }
    let x = k * r;
    let z: Vec<Complex64> = match radial {
        RadialKind::Regular => sph_bessel_j_array(l + 1, x)?
            .into_iter()
            .map(Complex64::from)
            .collect(),
        RadialKind::Outgoing => sph_hankel1_array(l + 1, x)?,
    };
    let zl = z[l];
    // ∂_r[r z_l(kr)] = z_l + kr z_l'
    let dz = zl + derivative_from_array(&z, l, x) * x;

    let table = LegendreTable::new(l, theta);
    let norm = ((l * (l + 1)) as f64).sqrt();
    let e = Complex64::from_polar(1.0, m as f64 * phi);
    let y = e * table.get(l, m);
    let dy = e * table.get_dtheta(l, m);
    let my_sin = e * m_over_sin(&table, l, m);
    let i = Complex64::i();

    Ok(match kind {
        MultipoleKind::TM => SphericalVector {
            r: Complex64::new(0.0, 0.0),
            theta: -zl * my_sin / norm,
            phi: -i * zl * dy / norm,
        },
        MultipoleKind::TE => SphericalVector {
            r: -i * norm * zl * y / x,
            theta: -i * dz * dy / (x * norm),
            phi: dz * my_sin / (x * norm),
        },
    })
}
