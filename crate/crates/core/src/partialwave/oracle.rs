//! Brute-force on-axis density from the spherical-mode expansion.
//!
//! Each vector basis mode (TE, l ≥ 1) is passed through the full-hemisphere
//! map and the radial field of the result is evaluated on the axis. The
//! squared magnitudes summed over the basis, divided by the same sum for the
//! unmapped basis, give the normalized density for a radial dipole.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QedError, Result};
use crate::modefield::{DipoleOrientation, MirrorGeometry};
use crate::specfun::sph_bessel_j_array;

use super::HemisphereMap;

/// Default truncation: max(⌈k0|z|⌉ + 40, 150). The basis completeness error
/// is about sin²(a)/l_max, so short truncations visibly bias the antinode.
pub fn default_oracle_l_max(z_wavelengths: f64) -> usize {
    ((2.0 * PI * z_wavelengths.abs()).ceil() as usize + 40).max(150)
}

/// On-axis radial field weights of the TE (l, m = 0) modes,
/// √(l(l+1)) j_l(kr)/(kr) Y_{l,0}(axis), with index 0 unused.
///
/// The hemisphere map places the mirror on the θ < π/2 side while the density
/// integral puts it at negative z, so the field is read at the mirror image
/// of the atom position: the sign (−1)^l applies for z > 0.
pub fn oracle_weights(z_wavelengths: f64, l_max: usize) -> Result<Vec<f64>> {
    let kr = 2.0 * PI * z_wavelengths.abs();
    let mut w = vec![0.0; l_max + 1];
    if kr == 0.0 {
        if l_max >= 1 {
            // j_1(x)/x → 1/3
            w[1] = 2f64.sqrt() / 3.0 * (3.0 / (4.0 * PI)).sqrt();
        }
        return Ok(w);
    }
    let j = sph_bessel_j_array(l_max, kr)?;
    for l in 1..=l_max {
        let lf = l as f64;
        let flip = if z_wavelengths > 0.0 && l % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        w[l] = flip * (lf * (lf + 1.0)).sqrt() * j[l] / kr * ((2.0 * lf + 1.0) / (4.0 * PI)).sqrt();
    }
    Ok(w)
}

/// Normalized vacuum density on the axis for a radial dipole, from the
/// partial-wave expansion. `geom` must be a full hemisphere with ρ = 1, or
/// ρ = 0 for the mirror-free reference.
pub fn oracle_density(
    geom: &MirrorGeometry,
    d: &DipoleOrientation,
    z_wavelengths: f64,
    l_max: Option<usize>,
) -> Result<f64> {
    if geom.alpha() < PI / 2.0 {
        return Err(QedError::param(
            "alpha",
            "the partial-wave oracle covers the full hemisphere only",
        ));
    }
    if geom.rho() != 0.0 && geom.rho() != 1.0 {
        return Err(QedError::param(
            "rho",
            "the partial-wave oracle needs rho = 0 or rho = 1",
        ));
    }
    if (d.vector()[2].abs() - 1.0).abs() > 1e-12 {
        return Err(QedError::param(
            "dipole",
            "the partial-wave oracle needs a radial (axial) dipole",
        ));
    }
    if !z_wavelengths.is_finite() {
        return Err(QedError::param("z", "position must be finite"));
    }
    let l_max = l_max.unwrap_or_else(|| default_oracle_l_max(z_wavelengths));
    if l_max < 1 {
        return Err(QedError::param("l_max", "need at least one vector mode"));
    }
    let kr = 2.0 * PI * z_wavelengths.abs();
    if (l_max as f64) < kr + 40.0 {
        log::warn!("oracle_density: l_max = {l_max} truncates the expansion at kr = {kr:.3}");
    }
    let w = oracle_weights(z_wavelengths, l_max)?;
    let free: f64 = w.iter().map(|x| x * x).sum();
    if geom.rho() == 0.0 {
        return Ok(1.0);
    }
    // the TE (l, 0) angular spectrum is ∂θY_{l,0} ∝ Y_{l,1}, so the mask acts
    // through the m = 1 overlaps
    let map = HemisphereMap::new(l_max, geom.a()).channel(1)?;
    let mapped: f64 = (1..=l_max)
        .into_par_iter()
        .map(|l0| {
            let f: Complex64 = (1..=l_max).map(|lp| map.entry(lp, l0) * w[lp]).sum();
            f.norm_sqr()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(mapped / free)
}
