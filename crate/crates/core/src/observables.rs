//! Normalized QED observables: decay rate, excited-state shift and the
//! ground-state (Casimir–Polder) shift with its renormalization split.
//!
//! Every quantity is a ratio to the free-space decay rate γ_FS.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{QedError, Result};
use crate::mirror1d::PhaseDistance;
use crate::modefield::{
    cap_phase_integral, make_grid, AngularGrid, DipoleOrientation, Displacement, MirrorGeometry,
};
use crate::quadrature::{GaussRule, KahanSum};
use crate::specfun::{aux_f, aux_g};

/// Default cutoff ratio K/k0.
pub const DEFAULT_KAPPA: f64 = 1e3;

/// Largest κ·a accepted by the direct integral.
pub const MAX_KAPPA_A: f64 = 1e9;

/// Phase distance and cutoff ratio κ = K/k0 for the ground-state shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CasimirParams {
    a: PhaseDistance,
    kappa: f64,
}

impl CasimirParams {
    pub fn new(a: PhaseDistance, kappa: f64) -> Result<Self> {
        if !(a.value() > 0.0) {
            return Err(QedError::param("a", "phase distance must be > 0"));
        }
        if !(kappa.is_finite() && kappa > 1.0) {
            return Err(QedError::param(
                "kappa",
                format!("cutoff ratio must be > 1, got {kappa}"),
            ));
        }
        Ok(CasimirParams { a, kappa })
    }

    pub fn a(&self) -> PhaseDistance {
        self.a
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// γ/γ_FS, Δ_e/γ_FS and Δ^cp/γ_FS at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QedResult {
    pub gamma_bar: f64,
    pub delta_e_bar: f64,
    pub delta_cp_bar: f64,
}

/// Grid fine enough for the position phase at `r` (see
/// `modefield::resolution_warning`), with a floor suited to apertures.
pub fn auto_grid(r: &Displacement) -> Result<AngularGrid> {
    let [x, y, _] = r.wavelengths();
    let n_theta = ((8.0 * r.norm()).ceil() as usize + 32).max(64);
    let n_phi = ((4.0 * PI * x.hypot(y)).ceil() as usize + 32).max(128);
    make_grid(n_theta, n_phi)
}

/// γ̄(r) on a caller-supplied grid.
pub fn decay_rate_on(
    r: &Displacement,
    geom: &MirrorGeometry,
    d: &DipoleOrientation,
    grid: &AngularGrid,
) -> Result<f64> {
    let c = cap_phase_integral(1.0, r, geom, d, grid)?;
    Ok(1.0 - geom.rho() * c.re)
}

/// γ̄(r): the polarized vacuum density at the transition wavenumber.
pub fn decay_rate(r: &Displacement, geom: &MirrorGeometry, d: &DipoleOrientation) -> Result<f64> {
    decay_rate_on(r, geom, d, &auto_grid(r)?)
}

/// Δ̄_e(r) on a caller-supplied grid.
pub fn excited_shift_on(
    r: &Displacement,
    geom: &MirrorGeometry,
    d: &DipoleOrientation,
    grid: &AngularGrid,
) -> Result<f64> {
    let c = cap_phase_integral(1.0, r, geom, d, grid)?;
    Ok(geom.rho() * c.im)
}

/// Δ̄_e(r) = 3 ∫ dΩ/4π (1 − (d̂·Ω̂)²) ρ(θ) sin(2(a + k0 Ω̂·r)).
pub fn excited_shift(
    r: &Displacement,
    geom: &MirrorGeometry,
    d: &DipoleOrientation,
) -> Result<f64> {
    excited_shift_on(r, geom, d, &auto_grid(r)?)
}

/// All three normalized outputs. The ground-state shift uses the
/// full-hemisphere, on-focus form at the mirror's phase distance.
pub fn evaluate(
    r: &Displacement,
    geom: &MirrorGeometry,
    d: &DipoleOrientation,
    kappa: f64,
    grid: &AngularGrid,
) -> Result<QedResult> {
    let c = cap_phase_integral(1.0, r, geom, d, grid)?;
    let p = CasimirParams::new(geom.a(), kappa)?;
    Ok(QedResult {
        gamma_bar: 1.0 - geom.rho() * c.re,
        delta_e_bar: geom.rho() * c.im,
        delta_cp_bar: casimir_decomposition(&p)?.delta_cp,
    })
}

/// ∫_0^κ x/(1+x) sin²(x a) dx for a, κ ≥ 0, by Gauss panels no longer than
/// one period π/a (and no longer than 1/2 near the x = −1 pole).
pub fn lamb_integral(a: f64, kappa: f64) -> Result<f64> {
    if !(a.is_finite() && a >= 0.0 && kappa.is_finite() && kappa >= 0.0) {
        return Err(QedError::domain(
            "lamb_direct",
            format!("need finite a, kappa >= 0, got a = {a}, kappa = {kappa}"),
        ));
    }
    if kappa * a > MAX_KAPPA_A {
        return Err(QedError::domain(
            "lamb_direct",
            format!(
                "kappa * a = {:.3e} exceeds the quadrature limit {MAX_KAPPA_A:.0e}",
                kappa * a
            ),
        ));
    }
    if kappa == 0.0 || a == 0.0 {
        return Ok(0.0);
    }
    let panel = (PI / a).min(0.5);
    let n = (kappa / panel).ceil() as u64;
    let rule = GaussRule::new(12);
    let mut acc = KahanSum::default();
    for i in 0..n {
        let lo = i as f64 * panel;
        let hi = (lo + panel).min(kappa);
        acc.add(rule.integrate(lo, hi, |x| {
            let s = (x * a).sin();
            x / (1.0 + x) * s * s
        }));
    }
    Ok(acc.value())
}

/// Δ_g/γ_FS for a full half-mirror, by direct quadrature.
pub fn lamb_direct(p: &CasimirParams) -> Result<f64> {
    lamb_integral(p.a.value(), p.kappa)
}

/// The direct integral split into self-energy, free-space and mirror parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CasimirDecomposition {
    pub delta_se: f64,
    pub delta_fs: f64,
    pub delta_cp: f64,
}

impl CasimirDecomposition {
    pub fn total(&self) -> f64 {
        self.delta_se + self.delta_fs + self.delta_cp
    }
}

/// Mirror-induced part ½ g(2a) with g(z) = ∫_0^∞ cos t/(t + z) dt. It does
/// not depend on the cutoff and falls off as 1/(8a²).
pub fn delta_cp(a: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(QedError::domain(
            "delta_cp",
            format!("a must be positive, got {a}"),
        ));
    }
    Ok(0.5 * aux_g(2.0 * a)?)
}

fn split(a: f64, kappa: f64) -> Result<CasimirDecomposition> {
    let ka = 2.0 * kappa * a;
    let z = 2.0 * a * (1.0 + kappa);
    let (s, c) = ka.sin_cos();
    // cutoff edge: ∫_z^∞ cos(y − 2a)/y dy
    let edge = aux_g(z)? * c - aux_f(z)? * s;
    Ok(CasimirDecomposition {
        delta_se: 0.5 * kappa * (1.0 - s / ka) - 0.5 * edge,
        delta_fs: -0.5 * kappa.ln_1p(),
        delta_cp: delta_cp(a)?,
    })
}

/// Splits the direct integral and checks that the parts add back up to it
/// (1e-6 relative, with a floor at the rounding level of the parts).
pub fn casimir_decomposition(p: &CasimirParams) -> Result<CasimirDecomposition> {
    let parts = split(p.a.value(), p.kappa)?;
    let direct = lamb_direct(p)?;
    let scale = parts.delta_se.abs() + parts.delta_fs.abs() + parts.delta_cp.abs();
    let tol = 1e-6 * direct.abs() + 1e-13 * scale;
    if (parts.total() - direct).abs() > tol {
        return Err(QedError::Consistency(format!(
            "decomposition sums to {:.12e} but the direct integral is {:.12e} (a = {}, kappa = {})",
            parts.total(),
            direct,
            p.a.value(),
            p.kappa
        )));
    }
    Ok(parts)
}

/// Least-squares line through (ln a, ln |y|).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn log_log_fit(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 2 {
        return Err(QedError::param("a_list", "need at least two points"));
    }
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    if xy.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(QedError::param(
            "a_list",
            "log-log fit needs positive, nonzero samples",
        ));
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    Ok(ScalingFit {
        slope,
        intercept: my - slope * mx,
    })
}

fn check_scaling_grid(a_list: &[f64]) -> Result<()> {
    if a_list.len() < 2 {
        return Err(QedError::param(
            "a_list",
            "need at least two phase distances",
        ));
    }
    if a_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(QedError::param(
            "a_list",
            "phase distances must be strictly increasing",
        ));
    }
    if a_list[0] < 10.0 * PI {
        return Err(QedError::param(
            "a_list",
            format!("all phase distances must be >= 10 pi, got {}", a_list[0]),
        ));
    }
    let span = a_list[a_list.len() - 1] / a_list[0];
    if span < 100.0 {
        return Err(QedError::param(
            "a_list",
            format!("need at least two decades, got a ratio of {span:.3}"),
        ));
    }
    Ok(())
}

/// Fitted exponent of |Δ^cp| against a.
pub fn casimir_scaling(a_list: &[f64]) -> Result<ScalingFit> {
    check_scaling_grid(a_list)?;
    let pts = a_list
        .iter()
        .map(|&a| Ok((a, delta_cp(a)?)))
        .collect::<Result<Vec<_>>>()?;
    log_log_fit(&pts)
}

/// Plane-mirror comparison law 1/a⁴ (unit coefficient).
pub fn plane_mirror_reference(a: f64) -> f64 {
    a.powi(-4)
}

/// Fitted exponent of the plane-mirror comparison law on the same grid.
pub fn plane_mirror_scaling(a_list: &[f64]) -> Result<ScalingFit> {
    check_scaling_grid(a_list)?;
    let pts: Vec<(f64, f64)> = a_list
        .iter()
        .map(|&a| (a, plane_mirror_reference(a)))
        .collect();
    log_log_fit(&pts)
}

/// Ground-state shift in physical units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalShift {
    /// a = 2πR/λ
    pub a: f64,
    pub delta_cp_bar: f64,
    /// γ_FS · Δ^cp/γ_FS
    pub shift_hz: f64,
    /// γ_FS / (2a), the slowest-decaying envelope of the oscillating shift
    pub envelope_hz: f64,
}

/// Converts the mirror-induced ground-state shift to Hz. `gamma_fs_hz` is
/// used as given; no 2π conversion is applied.
pub fn casimir_physical(lambda_nm: f64, gamma_fs_hz: f64, radius_m: f64) -> Result<PhysicalShift> {
    for (name, v) in [
        ("lambda_nm", lambda_nm),
        ("gamma_hz", gamma_fs_hz),
        ("radius_m", radius_m),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(QedError::param(name, format!("must be positive, got {v}")));
        }
    }
    let a = 2.0 * PI * radius_m / (lambda_nm * 1e-9);
    if a < 100.0 {
        return Err(QedError::param(
            "radius_m",
            format!("k0 R = {a:.3} is below the far-field limit 100"),
        ));
    }
    let d = delta_cp(a)?;
    Ok(PhysicalShift {
        a,
        delta_cp_bar: d,
        shift_hz: gamma_fs_hz * d,
        envelope_hz: gamma_fs_hz / (2.0 * a),
    })
}
