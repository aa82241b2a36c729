//! Vacuum-field density near the focus of a spherical mirror, from the
//! angular integral over the directions of the returning waves.
//!
//! Frame: +z is the mirror axis pointing from the mirror through the focus.
//! A direction on the integration hemisphere (θ < π/2) is the propagation
//! direction of a wave coming back from the mirror.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QedError, Result};
use crate::mirror1d::PhaseDistance;
use crate::quadrature::{gauss_legendre, GaussRule, KahanSum};

const MAX_N_THETA: usize = 4096;
const MAX_N_PHI: usize = 16384;
const MAX_DISPLACEMENT: f64 = 100.0;

/// Spherical mirror: phase radius a = k0 R, half-aperture α and reflectivity
/// ρ on the cap θ < α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorGeometry {
    a: PhaseDistance,
    alpha: f64,
    rho: f64,
}

impl MirrorGeometry {
    pub fn new(a: PhaseDistance, alpha: f64, rho: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= PI / 2.0) {
            return Err(QedError::param(
                "alpha",
                format!("half-aperture must lie in (0, pi/2], got {alpha}"),
            ));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(QedError::param(
                "rho",
                format!("reflectivity must lie in [0, 1], got {rho}"),
            ));
        }
        Ok(MirrorGeometry { a, alpha, rho })
    }

    pub fn from_na(a: PhaseDistance, na: f64, rho: f64) -> Result<Self> {
        if !(na > 0.0 && na <= 1.0) {
            return Err(QedError::param(
                "na",
                format!("numerical aperture must lie in (0, 1], got {na}"),
            ));
        }
        Self::new(a, na.asin(), rho)
    }

    /// Perfectly reflecting full hemisphere.
    pub fn hemisphere(a: PhaseDistance) -> Self {
        MirrorGeometry {
            a,
            alpha: PI / 2.0,
            rho: 1.0,
        }
    }

    pub fn a(&self) -> PhaseDistance {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn na(&self) -> f64 {
        self.alpha.sin()
    }

    pub fn with_rho(self, rho: f64) -> Result<Self> {
        Self::new(self.a, self.alpha, rho)
    }

    pub fn with_a(self, a: PhaseDistance) -> Self {
        MirrorGeometry { a, ..self }
    }

    fn cos_alpha(&self) -> f64 {
        if self.alpha >= PI / 2.0 {
            0.0
        } else {
            self.alpha.cos()
        }
    }
}

/// Unit dipole direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct DipoleOrientation([f64; 3]);

impl DipoleOrientation {
    /// Normalizes `v`; rejects zero or non-finite vectors.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = norm(v);
        if !n.is_finite() || n == 0.0 {
            return Err(QedError::param(
                "dipole",
                "direction must be a finite nonzero vector",
            ));
        }
        Ok(DipoleOrientation([v[0] / n, v[1] / n, v[2] / n]))
    }

    pub fn x() -> Self {
        DipoleOrientation([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        DipoleOrientation([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        DipoleOrientation([0.0, 0.0, 1.0])
    }

    pub fn vector(&self) -> [f64; 3] {
        self.0
    }
}

impl TryFrom<[f64; 3]> for DipoleOrientation {
    type Error = QedError;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DipoleOrientation> for [f64; 3] {
    fn from(d: DipoleOrientation) -> [f64; 3] {
        d.0
    }
}

/// Atom position relative to the focus, in wavelengths λ0 = 2π/k0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Displacement([f64; 3]);

impl Displacement {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        if r.iter().any(|c| !c.is_finite()) {
            return Err(QedError::param(
                "r",
                "displacement components must be finite",
            ));
        }
        if norm(r) > MAX_DISPLACEMENT {
            return Err(QedError::param(
                "r",
                format!(
                    "|r| = {} wavelengths exceeds the far-field limit {MAX_DISPLACEMENT}",
                    norm(r)
                ),
            ));
        }
        Ok(Displacement(r))
    }

    pub fn origin() -> Self {
        Displacement([0.0; 3])
    }

    pub fn axial(z: f64) -> Result<Self> {
        Self::new([0.0, 0.0, z])
    }

    pub fn wavelengths(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(self.0)
    }

    pub fn is_axial(&self) -> bool {
        self.0[0] == 0.0 && self.0[1] == 0.0
    }
}

impl TryFrom<[f64; 3]> for Displacement {
    type Error = QedError;
    fn try_from(r: [f64; 3]) -> Result<Self> {
        Self::new(r)
    }
}

impl From<Displacement> for [f64; 3] {
    fn from(r: Displacement) -> [f64; 3] {
        r.0
    }
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Product rule on the hemisphere: Gauss–Legendre in u = cos θ on [0, 1]
/// times the trapezoid rule in φ. Weights sum to 2π.
#[derive(Debug, Clone)]
pub struct AngularGrid {
    u_nodes: Vec<f64>,
    u_weights: Vec<f64>,
    n_phi: usize,
}

/// Builds the hemisphere grid.
pub fn make_grid(n_theta: usize, n_phi: usize) -> Result<AngularGrid> {
    if n_theta < 8 || n_phi < 8 {
        return Err(QedError::param(
            "grid",
            format!("n_theta and n_phi must be >= 8, got {n_theta} x {n_phi}"),
        ));
    }
    if n_theta > MAX_N_THETA || n_phi > MAX_N_PHI {
        return Err(QedError::param(
            "grid",
            format!("grid {n_theta} x {n_phi} exceeds the limit {MAX_N_THETA} x {MAX_N_PHI}"),
        ));
    }
    let (x, w) = gauss_legendre(n_theta);
    let u_nodes = x.iter().map(|&x| 0.5 * (x + 1.0)).collect();
    let u_weights = w.iter().map(|&w| 0.5 * w).collect();
    Ok(AngularGrid {
        u_nodes,
        u_weights,
        n_phi,
    })
}

impl AngularGrid {
    pub fn n_theta(&self) -> usize {
        self.u_nodes.len()
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta() * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_phi as f64
    }

    /// All (θ, φ) nodes, θ-major.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for &u in &self.u_nodes {
            let th = u.acos();
            for j in 0..self.n_phi {
                out.push((th, self.phi(j)));
            }
        }
        out
    }

    /// Weights in the same order as `nodes`.
    pub fn weights(&self) -> Vec<f64> {
        let dphi = 2.0 * PI / self.n_phi as f64;
        self.u_weights
            .iter()
            .flat_map(|&w| std::iter::repeat_n(w * dphi, self.n_phi))
            .collect()
    }

    /// ∫ f(θ, φ) dΩ over the hemisphere.
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        self.integrate_cap(0.0, |u, c, s| f(u.acos(), s.atan2(c)))
    }

    /// ∫ over u ∈ [u_lo, 1]; the u-rule is remapped onto the cap so it stays
    /// smooth there. `f` receives (cos θ, cos φ, sin φ).
    fn integrate_cap<F: Fn(f64, f64, f64) -> f64>(&self, u_lo: f64, f: F) -> f64 {
        let span = 1.0 - u_lo;
        let dphi = 2.0 * PI / self.n_phi as f64;
        let trig: Vec<(f64, f64)> = (0..self.n_phi)
            .map(|j| {
                let p = self.phi(j);
                (p.cos(), p.sin())
            })
            .collect();
        let mut acc = KahanSum::default();
        for (&x, &w) in self.u_nodes.iter().zip(&self.u_weights) {
            let u = u_lo + span * x;
            let ring: f64 = trig.iter().map(|&(c, s)| f(u, c, s)).sum();
            acc.add(span * w * dphi * ring);
        }
        acc.value()
    }
}

/// Returns a warning when the grid cannot sample the position-dependent
/// phase 2k Ω·r.
pub fn resolution_warning(grid: &AngularGrid, k_over_k0: f64, r: &Displacement) -> Option<String> {
    let [x, y, _] = r.wavelengths();
    let need_theta = (8.0 * k_over_k0 * r.norm()).ceil() as usize + 16;
    let need_phi = (4.0 * PI * k_over_k0 * x.hypot(y)).ceil() as usize + 16;
    if grid.n_theta() < need_theta || (!r.is_axial() && grid.n_phi() < need_phi) {
        Some(format!(
            "angular grid {}x{} under-resolves displacement |r| = {:.3} wavelengths (want at least {}x{})",
            grid.n_theta(),
            grid.n_phi(),
            r.norm(),
            need_theta,
            need_phi
        ))
    } else {
        None
    }
}

/// 3/(4π) ∫_cap (1 − (d̂·Ω̂)²) exp(2i(k a + k Ω̂·r)) dΩ.
///
/// The real part is the reflected-wave correction to the vacuum density and
/// the imaginary part drives the excited-state shift. On the axis the φ
/// integral is done analytically and the θ integral on panels sized to the
/// oscillation, so the result does not depend on the grid's φ resolution.
pub fn cap_phase_integral(
    k_over_k0: f64,
    r: &Displacement,
    geom: &MirrorGeometry,
    d: &DipoleOrientation,
    grid: &AngularGrid,
) -> Result<Complex64> {
    if !(k_over_k0.is_finite() && k_over_k0 > 0.0) {
        return Err(QedError::domain(
            "vacuum_density",
            format!("k/k0 must be positive, got {k_over_k0}"),
        ));
    }
    let u_lo = geom.cos_alpha();
    let base = 2.0 * k_over_k0 * geom.a().value();
    let kr = 2.0 * PI * k_over_k0;
    let [dx, dy, dz] = d.vector();
    let [rx, ry, rz] = r.wavelengths();

    if r.is_axial() {
        // ∫ (1 − (d·Ω)²) dφ = 2π [1 − dz² u² − (1 − dz²)(1 − u²)/2]
        let dz2 = dz * dz;
        let weight = |u: f64| 1.0 - dz2 * u * u - 0.5 * (1.0 - dz2) * (1.0 - u * u);
        let rule = GaussRule::new(grid.n_theta());
        let cycles = 2.0 * k_over_k0 * rz.abs() * (1.0 - u_lo);
        let panels = 1 + (8.0 * cycles / grid.n_theta() as f64).floor() as usize;
        let h = (1.0 - u_lo) / panels as f64;
        let mut re = KahanSum::default();
        let mut im = KahanSum::default();
        for p in 0..panels {
            let lo = u_lo + p as f64 * h;
            for (u, w) in rule.mapped(lo, lo + h) {
                let (s, c) = (base + 2.0 * kr * rz * u).sin_cos();
                let f = w * weight(u);
                re.add(f * c);
                im.add(f * s);
            }
        }
        return Ok(Complex64::new(1.5 * re.value(), 1.5 * im.value()));
    }

    if let Some(msg) = resolution_warning(grid, k_over_k0, r) {
        log::warn!("{msg}");
    }
    let pol = |u: f64, c: f64, s: f64| {
        let st = (1.0 - u * u).max(0.0).sqrt();
        let dot = dx * st * c + dy * st * s + dz * u;
        (
            1.0 - dot * dot,
            base + 2.0 * kr * (rx * st * c + ry * st * s + rz * u),
        )
    };
    let re = grid.integrate_cap(u_lo, |u, c, s| {
        let (p, ph) = pol(u, c, s);
        p * ph.cos()
    });
    let im = grid.integrate_cap(u_lo, |u, c, s| {
        let (p, ph) = pol(u, c, s);
        p * ph.sin()
    });
    Ok(Complex64::new(re, im) * (3.0 / (4.0 * PI)))
}

/// Polarized vacuum density D(k, r) normalized to 1 in free space.
///
/// The free-space part integrates to exactly 1 for any orientation, so only
/// the reflected part is evaluated numerically: D = 1 − ρ Re C.
pub fn vacuum_density(
    k_over_k0: f64,
    r: &Displacement,
    geom: &MirrorGeometry,
    d: &DipoleOrientation,
    grid: &AngularGrid,
) -> Result<f64> {
    let c = cap_phase_integral(k_over_k0, r, geom, d, grid)?;
    Ok(1.0 - geom.rho() * c.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(rename_all = "lowercase")]
pub enum ScanDirection {
    /// Along the mirror axis, away from the mirror.
    Axial,
    /// Along x̂, perpendicular to the axis.
    Transverse,
}

impl ScanDirection {
    pub fn displacement(self, dist: f64) -> Result<Displacement> {
        match self {
            ScanDirection::Axial => Displacement::new([0.0, 0.0, dist]),
            ScanDirection::Transverse => Displacement::new([dist, 0.0, 0.0]),
        }
    }
}

/// Samples D(k0, r) at `steps` evenly spaced distances in [0, r_max].
pub fn density_scan(
    geom: &MirrorGeometry,
    d: &DipoleOrientation,
    direction: ScanDirection,
    r_max_wavelengths: f64,
    steps: usize,
    grid: &AngularGrid,
) -> Result<Vec<(f64, f64)>> {
    if steps < 2 {
        return Err(QedError::param(
            "steps",
            format!("need at least 2 samples, got {steps}"),
        ));
    }
    if !(r_max_wavelengths.is_finite() && r_max_wavelengths > 0.0) {
        return Err(QedError::param(
            "r_max",
            format!("must be positive, got {r_max_wavelengths}"),
        ));
    }
    let points: Vec<f64> = (0..steps)
        .map(|i| r_max_wavelengths * i as f64 / (steps - 1) as f64)
        .collect();
    points
        .into_par_iter()
        .map(|dist| {
            let r = direction.displacement(dist)?;
            Ok((dist, vacuum_density(1.0, &r, geom, d, grid)?))
        })
        .collect()
}
