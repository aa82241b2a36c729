use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QedError, Result};
use crate::mirror1d::PhaseDistance;
use crate::modefield::{density_scan, vacuum_density, Displacement, MirrorGeometry, ScanDirection};
use crate::observables::{
    casimir_decomposition, casimir_physical, casimir_scaling, evaluate, plane_mirror_reference,
    plane_mirror_scaling, CasimirParams, DEFAULT_KAPPA,
};

use super::{snap_node, Direction, Metadata, SweepKind, SweepParams, SweepResult};

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(QedError::param(name, format!("must be positive, got {v}")))
    }
}

/// Focus decay rate at node and antinode against numerical aperture.
pub fn run_fig2(p: &SweepParams) -> Result<SweepResult> {
    let mut meta = Metadata::default();
    let na_steps = p.na_steps.unwrap_or(50);
    if na_steps < 10 {
        return Err(QedError::param(
            "na_steps",
            format!("need at least 10, got {na_steps}"),
        ));
    }
    meta.put("na_steps", na_steps);
    let n = snap_node(positive("a", p.a.unwrap_or(20.0 * PI))?, 1);
    let node = PhaseDistance::node(n);
    let antinode = PhaseDistance::antinode(n);
    meta.put("node_n", n);
    meta.put("a_node", node.value());
    meta.put("a_antinode", antinode.value());
    let rho = p.rho(&mut meta);
    let d = p.dipole(&mut meta)?;
    let grid = p.grid(&mut meta)?;
    let focus = Displacement::origin();
    let rows = (0..=na_steps)
        .into_par_iter()
        .map(|i| {
            let na = i as f64 / na_steps as f64;
            if i == 0 {
                // vanishing cap
                return Ok(vec![0.0, 1.0, 1.0]);
            }
            let alpha = na.asin();
            let hi = vacuum_density(
                1.0,
                &focus,
                &MirrorGeometry::new(antinode, alpha, rho)?,
                &d,
                &grid,
            )?;
            let lo = vacuum_density(
                1.0,
                &focus,
                &MirrorGeometry::new(node, alpha, rho)?,
                &d,
                &grid,
            )?;
            Ok(vec![na, hi, lo])
        })
        .collect::<Result<Vec<_>>>()?;
    SweepResult::new(
        SweepKind::Fig2NaSweep,
        &["na", "gamma_antinode", "gamma_node"],
        rows,
        meta,
    )
}

/// Decay rate against displacement from the focus, at a node.
pub fn run_fig3(p: &SweepParams) -> Result<SweepResult> {
    let mut meta = Metadata::default();
    let n = snap_node(positive("a", p.a.unwrap_or(20.0 * PI))?, 1);
    let a = PhaseDistance::node(n);
    meta.put("node_n", n);
    meta.put("a", a.value());
    let alpha = p.alpha(&mut meta)?;
    let rho = p.rho(&mut meta);
    let d = p.dipole(&mut meta)?;
    let direction = p.direction.unwrap_or(Direction::Both);
    meta.put("direction", direction);
    let r_max = positive("r_max", p.r_max.unwrap_or(12.0))?;
    meta.put("r_max", r_max);
    let steps = p.steps.unwrap_or(241);
    if steps < 2 {
        return Err(QedError::param(
            "steps",
            format!("need at least 2, got {steps}"),
        ));
    }
    meta.put("steps", steps);
    let grid = p.grid(&mut meta)?;
    let geom = MirrorGeometry::new(a, alpha, rho)?;
    let scan = |dir| density_scan(&geom, &d, dir, r_max, steps, &grid);
    match direction {
        Direction::Both => {
            let ax = scan(ScanDirection::Axial)?;
            let tr = scan(ScanDirection::Transverse)?;
            let rows = ax
                .iter()
                .zip(&tr)
                .map(|(x, t)| vec![x.0, x.1, t.1])
                .collect();
            SweepResult::new(
                SweepKind::Fig3Displacement,
                &["r_wavelengths", "gamma_axial", "gamma_transverse"],
                rows,
                meta,
            )
        }
        Direction::Axial | Direction::Transverse => {
            let dir = if direction == Direction::Axial {
                ScanDirection::Axial
            } else {
                ScanDirection::Transverse
            };
            let rows = scan(dir)?.into_iter().map(|(r, v)| vec![r, v]).collect();
            SweepResult::new(
                SweepKind::Fig3Displacement,
                &["r_wavelengths", "gamma_bar"],
                rows,
                meta,
            )
        }
    }
}

/// Focus observables against mirror phase distance.
pub fn run_fig4(p: &SweepParams) -> Result<SweepResult> {
    let mut meta = Metadata::default();
    let a_min = p.a_min.unwrap_or(10.0 * PI);
    let a_max = p.a_max.unwrap_or(20.0 * PI);
    if !(a_min >= 10.0 * PI * (1.0 - 1e-12)) {
        return Err(QedError::param(
            "a_min",
            format!("must be >= 10 pi, got {a_min}"),
        ));
    }
    if !(a_max > a_min && a_max.is_finite()) {
        return Err(QedError::param(
            "a_max",
            format!("must exceed a_min = {a_min}, got {a_max}"),
        ));
    }
    meta.put("a_min", a_min);
    meta.put("a_max", a_max);
    let steps = p.steps.unwrap_or(401);
    if steps < 2 {
        return Err(QedError::param(
            "steps",
            format!("need at least 2, got {steps}"),
        ));
    }
    meta.put("steps", steps);
    let kappa = p.kappa.unwrap_or(DEFAULT_KAPPA);
    meta.put("kappa", kappa);
    let alpha = p.alpha(&mut meta)?;
    let rho = p.rho(&mut meta);
    let d = p.dipole(&mut meta)?;
    let grid = p.grid(&mut meta)?;
    let focus = Displacement::origin();
    let rows = (0..steps)
        .into_par_iter()
        .map(|i| {
            let a = a_min + (a_max - a_min) * i as f64 / (steps - 1) as f64;
            let geom = MirrorGeometry::new(PhaseDistance::new(a)?, alpha, rho)?;
            let q = evaluate(&focus, &geom, &d, kappa, &grid)?;
            Ok(vec![a, q.gamma_bar, q.delta_e_bar, q.delta_cp_bar])
        })
        .collect::<Result<Vec<_>>>()?;
    SweepResult::new(
        SweepKind::Fig4Distance,
        &["a", "gamma_bar", "delta_e_bar", "delta_cp_bar"],
        rows,
        meta,
    )
}

/// Ground-state shift at a = nπ with the fitted exponent and the plane-mirror
/// comparison law.
pub fn run_scaling(p: &SweepParams) -> Result<SweepResult> {
    let mut meta = Metadata::default();
    let ns = p
        .n_values
        .clone()
        .unwrap_or_else(|| vec![10, 20, 50, 100, 200, 500, 1000]);
    meta.put("n_values", &ns);
    let a: Vec<f64> = ns.iter().map(|&n| n as f64 * PI).collect();
    let fit = casimir_scaling(&a)?;
    let plane = plane_mirror_scaling(&a)?;
    meta.put("slope", fit.slope);
    meta.put("plane_mirror_slope", plane.slope);
    let rows = ns
        .iter()
        .zip(&a)
        .map(|(&n, &a)| {
            Ok(vec![
                n as f64,
                a,
                crate::observables::delta_cp(a)?,
                plane_mirror_reference(a),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    SweepResult::new(
        SweepKind::CasimirScaling,
        &["n", "a", "delta_cp_bar", "plane_mirror"],
        rows,
        meta,
    )
}

/// Output of the Casimir calculator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasimirReport {
    pub mode: String,
    pub a: f64,
    pub delta_cp_bar: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_se_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_fs_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_nm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub version: String,
}

impl fmt::Display for CasimirReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode = {}", self.mode)?;
        writeln!(f, "a = {:.16e}", self.a)?;
        let opt = |f: &mut fmt::Formatter<'_>, k: &str, v: Option<f64>| match v {
            Some(v) => writeln!(f, "{k} = {v:.16e}"),
            None => Ok(()),
        };
        opt(f, "kappa", self.kappa)?;
        opt(f, "lambda_nm", self.lambda_nm)?;
        opt(f, "gamma_hz", self.gamma_hz)?;
        opt(f, "radius_m", self.radius_m)?;
        opt(f, "delta_se_bar", self.delta_se_bar)?;
        opt(f, "delta_fs_bar", self.delta_fs_bar)?;
        writeln!(f, "delta_cp_bar = {:.16e}", self.delta_cp_bar)?;
        opt(f, "shift_hz", self.shift_hz)?;
        opt(f, "envelope_hz", self.envelope_hz)?;
        if let Some(n) = &self.note {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// Ground-state shift either in units of γ_FS (a, κ) or in Hz
/// (λ, γ_FS, R). Exactly one mode must be given.
pub fn run_casimir(p: &SweepParams) -> Result<CasimirReport> {
    let dimensional = [p.lambda_nm, p.gamma_hz, p.radius_m];
    let any_dim = dimensional.iter().any(Option::is_some);
    let any_bare = p.a.is_some() || p.kappa.is_some();
    match (any_dim, any_bare) {
        (true, true) => Err(QedError::param(
            "casimir",
            "give either --a/--kappa or --lambda-nm/--gamma-hz/--radius-m, not both",
        )),
        (false, false) => Err(QedError::param(
            "casimir",
            "need --a [--kappa] or --lambda-nm, --gamma-hz and --radius-m",
        )),
        (false, true) => {
            let a =
                p.a.ok_or_else(|| QedError::param("a", "required with --kappa"))?;
            let kappa = p.kappa.unwrap_or(DEFAULT_KAPPA);
            let parts = casimir_decomposition(&CasimirParams::new(PhaseDistance::new(a)?, kappa)?)?;
            Ok(CasimirReport {
                mode: "dimensionless".into(),
                a,
                delta_cp_bar: parts.delta_cp,
                kappa: Some(kappa),
                delta_se_bar: Some(parts.delta_se),
                delta_fs_bar: Some(parts.delta_fs),
                lambda_nm: None,
                gamma_hz: None,
                radius_m: None,
                shift_hz: None,
                envelope_hz: None,
                note: None,
                version: super::VERSION.into(),
            })
        }
        (true, false) => {
            let (Some(lambda_nm), Some(gamma_hz), Some(radius_m)) =
                (p.lambda_nm, p.gamma_hz, p.radius_m)
            else {
                return Err(QedError::param(
                    "casimir",
                    "dimensional mode needs --lambda-nm, --gamma-hz and --radius-m",
                ));
            };
            let s = casimir_physical(lambda_nm, gamma_hz, radius_m)?;
            let note = format!(
                "the shift follows the 1/(k0 R)^2 law; the 1/(2 k0 R) envelope would give {:.3e} Hz. \
                 A 100 Hz estimate quoted for 493 nm, 15 MHz, R = 1 cm is not reproduced by the 1/(k0 R)^2 law. \
                 gamma_hz is used as given (no 2 pi conversion).",
                s.envelope_hz
            );
            Ok(CasimirReport {
                mode: "dimensional".into(),
                a: s.a,
                delta_cp_bar: s.delta_cp_bar,
                kappa: None,
                delta_se_bar: None,
                delta_fs_bar: None,
                lambda_nm: Some(lambda_nm),
                gamma_hz: Some(gamma_hz),
                radius_m: Some(radius_m),
                shift_hz: Some(s.shift_hz),
                envelope_hz: Some(s.envelope_hz),
                note: Some(note),
                version: super::VERSION.into(),
            })
        }
    }
}
