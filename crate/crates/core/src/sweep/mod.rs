//! Parameter sweeps behind the command-line front end: figure datasets, the
//! scaling fit, the Casimir calculator and the check suite.

mod check;
mod figures;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{QedError, Result};
use crate::modefield::{make_grid, AngularGrid, DipoleOrientation};

pub use check::{run_check, CheckOutcome, CheckReport};
pub use figures::{run_casimir, run_fig2, run_fig3, run_fig4, run_scaling, CasimirReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_GRID_THETA: usize = 128;
pub const DEFAULT_GRID_PHI: usize = 320;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Fig2NaSweep,
    Fig3Displacement,
    Fig4Distance,
    CasimirScaling,
    CheckSuite,
    Casimir,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Fig2NaSweep => "fig2_na_sweep",
            SweepKind::Fig3Displacement => "fig3_displacement",
            SweepKind::Fig4Distance => "fig4_distance",
            SweepKind::CasimirScaling => "casimir_scaling",
            SweepKind::CheckSuite => "check_suite",
            SweepKind::Casimir => "casimir",
        }
    }

    fn allowed(self) -> &'static [&'static str] {
        const GRID: [&str; 2] = ["grid_theta", "grid_phi"];
        match self {
            SweepKind::Fig2NaSweep => &["na_steps", "a", "rho", "dipole", GRID[0], GRID[1]],
            SweepKind::Fig3Displacement => &[
                "a",
                "alpha_deg",
                "na",
                "rho",
                "dipole",
                "direction",
                "r_max",
                "steps",
                GRID[0],
                GRID[1],
            ],
            SweepKind::Fig4Distance => &[
                "a_min",
                "a_max",
                "steps",
                "kappa",
                "alpha_deg",
                "na",
                "rho",
                "dipole",
                GRID[0],
                GRID[1],
            ],
            SweepKind::CasimirScaling => &["n_values"],
            SweepKind::CheckSuite => &[],
            SweepKind::Casimir => &["a", "kappa", "lambda_nm", "gamma_hz", "radius_m"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Axial,
    Transverse,
    Both,
}

/// Sweep parameters as supplied by a config file or flags; unset entries
/// take per-kind defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub na_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub na: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dipole: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_nm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_theta: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_phi: Option<usize>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident, $($f:ident),*) => {
        SweepParams { $($f: $top.$f.or($base.$f)),* }
    };
}

impl SweepParams {
    /// Entries set in `top` win.
    pub fn overlay(self, top: SweepParams) -> SweepParams {
        overlay_fields!(
            self, top, na_steps, a, a_min, a_max, alpha_deg, na, rho, dipole, direction, r_max,
            steps, kappa, lambda_nm, gamma_hz, radius_m, n_values, grid_theta, grid_phi
        )
    }

    fn set_keys(&self) -> Vec<String> {
        match serde_json::to_value(self) {
            Ok(Value::Object(m)) => m.keys().cloned().collect(),
            _ => Vec::new(),
        }
    }

    fn validate_keys(&self, kind: SweepKind) -> Result<()> {
        let allowed = kind.allowed();
        for k in self.set_keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(QedError::param(k, format!("not used by {}", kind.name())));
            }
        }
        if self.alpha_deg.is_some() && self.na.is_some() {
            return Err(QedError::param(
                "alpha_deg",
                "give either alpha_deg or na, not both",
            ));
        }
        Ok(())
    }

    pub(crate) fn grid(&self, meta: &mut Metadata) -> Result<AngularGrid> {
        let nt = self.grid_theta.unwrap_or(DEFAULT_GRID_THETA);
        let np = self.grid_phi.unwrap_or(DEFAULT_GRID_PHI);
        meta.put("grid_theta", nt);
        meta.put("grid_phi", np);
        make_grid(nt, np)
    }

    pub(crate) fn dipole(&self, meta: &mut Metadata) -> Result<DipoleOrientation> {
        let d = DipoleOrientation::new(self.dipole.unwrap_or([1.0, 0.0, 0.0]))?;
        meta.put("dipole", d.vector());
        Ok(d)
    }

    /// Half-aperture in radians; full hemisphere when unset.
    pub(crate) fn alpha(&self, meta: &mut Metadata) -> Result<f64> {
        let alpha = match (self.alpha_deg, self.na) {
            (Some(deg), _) => deg.to_radians(),
            (_, Some(na)) => {
                if !(na > 0.0 && na <= 1.0) {
                    return Err(QedError::param(
                        "na",
                        format!("must lie in (0, 1], got {na}"),
                    ));
                }
                na.asin()
            }
            _ => PI / 2.0,
        };
        meta.put("alpha_rad", alpha);
        meta.put("na", alpha.sin());
        Ok(alpha)
    }

    pub(crate) fn rho(&self, meta: &mut Metadata) -> f64 {
        let rho = self.rho.unwrap_or(1.0);
        meta.put("rho", rho);
        rho
    }
}

/// Job description: kind, parameters and where to write the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub kind: SweepKind,
    #[serde(default)]
    pub parameters: SweepParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

impl SweepSpec {
    pub fn new(kind: SweepKind) -> Self {
        SweepSpec {
            kind,
            parameters: SweepParams::default(),
            output_path: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QedError::param("config", e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.parameters.validate_keys(self.kind)
    }

    /// Runs a tabular sweep.
    pub fn run(&self) -> Result<SweepResult> {
        self.validate()?;
        let p = &self.parameters;
        match self.kind {
            SweepKind::Fig2NaSweep => run_fig2(p),
            SweepKind::Fig3Displacement => run_fig3(p),
            SweepKind::Fig4Distance => run_fig4(p),
            SweepKind::CasimirScaling => run_scaling(p),
            SweepKind::CheckSuite | SweepKind::Casimir => Err(QedError::param(
                "kind",
                format!("{} does not produce a table", self.kind.name()),
            )),
        }
    }
}

/// Resolved parameters in insertion-independent (sorted) order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata(BTreeMap<String, Value>);

impl Metadata {
    pub fn put(&mut self, key: &str, v: impl Serialize) {
        self.0.insert(
            key.to_string(),
            serde_json::to_value(v).unwrap_or(Value::Null),
        );
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }
}

/// Table of sweep output with its resolved parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Metadata,
}

impl SweepResult {
    pub(crate) fn new(
        kind: SweepKind,
        header: &[&str],
        rows: Vec<Vec<f64>>,
        mut metadata: Metadata,
    ) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != header.len()) {
            return Err(QedError::Dimension {
                expected: header.len(),
                got: r.len(),
            });
        }
        metadata.put("version", VERSION);
        metadata.put("kind", kind.name());
        Ok(SweepResult {
            kind,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            metadata,
        })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// '#'-prefixed metadata, header, then rows at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.metadata.entries() {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// n with a = nπ closest to `a` (at least `min_n`).
pub fn snap_node(a: f64, min_n: u32) -> u32 {
    ((a / PI).round().max(min_n as f64)) as u32
}
