use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mirror_qed::error::QedError;
use mirror_qed::sweep::{run_casimir, run_check, Direction, SweepKind, SweepParams, SweepSpec};

#[derive(Parser)]
#[command(
    name = "mirror-qed",
    version,
    about = "Atom-at-focus mirror QED sweeps and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Focus decay rate at node and antinode against numerical aperture
    Fig2(Common),
    /// Decay rate against displacement from the focus at a node
    Fig3(Common),
    /// Decay rate, excited shift and Casimir shift against mirror distance
    Fig4(Common),
    /// Ground-state shift, in Hz or in units of the free-space rate
    Casimir(Common),
    /// Power-law fit of the ground-state shift against distance
    Scaling(Common),
    /// Run the invariant suite
    Check(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Axial,
    Transverse,
    Both,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    na_steps: Option<usize>,
    /// Phase distance k0 R (fig2/fig3 snap it to a node)
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    a_min: Option<f64>,
    #[arg(long)]
    a_max: Option<f64>,
    /// Mirror half-aperture in degrees
    #[arg(long, conflicts_with = "na")]
    alpha_deg: Option<f64>,
    /// Numerical aperture sin(alpha)
    #[arg(long)]
    na: Option<f64>,
    /// Mirror reflectivity
    #[arg(long)]
    rho: Option<f64>,
    /// Dipole orientation as x,y,z
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    dipole: Option<[f64; 3]>,
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
    /// Scan range in wavelengths
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Upper cutoff of the photon spectrum in units of k0
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    lambda_nm: Option<f64>,
    /// Free-space decay rate in Hz
    #[arg(long)]
    gamma_hz: Option<f64>,
    /// Mirror radius in metres
    #[arg(long)]
    radius_m: Option<f64>,
    /// Comma-separated n with a = n pi
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<u32>>,
    #[arg(long)]
    grid_theta: Option<usize>,
    #[arg(long)]
    grid_phi: Option<usize>,
    /// JSON sweep spec; flags override its parameters
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON instead of CSV or text
    #[arg(long)]
    json: bool,
    /// Log each check as it runs
    #[arg(long, short)]
    verbose: bool,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected 3 components, got {}", v.len()))
}

impl Common {
    fn params(&self) -> SweepParams {
        SweepParams {
            na_steps: self.na_steps,
            a: self.a,
            a_min: self.a_min,
            a_max: self.a_max,
            alpha_deg: self.alpha_deg,
            na: self.na,
            rho: self.rho,
            dipole: self.dipole,
            direction: self.direction.map(|d| match d {
                DirectionArg::Axial => Direction::Axial,
                DirectionArg::Transverse => Direction::Transverse,
                DirectionArg::Both => Direction::Both,
            }),
            r_max: self.r_max,
            steps: self.steps,
            kappa: self.kappa,
            lambda_nm: self.lambda_nm,
            gamma_hz: self.gamma_hz,
            radius_m: self.radius_m,
            n_values: self.n_values.clone(),
            grid_theta: self.grid_theta,
            grid_phi: self.grid_phi,
        }
    }

    fn spec(&self, kind: SweepKind) -> Result<SweepSpec, Failure> {
        let mut spec = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                let spec =
                    SweepSpec::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?;
                if spec.kind != kind {
                    return Err(Failure::Usage(format!(
                        "config kind {} does not match subcommand {}",
                        spec.kind.name(),
                        kind.name()
                    )));
                }
                spec
            }
            None => SweepSpec::new(kind),
        };
        spec.parameters = spec.parameters.overlay(self.params());
        if let Some(out) = &self.output {
            spec.output_path = Some(out.display().to_string());
        }
        spec.validate().map_err(Failure::from)?;
        Ok(spec)
    }
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<QedError> for Failure {
    fn from(e: QedError) -> Self {
        match e {
            QedError::Consistency(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn emit(text: &str, path: Option<&str>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (kind, common) = match &cli.command {
        Command::Fig2(c) => (SweepKind::Fig2NaSweep, c),
        Command::Fig3(c) => (SweepKind::Fig3Displacement, c),
        Command::Fig4(c) => (SweepKind::Fig4Distance, c),
        Command::Scaling(c) => (SweepKind::CasimirScaling, c),
        Command::Casimir(c) => (SweepKind::Casimir, c),
        Command::Check(c) => (SweepKind::CheckSuite, c),
    };
    let spec = common.spec(kind)?;
    let out = spec.output_path.as_deref();
    match kind {
        SweepKind::Casimir => {
            let report = run_casimir(&spec.parameters)?;
            let text = if common.json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                report.to_string()
            };
            emit(&text, out)
        }
        SweepKind::CheckSuite => {
            let report = run_check(common.verbose);
            let text = if common.json {
                report.to_json() + "\n"
            } else {
                report
                    .checks
                    .iter()
                    .map(|c| {
                        let tag = if c.passed { "PASS" } else { "FAIL" };
                        format!(
                            "{tag} {}: {:.3e} (tol {:.0e}) {}\n",
                            c.name, c.value, c.tolerance, c.detail
                        )
                    })
                    .collect()
            };
            emit(&text, out)?;
            if report.passed {
                Ok(())
            } else {
                let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
                Err(Failure::Check(format!(
                    "failed checks: {}",
                    names.join(", ")
                )))
            }
        }
        _ => {
            let result = spec.run()?;
            let text = if common.json {
                serde_json::to_string_pretty(&result).expect("result serializes") + "\n"
            } else {
                result.to_csv()
            };
            emit(&text, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match &cli.command {
        Command::Check(c) if c.verbose => "info",
        _ => "warn",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
