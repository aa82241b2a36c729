//! End-to-end acceptance suite. Runs without the libtest harness so every
//! criterion prints its PASS/FAIL line; exits nonzero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mirror_qed::mirror1d::{gamma_1d, shift_1d, PhaseDistance};
use mirror_qed::modefield::{
    make_grid, vacuum_density, DipoleOrientation, Displacement, MirrorGeometry,
};
use mirror_qed::observables::{
    auto_grid, casimir_decomposition, casimir_scaling, delta_cp, excited_shift_on, lamb_direct,
    plane_mirror_scaling, CasimirParams,
};
use mirror_qed::partialwave::{
    addition_sum, amplitudes_at, flux_balance, oracle_density, parity_sum, Parity, PartialWaveSet,
};
use mirror_qed::sweep::{run_fig2, run_fig3, SweepParams};

type Verdict = Result<String, String>;

fn within(what: &str, got: f64, want: f64, tol: f64) -> Verdict {
    let dev = (got - want).abs();
    if dev <= tol {
        Ok(format!("{what} = {got:.6e} (dev {dev:.1e} <= {tol:.0e})"))
    } else {
        Err(format!(
            "{what} = {got:.12e}, want {want} within {tol:.0e} (dev {dev:.3e})"
        ))
    }
}

fn all(parts: Vec<Verdict>) -> Verdict {
    let mut ok = Vec::new();
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join("; "))
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let u: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    let s = (1.0 - u * u).sqrt();
    [s * phi.cos(), s * phi.sin(), u]
}

fn random_set(rng: &mut ChaCha8Rng, l_max: usize) -> PartialWaveSet {
    PartialWaveSet::from_fn(l_max, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn free_space_recovery() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let d = DipoleOrientation::new(random_unit(&mut rng)).map_err(|e| e.to_string())?;
        let len = 5.0 * rng.gen_range(0.0f64..1.0).cbrt();
        let r =
            Displacement::new(random_unit(&mut rng).map(|c| c * len)).map_err(|e| e.to_string())?;
        let a = PhaseDistance::new(rng.gen_range(10.0..200.0)).unwrap();
        let geom = MirrorGeometry::new(a, rng.gen_range(0.05..PI / 2.0), 0.0)
            .map_err(|e| e.to_string())?;
        let v = vacuum_density(1.0, &r, &geom, &d, &auto_grid(&r).unwrap())
            .map_err(|e| e.to_string())?;
        worst = worst.max((v - 1.0).abs());
    }
    within("max |density - 1| over 50 samples", worst, 0.0, 1e-10)
}

fn one_dimensional_limits() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in 0..=100u32 {
        worst = worst.max(gamma_1d(PhaseDistance::node(n)).abs());
        worst = worst.max(shift_1d(PhaseDistance::new(n as f64 * PI / 2.0).unwrap()).abs());
    }
    // roundoff of 2nπ is n ulp(π), and the functions are O(1)-Lipschitz
    let roundoff = 400.0 * f64::EPSILON * PI;
    all(vec![
        within(
            "max |gamma_1d(n pi)|, |shift_1d(n pi/2)|, n <= 100",
            worst,
            0.0,
            roundoff,
        ),
        within(
            "gamma_1d(pi/2)",
            gamma_1d(PhaseDistance::new(PI / 2.0).unwrap()),
            2.0,
            4.0 * f64::EPSILON,
        ),
    ])
}

fn addition_formula() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut split: f64 = 0.0;
    for kr in [0.1, 1.0, 5.0, 20.0, 40.0] {
        let l_max = kr as usize + 40;
        let total = addition_sum(kr, l_max).map_err(|e| e.to_string())?;
        let even = parity_sum(kr, Parity::Even, l_max).unwrap();
        let odd = parity_sum(kr, Parity::Odd, l_max).unwrap();
        worst = worst.max((total - 2.0 / 3.0).abs());
        split = split.max((even + odd - total).abs());
    }
    all(vec![
        within("max |sum - 2/3|", worst, 0.0, 1e-10),
        within("max |even + odd - total|", split, 0.0, 1e-12),
    ])
}

fn hemisphere_suppression() -> Verdict {
    let grid = make_grid(128, 320).unwrap();
    let focus = Displacement::origin();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut dipoles = vec![
        DipoleOrientation::x(),
        DipoleOrientation::y(),
        DipoleOrientation::z(),
    ];
    dipoles.extend((0..5).map(|_| DipoleOrientation::new(random_unit(&mut rng)).unwrap()));
    let (mut node_g, mut node_s, mut anti): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in [10, 20, 57] {
        let node = MirrorGeometry::hemisphere(PhaseDistance::node(n));
        let antinode = MirrorGeometry::hemisphere(PhaseDistance::antinode(n));
        for d in &dipoles {
            node_g = node_g.max(vacuum_density(1.0, &focus, &node, d, &grid).unwrap().abs());
            node_s = node_s.max(excited_shift_on(&focus, &node, d, &grid).unwrap().abs());
            anti =
                anti.max((vacuum_density(1.0, &focus, &antinode, d, &grid).unwrap() - 2.0).abs());
        }
    }
    all(vec![
        within("node gamma_bar", node_g, 0.0, 1e-8),
        within("node |delta_e_bar|", node_s, 0.0, 1e-8),
        within("|antinode gamma_bar - 2|", anti, 0.0, 1e-8),
    ])
}

fn na_modulation() -> Verdict {
    let grid = make_grid(128, 320).unwrap();
    let focus = Displacement::origin();
    let d = DipoleOrientation::x();
    let at = |a| {
        vacuum_density(
            1.0,
            &focus,
            &MirrorGeometry::from_na(a, 0.4, 1.0).unwrap(),
            &d,
            &grid,
        )
        .unwrap()
    };
    let hi = at(PhaseDistance::antinode(20));
    let lo = at(PhaseDistance::node(20));
    // closed-form cap integral for a dipole perpendicular to the axis:
    // (3/4) ∫_{cos α}^1 (1 + u²) du
    let c = (1.0f64 - 0.4 * 0.4).sqrt();
    let cap = 0.75 * ((1.0 - c) + (1.0 - c.powi(3)) / 3.0);
    all(vec![
        within("peak-to-peak", hi - lo, 0.240, 0.005),
        within("antinode excess", hi - 1.0, 0.120, 0.003),
        within("node deficit", 1.0 - lo, 0.120, 0.003),
        within("closed-form cap", cap, 0.120, 0.003),
        within("antinode excess vs closed form", hi - 1.0, cap, 1e-10),
    ])
}

fn fig2_dataset() -> Verdict {
    let r = run_fig2(&SweepParams::default()).map_err(|e| e.to_string())?;
    let na = r.column("na").unwrap();
    let hi = r.column("gamma_antinode").unwrap();
    let lo = r.column("gamma_node").unwrap();
    let tol = 1e-8;
    let up = hi
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::NEG_INFINITY, f64::max);
    let down = lo
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let last = na.len() - 1;
    all(vec![
        within("NA endpoint", na[last], 1.0, 0.0),
        within("antinode at NA 0", hi[0], 1.0, tol),
        within("antinode at NA 1", hi[last], 2.0, tol),
        within("node at NA 0", lo[0], 1.0, tol),
        within("node at NA 1", lo[last], 0.0, tol),
        if up <= tol {
            Ok(format!("antinode nondecreasing (worst step {up:.1e})"))
        } else {
            Err(format!("antinode drops by {up:.3e}"))
        },
        if down <= tol {
            Ok(format!("node nonincreasing (worst step {down:.1e})"))
        } else {
            Err(format!("node rises by {down:.3e}"))
        },
    ])
}

fn fig3_dataset() -> Verdict {
    let r = run_fig3(&SweepParams::default()).map_err(|e| e.to_string())?;
    let rr = r.column("r_wavelengths").unwrap();
    let mut parts = Vec::new();
    // near-focus samples at finer spacing than the sweep
    let grid = make_grid(128, 320).unwrap();
    let geom = MirrorGeometry::hemisphere(PhaseDistance::node(20));
    let d = DipoleOrientation::x();
    for (col, dir) in [("gamma_axial", 2usize), ("gamma_transverse", 0usize)] {
        let g = r.column(col).unwrap();
        parts.push(within(&format!("{col}(0)"), g[0], 0.0, 1e-8));
        let near = (0..=20)
            .map(|i| {
                let mut v = [0.0; 3];
                v[dir] = 0.05 * i as f64 / 20.0;
                vacuum_density(1.0, &Displacement::new(v).unwrap(), &geom, &d, &grid).unwrap()
            })
            .chain(
                rr.iter()
                    .zip(&g)
                    .filter(|(x, _)| **x <= 0.05 + 1e-12)
                    .map(|(_, v)| *v),
            )
            .fold(f64::NEG_INFINITY, f64::max);
        parts.push(if near < 0.1 {
            Ok(format!("max {col} for r <= 0.05 = {near:.4}"))
        } else {
            Err(format!("{col} reaches {near} within 0.05 wavelengths"))
        });
        let window: Vec<f64> = rr
            .iter()
            .zip(&g)
            .filter(|(x, _)| (8.0..=12.0).contains(*x))
            .map(|(_, v)| *v)
            .collect();
        let mean = window.iter().sum::<f64>() / window.len() as f64;
        parts.push(within(&format!("{col} mean over [8, 12]"), mean, 1.0, 0.1));
    }
    all(parts)
}

fn parity_flux() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut parity: f64 = 0.0;
    for _ in 0..10 {
        let b = random_set(&mut rng, 12);
        let pts: Vec<(f64, f64)> = (0..200)
            .map(|_| (rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let anti: Vec<(f64, f64)> = pts.iter().map(|&(t, p)| (PI - t, p + PI)).collect();
        let here = amplitudes_at(&b, &pts);
        let there = amplitudes_at(&b, &anti);
        for (o, i) in here.outgoing.values().iter().zip(there.incoming.values()) {
            parity = parity.max((o + i).norm());
        }
    }
    let grid = make_grid(64, 96).unwrap();
    let mut parts = vec![within("max |f_out(w) + f_in(-w)|", parity, 0.0, 1e-10)];
    let mut hemi_dev: f64 = 0.0;
    for (label, alpha) in [
        ("full mirror", PI / 2.0),
        ("free space", 0.0),
        ("NA 0.6", 0.6f64.asin()),
    ] {
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let b = random_set(&mut rng, 12);
            let a = PhaseDistance::new(rng.gen_range(10.0..200.0)).unwrap();
            let fb = flux_balance(&b, a, alpha, &grid).map_err(|e| e.to_string())?;
            worst = worst.max(
                (fb.far_field_sphere - fb.four_incoming_sphere).abs() / fb.four_incoming_sphere,
            );
            hemi_dev = hemi_dev.max((fb.far_field - fb.four_incoming).abs() / fb.four_incoming);
        }
        parts.push(within(
            &format!("{label} relative flux defect"),
            worst,
            0.0,
            1e-8,
        ));
    }
    println!("    (information: hemisphere-only flux defect for mixed-parity sets {hemi_dev:.3e})");
    all(parts)
}

fn oracle_equivalence() -> Verdict {
    let grid = make_grid(128, 320).unwrap();
    let d = DipoleOrientation::z();
    let mut worst: f64 = 0.0;
    let mut at = (0.0, 0.0);
    for off in [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
        let geom = MirrorGeometry::hemisphere(PhaseDistance::new(20.0 * PI + off).unwrap());
        for z in [-2.0, -1.3, -0.6, -0.1, 0.0, 0.25, 0.9, 1.5, 2.0] {
            let o = oracle_density(&geom, &d, z, Some(150)).map_err(|e| e.to_string())?;
            let q =
                vacuum_density(1.0, &Displacement::axial(z).unwrap(), &geom, &d, &grid).unwrap();
            if (o - q).abs() > worst {
                worst = (o - q).abs();
                at = (off, z);
            }
        }
    }
    within(
        &format!(
            "max |oracle - angular integral| (worst at offset {:.3}, z {})",
            at.0, at.1
        ),
        worst,
        0.0,
        1e-2,
    )
}

fn casimir_ledger() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = rng.gen_range(10.0 * PI..200.0 * PI);
        let kappa = 10f64.powf(rng.gen_range(2.0..4.0));
        let p = CasimirParams::new(PhaseDistance::new(a).unwrap(), kappa).unwrap();
        let parts = casimir_decomposition(&p).map_err(|e| e.to_string())?;
        let direct = lamb_direct(&p).unwrap();
        worst = worst.max((parts.total() - direct).abs() / direct.abs());
    }
    let mut drift: f64 = 0.0;
    for a in [10.0 * PI, 37.3, 100.0 * PI] {
        let at = |kappa| {
            casimir_decomposition(
                &CasimirParams::new(PhaseDistance::new(a).unwrap(), kappa).unwrap(),
            )
            .unwrap()
            .delta_cp
        };
        let base = at(1e3);
        for kappa in [2e3, 1e4, 3e4] {
            drift = drift.max((at(kappa) - base).abs() / base.abs());
        }
    }
    all(vec![
        within("max relative |parts - direct|", worst, 0.0, 1e-6),
        within("delta_cp relative drift for kappa >= 1e3", drift, 0.0, 1e-6),
    ])
}

fn scaling_law() -> Verdict {
    let a: Vec<f64> = [10, 20, 50, 100, 200, 500, 1000]
        .iter()
        .map(|&n| n as f64 * PI)
        .collect();
    let fit = casimir_scaling(&a).map_err(|e| e.to_string())?;
    let plane = plane_mirror_scaling(&a).unwrap();
    all(vec![
        within("delta_cp slope", fit.slope, -2.0, 0.05),
        within("plane-mirror slope", plane.slope, -4.0, 1e-9),
    ])
}

fn cli(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_mirror-qed"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())
}

fn barium_emission() -> Verdict {
    let out = cli(&[
        "casimir",
        "--lambda-nm",
        "493",
        "--gamma-hz",
        "15e6",
        "--radius-m",
        "0.01",
        "--json",
    ])?;
    if !out.status.success() {
        return Err(format!("casimir exited with {}", out.status));
    }
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let note = v["note"].as_str().unwrap_or_default();
    if !note.contains("100 Hz") {
        return Err(format!("discrepancy note missing: {note:?}"));
    }
    let a = v["a"].as_f64().ok_or("a missing")?;
    let emitted = v["delta_cp_bar"].as_f64().ok_or("delta_cp_bar missing")?;
    let shift = v["shift_hz"].as_f64().ok_or("shift_hz missing")?;
    let lib = delta_cp(a).map_err(|e| e.to_string())?;
    println!("    (emitted: a = {a:.6e}, delta_cp_bar = {emitted:.6e}, shift = {shift:.4e} Hz)");
    all(vec![
        within(
            "relative |emitted - library delta_cp|",
            (emitted - lib).abs() / lib.abs(),
            0.0,
            1e-12,
        ),
        within(
            "shift_hz / (gamma_hz delta_cp)",
            shift / (15e6 * lib),
            1.0,
            1e-12,
        ),
    ])
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let specs = [
        (
            "fig2",
            r#"{"kind":"fig2_na_sweep","parameters":{"na_steps":20,"dipole":[1.0,0.5,0.2]}}"#,
        ),
        (
            "fig3",
            r#"{"kind":"fig3_displacement","parameters":{"r_max":4.0,"steps":81,"grid_theta":64,"grid_phi":160}}"#,
        ),
        (
            "fig4",
            r#"{"kind":"fig4_distance","parameters":{"steps":61,"na":0.7}}"#,
        ),
    ];
    let mut parts = Vec::new();
    for (cmd, spec) in specs {
        let cfg = dir.path().join(format!("{cmd}.json"));
        fs::write(&cfg, spec).unwrap();
        let mut outputs = Vec::new();
        for i in 0..3 {
            let path = dir.path().join(format!("{cmd}_{i}.csv"));
            let out = cli(&[
                cmd,
                "--config",
                cfg.to_str().unwrap(),
                "--output",
                path.to_str().unwrap(),
            ])?;
            if !out.status.success() {
                return Err(format!(
                    "{cmd} exited with {}: {}",
                    out.status,
                    String::from_utf8_lossy(&out.stderr)
                ));
            }
            outputs.push(fs::read(&path).unwrap());
        }
        let same = outputs.windows(2).all(|w| w[0] == w[1]);
        parts.push(if same {
            Ok(format!(
                "{cmd}: 3 runs, {} bytes identical",
                outputs[0].len()
            ))
        } else {
            Err(format!("{cmd}: outputs differ between runs"))
        });
    }
    all(parts)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 13] = [
        ("free-space recovery", free_space_recovery),
        ("1D limits", one_dimensional_limits),
        ("addition formula", addition_formula),
        ("hemisphere suppression", hemisphere_suppression),
        ("NA 0.4 modulation", na_modulation),
        ("NA sweep dataset", fig2_dataset),
        ("displacement dataset", fig3_dataset),
        ("parity and flux invariants", parity_flux),
        ("oracle equivalence", oracle_equivalence),
        ("Casimir ledger", casimir_ledger),
        ("scaling law", scaling_law),
        ("Barium emission", barium_emission),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = f();
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(msg) => println!("criterion {:>2} PASS {name} [{secs:.1} s]: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{secs:.1} s]: {msg}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
