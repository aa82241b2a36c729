//! Sine and cosine integrals `Si`, `Ci` and the auxiliary functions
//! `f(x) = Ci sin x - (Si - π/2) cos x`, `g(x) = -Ci cos x - (Si - π/2) sin x`.
//!
//! Power series for `x <= 2`; above that the continued fraction for
//! `e^{ix} E_1(ix) = g(x) - i f(x)` (modified Lentz), which yields `f` and
//! `g` without cancellation at large `x`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{QedError, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;

fn series(x: f64) -> (f64, f64) {
    let x2 = x * x;
    // Si
    let mut term = x; // (-1)^k x^{2k+1}/(2k+1)!
    let mut si = x;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= -x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
        let add = term / (2 * k + 1) as f64;
        si += add;
        if add.abs() < 1e-18 * si.abs() {
            break;
        }
    }
    // Ci
    let mut term = 1.0; // (-1)^k x^{2k}/(2k)!
    let mut sum = 0.0;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= -x2 / ((2 * k - 1) as f64 * (2 * k) as f64);
        let add = term / (2 * k) as f64;
        sum += add;
        if add.abs() < 1e-18 * (sum.abs() + 1e-300) || k > 200 {
            break;
        }
    }
    (si, EULER_GAMMA + x.ln() + sum)
}

/// `e^{ix} E_1(ix)` for `x > 0` via continued fraction.
fn exp_e1_imag(x: f64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..100_000usize {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

/// `(Si(x), Ci(x), f(x), g(x))` for `x > 0`.
fn all(x: f64) -> (f64, f64, f64, f64) {
    let (s, c) = x.sin_cos();
    if x <= SERIES_LIMIT {
        let (si, ci) = series(x);
        let f = ci * s - (si - FRAC_PI_2) * c;
        let g = -ci * c - (si - FRAC_PI_2) * s;
        (si, ci, f, g)
    } else {
        let h = exp_e1_imag(x);
        let (g, f) = (h.re, -h.im);
        // Ci = f sin - g cos, Si - π/2 = -f cos - g sin
        let ci = f * s - g * c;
        let si = FRAC_PI_2 - f * c - g * s;
        (si, ci, f, g)
    }
}

/// `Si(x) = ∫_0^x sin t / t dt` (odd in `x`).
pub fn sin_int(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x < 0.0 {
        -sin_int(-x)
    } else if x.is_infinite() {
        FRAC_PI_2
    } else {
        all(x).0
    }
}

/// `Ci(x) = γ + ln x + ∫_0^x (cos t - 1)/t dt`, `x > 0`.
pub fn cos_int(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(QedError::domain(
            "cos_int",
            format!("argument must be > 0, got {x}"),
        ));
    }
    Ok(all(x).1)
}

/// Auxiliary `f(x) = ∫_0^∞ sin t / (t + x) dt`, `x > 0`.
pub fn aux_f(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(QedError::domain(
            "aux_f",
            format!("argument must be > 0, got {x}"),
        ));
    }
    Ok(all(x).2)
}

/// Auxiliary `g(x) = ∫_0^∞ cos t / (t + x) dt`, `x > 0`.
pub fn aux_g(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(QedError::domain(
            "aux_g",
            format!("argument must be > 0, got {x}"),
        ));
    }
    Ok(all(x).3)
}
