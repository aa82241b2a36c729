//! Spherical Bessel functions of the first and second kind and the outgoing
//! spherical Hankel function.
//!
//! `j_l` is evaluated with Miller's backward recurrence when `x <= l_max` and
//! with forward recurrence otherwise. `y_l` always uses forward recurrence,
//! which is stable for the dominant solution.

use num_complex::Complex64;

use crate::error::{QedError, Result};

/// Largest order the kernels are validated for.
pub const MAX_ORDER: usize = 500;

const RESCALE_AT: f64 = 1e250;

fn check_order(func: &'static str, l: usize) -> Result<()> {
    if l > MAX_ORDER {
        return Err(QedError::domain(
            func,
            format!("order {l} exceeds {MAX_ORDER}"),
        ));
    }
    Ok(())
}

/// `j_l(x)` for a single order.
pub fn sph_bessel_j(l: usize, x: f64) -> Result<f64> {
    Ok(sph_bessel_j_array(l, x)?[l])
}

/// `j_0(x) ..= j_{l_max}(x)`.
pub fn sph_bessel_j_array(l_max: usize, x: f64) -> Result<Vec<f64>> {
    check_order("sph_bessel_j", l_max)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(QedError::domain(
            "sph_bessel_j",
            format!("argument must be finite and >= 0, got {x}"),
        ));
    }
    let mut out = vec![0.0; l_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return Ok(out);
    }
    if x < 1e-6 {
        // two-term series j_l ~ x^l/(2l+1)!! (1 - x^2 / (2(2l+3)))
        let mut lead = 1.0;
        for (l, o) in out.iter_mut().enumerate() {
            if l > 0 {
                lead *= x / (2 * l + 1) as f64;
            }
            *o = lead * (1.0 - x * x / (2.0 * (2 * l + 3) as f64));
        }
        return Ok(out);
    }

    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if x > l_max as f64 {
        out[0] = j0;
        if l_max >= 1 {
            out[1] = s / (x * x) - c / x;
        }
        for l in 2..=l_max {
            out[l] = (2 * l - 1) as f64 / x * out[l - 1] - out[l - 2];
        }
        return Ok(out);
    }

    // Miller: start far enough above max(l_max, x) that the neglected
    // dominant solution is below roundoff near the turning point.
    let top = l_max.max(x.ceil() as usize);
    let start = top + 20 + (12.0 * x.max(1.0).cbrt()).ceil() as usize;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    for k in (1..=start).rev() {
        vals[k - 1] = (2 * k + 1) as f64 / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > RESCALE_AT {
            for v in vals[k - 1..].iter_mut() {
                *v /= RESCALE_AT;
            }
        }
    }
    out.copy_from_slice(&vals[..=l_max]);
    let scale = if x < 1.0 || l_max == 0 {
        j0 / out[0]
    } else {
        let j1 = s / (x * x) - c / x;
        if j0.abs() >= j1.abs() {
            j0 / out[0]
        } else {
            j1 / out[1]
        }
    };
    for o in out.iter_mut() {
        *o *= scale;
    }
    Ok(out)
}

/// `y_0(x) ..= y_{l_max}(x)`, `x > 0`.
pub fn sph_bessel_y_array(l_max: usize, x: f64) -> Result<Vec<f64>> {
    check_order("sph_bessel_y", l_max)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(QedError::domain(
            "sph_bessel_y",
            format!("argument must be finite and > 0, got {x}"),
        ));
    }
    let (s, c) = x.sin_cos();
    let mut out = vec![0.0; l_max + 1];
    out[0] = -c / x;
    if l_max >= 1 {
        out[1] = -c / (x * x) - s / x;
    }
    for l in 2..=l_max {
        out[l] = (2 * l - 1) as f64 / x * out[l - 1] - out[l - 2];
    }
    Ok(out)
}

pub fn sph_bessel_y(l: usize, x: f64) -> Result<f64> {
    Ok(sph_bessel_y_array(l, x)?[l])
}

/// `h_l^(1)(x) = j_l(x) + i y_l(x)`; singular at the origin.
pub fn sph_hankel1(l: usize, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(QedError::domain(
            "sph_hankel1",
            format!("argument must be > 0, got {x}"),
        ));
    }
    let j = sph_bessel_j(l, x)?;
    let y = sph_bessel_y(l, x)?;
    Ok(Complex64::new(j, y))
}

pub fn sph_hankel1_array(l_max: usize, x: f64) -> Result<Vec<Complex64>> {
    if !(x > 0.0) {
        return Err(QedError::domain(
            "sph_hankel1",
            format!("argument must be > 0, got {x}"),
        ));
    }
    let j = sph_bessel_j_array(l_max, x)?;
    let y = sph_bessel_y_array(l_max, x)?;
    Ok(j.into_iter()
        .zip(y)
        .map(|(a, b)| Complex64::new(a, b))
        .collect())
}

/// Derivative `z_l'(x) = z_{l-1}(x) - (l+1)/x z_l(x)` from a precomputed
/// array (`l >= 1`), or `-z_1` for `l = 0`.
pub fn derivative_from_array<T>(z: &[T], l: usize, x: f64) -> T
where
    T: Copy
        + std::ops::Sub<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Neg<Output = T>,
{
    if l == 0 {
        -z[1]
    } else {
        z[l - 1] - z[l] * ((l + 1) as f64 / x)
    }
}
