//! Associated Legendre functions and spherical harmonics.
//!
//! Condon–Shortley phase throughout: `P_1^1(cos θ) = -sin θ` and
//! `Y_{l,-m} = (-1)^m conj(Y_{l,m})`. Internally everything is built from the
//! orthonormalized functions `Ȳ_l^m(θ) = Y_{l,m}(θ, 0)`, which stay finite
//! for orders where the factorial normalization would overflow.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QedError, Result};

/// An angular-momentum pair `(l, m)` with `|m| <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphericalIndex {
    l: usize,
    m: i64,
}

impl SphericalIndex {
    pub fn new(l: usize, m: i64) -> Result<Self> {
        if m.unsigned_abs() as usize > l {
            return Err(QedError::Index(format!(
                "|m| = {} exceeds l = {l}",
                m.abs()
            )));
        }
        Ok(SphericalIndex { l, m })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> i64 {
        self.m
    }
}

/// Orthonormalized `Ȳ_l^m(θ)` and `∂_θ Ȳ_l^m(θ)` for all `0 <= m <= l <= l_max`
/// at one polar angle.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    l_max: usize,
    theta: f64,
    value: Vec<f64>,
    dtheta: Vec<f64>,
}

#[inline]
fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

impl LegendreTable {
    pub fn new(l_max: usize, theta: f64) -> Self {
        let (s, u) = theta.sin_cos();
        let s = s.abs();
        let n = tri(l_max, l_max) + 1;
        let mut value = vec![0.0; n];
        let mut diag = 1.0 / (4.0 * PI).sqrt();
        for m in 0..=l_max {
            if m > 0 {
                diag *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
            }
            value[tri(m, m)] = diag;
            if m < l_max {
                value[tri(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * u * diag;
            }
            for l in (m + 2)..=l_max {
                let lf = l as f64;
                let mf = m as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let lm1 = lf - 1.0;
                let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
                value[tri(l, m)] = a * (u * value[tri(l - 1, m)] - b * value[tri(l - 2, m)]);
            }
        }
        // ∂θ Ȳ_l^m = ½[√((l-m)(l+m+1)) Ȳ^{m+1} - √((l+m)(l-m+1)) Ȳ^{m-1}],
        // with Ȳ^{-1} = -Ȳ^{1}.
        let mut dtheta = vec![0.0; n];
        for l in 0..=l_max {
            for m in 0..=l {
                let up = if m < l {
                    (((l - m) * (l + m + 1)) as f64).sqrt() * value[tri(l, m + 1)]
                } else {
                    0.0
                };
                let down = if m > 0 {
                    (((l + m) * (l - m + 1)) as f64).sqrt() * value[tri(l, m - 1)]
                } else if l > 0 {
                    -((l * (l + 1)) as f64).sqrt() * value[tri(l, 1)]
                } else {
                    0.0
                };
                dtheta[tri(l, m)] = 0.5 * (up - down);
            }
        }
        LegendreTable {
            l_max,
            theta,
            value,
            dtheta,
        }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `Ȳ_l^m(θ)` for signed `m`.
    pub fn get(&self, l: usize, m: i64) -> f64 {
        let ma = m.unsigned_abs() as usize;
        debug_assert!(l <= self.l_max && ma <= l);
        let v = self.value[tri(l, ma)];
        if m < 0 && ma % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// `∂_θ Ȳ_l^m(θ)` for signed `m`.
    pub fn get_dtheta(&self, l: usize, m: i64) -> f64 {
        let ma = m.unsigned_abs() as usize;
        debug_assert!(l <= self.l_max && ma <= l);
        let v = self.dtheta[tri(l, ma)];
        if m < 0 && ma % 2 == 1 {
            -v
        } else {
            v
        }
    }

    pub fn harmonic(&self, l: usize, m: i64, phi: f64) -> Complex64 {
        Complex64::from_polar(1.0, m as f64 * phi) * self.get(l, m)
    }
}

/// `ln((l+|m|)! / (l-|m|)!)`
fn ln_factorial_ratio(l: usize, m: usize) -> f64 {
    ((l - m + 1)..=(l + m)).map(|t| (t as f64).ln()).sum()
}

/// `P_l^m(u)` with the Condon–Shortley phase, `u ∈ [-1, 1]`.
///
/// Very large `|m|` overflows to infinity: the unnormalized function itself
/// exceeds the f64 range there.
pub fn assoc_legendre(l: usize, m: i64, u: f64) -> Result<f64> {
    let idx = SphericalIndex::new(l, m)?;
    if !(-1.0..=1.0).contains(&u) {
        return Err(QedError::domain(
            "assoc_legendre",
            format!("argument {u} outside [-1, 1]"),
        ));
    }
    let ma = m.unsigned_abs() as usize;
    let table = LegendreTable::new(l, u.acos());
    let normalized = table.get(idx.l, ma as i64);
    // P_l^m = Ȳ_l^m / sqrt((2l+1)/4π (l-m)!/(l+m)!)
    let ln_norm = 0.5 * (((2 * l + 1) as f64 / (4.0 * PI)).ln() - ln_factorial_ratio(l, ma));
    let p = normalized / ln_norm.exp();
    if m < 0 {
        // P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m
        let sign = if ma % 2 == 1 { -1.0 } else { 1.0 };
        Ok(sign * p * (-ln_factorial_ratio(l, ma)).exp())
    } else {
        Ok(p)
    }
}

/// Orthonormal `Y_{l,m}(θ, φ)`.
pub fn sph_harm(l: usize, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    SphericalIndex::new(l, m)?;
    Ok(LegendreTable::new(l, theta).harmonic(l, m, phi))
}

/// `∂_θ Y_{l,m}(θ, φ)`.
pub fn sph_harm_dtheta(l: usize, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    SphericalIndex::new(l, m)?;
    let t = LegendreTable::new(l, theta);
    Ok(Complex64::from_polar(1.0, m as f64 * phi) * t.get_dtheta(l, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussRule;
    use proptest::prelude::*;

    #[test]
    fn index_validation() {
        assert!(SphericalIndex::new(2, 3).is_err());
        assert!(SphericalIndex::new(2, -2).is_ok());
        assert!(assoc_legendre(1, 2, 0.1).is_err());
        assert!(sph_harm(1, -2, 0.1, 0.0).is_err());
    }

    #[test]
    fn legendre_closed_forms() {
        assert_eq!(assoc_legendre(0, 0, 0.3).unwrap(), 1.0);
        let th = PI / 3.0;
        let v = assoc_legendre(1, 1, th.cos()).unwrap();
        assert!((v + th.sin()).abs() < 1e-14);
        assert!((v + 0.8660254).abs() < 1e-7);
        let u: f64 = 0.37;
        // P_3^2 = 15 u (1 - u^2)
        assert!((assoc_legendre(3, 2, u).unwrap() - 15.0 * u * (1.0 - u * u)).abs() < 1e-13);
        // P_2^{-1} = -1/6 P_2^1 = -1/6 * (-3 u sqrt(1-u^2))
        let p = assoc_legendre(2, -1, u).unwrap();
        assert!((p - 0.5 * u * (1.0 - u * u).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn legendre_orthogonality_by_quadrature() {
        let rule = GaussRule::new(12);
        let v = rule.integrate(-1.0, 1.0, |u| assoc_legendre(3, 1, u).unwrap().powi(2));
        assert!((v - 24.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_values() {
        let y = sph_harm(0, 0, 0.4, 1.3).unwrap();
        assert!((y.re - 0.2820948).abs() < 1e-7 && y.im == 0.0);
        let s: f64 = (-5..=5)
            .map(|m| sph_harm(5, m, 1.1, 0.7).unwrap().norm_sqr())
            .sum();
        assert!((s - 11.0 / (4.0 * PI)).abs() < 1e-14);
        assert!((s - 0.8753521).abs() < 1e-7);
        let a = sph_harm(4, -3, 0.8, 0.2).unwrap();
        let b = sph_harm(4, 3, 0.8, 0.2).unwrap();
        assert!((a + b.conj()).norm() < 1e-15);
    }

    #[test]
    fn harmonic_norm_by_quadrature() {
        let rule = GaussRule::new(20);
        let n_phi = 16;
        let mut acc = 0.0;
        for (u, w) in rule.mapped(-1.0, 1.0) {
            let th = u.acos();
            for k in 0..n_phi {
                let phi = 2.0 * PI * k as f64 / n_phi as f64;
                acc += w * (2.0 * PI / n_phi as f64) * sph_harm(3, 2, th, phi).unwrap().norm_sqr();
            }
        }
        assert!((acc - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dtheta_matches_finite_difference() {
        let h = 1e-6;
        for &(l, m) in &[
            (0usize, 0i64),
            (1, 0),
            (1, 1),
            (4, -2),
            (7, 3),
            (9, 9),
            (30, 0),
        ] {
            for &th in &[0.3, 1.1, 2.4] {
                let d = sph_harm_dtheta(l, m, th, 0.0).unwrap().re;
                let fd = (sph_harm(l, m, th + h, 0.0).unwrap().re
                    - sph_harm(l, m, th - h, 0.0).unwrap().re)
                    / (2.0 * h);
                assert!(
                    (d - fd).abs() < 1e-7 * (1.0 + d.abs()),
                    "l={l} m={m} th={th}: {d} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn large_order_is_finite() {
        let t = LegendreTable::new(500, 0.7);
        let s: f64 = (-500i64..=500).map(|m| t.get(500, m).powi(2)).sum();
        assert!((s - 1001.0 / (4.0 * PI)).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn addition_formula(l in 0usize..=20, th in 0.0f64..PI, phi in 0.0f64..(2.0 * PI)) {
            let t = LegendreTable::new(l, th);
            let s: f64 = (-(l as i64)..=l as i64).map(|m| t.harmonic(l, m, phi).norm_sqr()).sum();
            prop_assert!((s - (2 * l + 1) as f64 / (4.0 * PI)).abs() < 1e-12);
        }
    }
}
