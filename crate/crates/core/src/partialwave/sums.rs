use crate::error::{QedError, Result};
use crate::quadrature::KahanSum;
use crate::specfun::sph_bessel_j_array;

use super::Parity;

fn terms(kr: f64, l_max: usize, func: &'static str) -> Result<Vec<f64>> {
    if !(kr.is_finite() && kr > 0.0) {
        return Err(QedError::domain(
            func,
            format!("kr must be positive, got {kr}"),
        ));
    }
    if l_max == 0 {
        return Err(QedError::domain(func, "l_max must be positive"));
    }
    let j = sph_bessel_j_array(l_max, kr)?;
    let t: Vec<f64> = (0..=l_max)
        .map(|l| {
            let lf = l as f64;
            let r = j[l] / kr;
            lf * (lf + 1.0) * (2.0 * lf + 1.0) * r * r
        })
        .collect();
    // terms past the turning point fall off faster than geometrically, so
    // the last one bounds the tail
    let tail = t[l_max];
    if (l_max as f64) < kr + 20.0 || tail > 1e-10 {
        log::warn!("{func}: l_max = {l_max} truncates the sum at kr = {kr} (last term {tail:.3e})");
    }
    Ok(t)
}

/// Σ_{l=1}^{l_max} l(l+1)(2l+1) j_l(kr)²/(kr)², which tends to 2/3.
pub fn addition_sum(kr: f64, l_max: usize) -> Result<f64> {
    let t = terms(kr, l_max, "addition_sum")?;
    let mut acc = KahanSum::default();
    t.iter().for_each(|&x| acc.add(x));
    Ok(acc.value())
}

/// The same sum restricted to even or odd l.
pub fn parity_sum(kr: f64, parity: Parity, l_max: usize) -> Result<f64> {
    let t = terms(kr, l_max, "parity_sum")?;
    let mut acc = KahanSum::default();
    t.iter()
        .enumerate()
        .filter(|(l, _)| Parity::of(*l) == parity)
        .for_each(|(_, &x)| acc.add(x));
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussRule;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    // ∫_0^{π/2} sin³θ w(kr cos θ) dθ = ∫_0^1 (1 − u²) w(kr u) du
    fn trig_integral(kr: f64, w: impl Fn(f64) -> f64) -> f64 {
        let rule = GaussRule::new(64);
        let panels = 1 + (kr / 4.0).ceil() as usize;
        (0..panels)
            .map(|p| {
                let lo = p as f64 / panels as f64;
                rule.integrate(lo, lo + 1.0 / panels as f64, |u| (1.0 - u * u) * w(kr * u))
            })
            .sum()
    }

    #[test]
    fn converges_to_two_thirds() {
        assert!((addition_sum(5.0, 60).unwrap() - 2.0 / 3.0).abs() < 1e-10);
        assert!((addition_sum(0.1, 20).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_is_visible() {
        let short = addition_sum(40.0, 45).unwrap();
        let long = addition_sum(40.0, 120).unwrap();
        assert!((long - 2.0 / 3.0).abs() < 1e-10);
        assert!(long - short > 1e-4);
    }

    #[test]
    fn small_argument_parity() {
        let odd = parity_sum(1e-3, Parity::Odd, 20).unwrap();
        let even = parity_sum(1e-3, Parity::Even, 20).unwrap();
        assert!((odd - 2.0 / 3.0).abs() < 1e-6);
        assert!(even.abs() < 1e-6);
    }

    #[test]
    fn parities_match_trig_integrals() {
        for kr in [1e-3, 3.0, 7.5, 25.0] {
            let l_max = (kr as usize) + 40;
            let odd = parity_sum(kr, Parity::Odd, l_max).unwrap();
            let even = parity_sum(kr, Parity::Even, l_max).unwrap();
            let cos2 = trig_integral(kr, |x| x.cos().powi(2));
            let sin2 = trig_integral(kr, |x| x.sin().powi(2));
            assert!((odd - cos2).abs() < 1e-8, "kr = {kr}");
            assert!((even - sin2).abs() < 1e-8, "kr = {kr}");
            // quarter-wave shift of the origin swaps the two
            let shifted = trig_integral(kr, |x| (x + PI / 2.0).sin().powi(2));
            assert!((odd - shifted).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(addition_sum(0.0, 10).is_err());
        assert!(addition_sum(-1.0, 10).is_err());
        assert!(addition_sum(1.0, 0).is_err());
        assert!(parity_sum(f64::NAN, Parity::Odd, 10).is_err());
    }

    proptest! {
        #[test]
        fn parities_add_up(kr in 0.01f64..60.0) {
            let l_max = kr.ceil() as usize + 30;
            let total = addition_sum(kr, l_max).unwrap();
            let split = parity_sum(kr, Parity::Even, l_max).unwrap() + parity_sum(kr, Parity::Odd, l_max).unwrap();
            prop_assert!((total - split).abs() < 1e-12);
            prop_assert!((total - 2.0 / 3.0).abs() < 1e-10);
        }
    }
}
