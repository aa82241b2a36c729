use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QedError, Result};
use crate::mirror1d::PhaseDistance;
use crate::quadrature::gauss_legendre;
use crate::specfun::{LegendreTable, SphericalIndex};

use super::PartialWaveSet;

/// Gauss–Legendre nodes in u = cos θ on [0, 1] and the orthonormal Legendre
/// tables at each of them.
struct HemisphereNodes {
    weights: Vec<f64>,
    tables: Vec<LegendreTable>,
}

impl HemisphereNodes {
    fn new(l_max: usize) -> Self {
        let (x, w) = gauss_legendre(2 * l_max + 8);
        let tables = x
            .par_iter()
            .map(|&x| LegendreTable::new(l_max, (0.5 * (x + 1.0)).acos()))
            .collect();
        HemisphereNodes {
            weights: w.iter().map(|w| 0.5 * w).collect(),
            tables,
        }
    }

    /// 2π ∫_0^1 Ȳ_l^m Ȳ_{l'}^m du for all l, l' ≥ |m| (zero elsewhere).
    fn gram(&self, l_max: usize, m: i64) -> Vec<f64> {
        let n = l_max + 1;
        let m0 = m.unsigned_abs() as usize;
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|l| {
                if l < m0 {
                    vec![0.0; self.tables.len()]
                } else {
                    self.tables.iter().map(|t| t.get(l, m)).collect()
                }
            })
            .collect();
        let mut g = vec![0.0; n * n];
        for lp in m0..n {
            for l in lp..n {
                let v: f64 = (0..self.weights.len())
                    .map(|k| self.weights[k] * cols[lp][k] * cols[l][k])
                    .sum();
                g[lp * n + l] = 2.0 * std::f64::consts::PI * v;
                g[l * n + lp] = g[lp * n + l];
            }
        }
        g
    }
}

fn overlap_sign(lp: usize, l: usize) -> f64 {
    if (l + lp).div_ceil(2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_pair(lp: usize, l: usize, m: i64) -> Result<()> {
    SphericalIndex::new(l, m)?;
    SphericalIndex::new(lp, m)?;
    Ok(())
}

/// ∫_hemisphere Y*_{l,m} Y_{l',m} dΩ without the sign factor, for any parity.
/// Same-parity pairs with l ≠ l' vanish.
pub fn hemisphere_overlap(l_prime: usize, l: usize, m: i64) -> Result<f64> {
    check_pair(l_prime, l, m)?;
    let l_max = l.max(l_prime);
    let nodes = HemisphereNodes::new(l_max);
    let v: f64 = nodes
        .tables
        .iter()
        .zip(&nodes.weights)
        .map(|(t, w)| w * t.get(l, m) * t.get(l_prime, m))
        .sum();
    Ok(2.0 * std::f64::consts::PI * v)
}

/// Signed hemisphere overlap I_{l',l,m} = (−1)^{(l+l'+1)/2} ∫_hemisphere
/// Y*_{l,m} Y_{l',m} dΩ, defined for l + l' odd.
pub fn overlap_i(l_prime: usize, l: usize, m: i64) -> Result<f64> {
    if (l + l_prime).is_multiple_of(2) {
        return Err(QedError::domain(
            "overlap_i",
            format!("l = {l} and l' = {l_prime} have the same parity"),
        ));
    }
    Ok(overlap_sign(l_prime, l) * hemisphere_overlap(l_prime, l, m)?)
}

/// The full-hemisphere coefficient map restricted to one azimuthal order m,
/// as a dense (l_max+1)² matrix acting on b_{·,m}.
#[derive(Debug, Clone)]
pub struct ChannelMap {
    l_max: usize,
    m: i64,
    data: Vec<Complex64>,
}

impl ChannelMap {
    fn build(l_max: usize, m: i64, a: PhaseDistance, gram: &[f64]) -> Self {
        let n = l_max + 1;
        let m0 = m.unsigned_abs() as usize;
        let i = Complex64::i();
        let a = a.value();
        let e = Complex64::from_polar(1.0, a);
        let even = e * a.cos();
        let odd = i * e * a.sin();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for lp in m0..n {
            let pre = if lp % 2 == 0 { even } else { odd };
            // the cross sum enters with a factor 2: the odd (even) extension of
            // a hemisphere-limited field doubles its opposite-parity projection
            let cross = if lp % 2 == 0 { -2.0 * i } else { 2.0 * i };
            for l in m0..n {
                data[lp * n + l] = if l == lp {
                    pre
                } else if (l + lp) % 2 == 1 {
                    pre * cross * (overlap_sign(lp, l) * gram[lp * n + l])
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
        }
        ChannelMap { l_max, m, data }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Coefficient of b_l in c_{l'}.
    pub fn entry(&self, l_prime: usize, l: usize) -> Complex64 {
        self.data[l_prime * (self.l_max + 1) + l]
    }

    /// c = M b for one channel; `b[l]` is b_{l,m}.
    pub fn apply(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.l_max + 1;
        if b.len() != n {
            return Err(QedError::Dimension {
                expected: n,
                got: b.len(),
            });
        }
        Ok((0..n)
            .map(|lp| (0..n).map(|l| self.data[lp * n + l] * b[l]).sum())
            .collect())
    }
}

/// The full-hemisphere coefficient map at phase distance a, configured for a
/// fixed truncation l_max.
#[derive(Debug, Clone, Copy)]
pub struct HemisphereMap {
    l_max: usize,
    a: PhaseDistance,
}

impl HemisphereMap {
    pub fn new(l_max: usize, a: PhaseDistance) -> Self {
        HemisphereMap { l_max, a }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn channel(&self, m: i64) -> Result<ChannelMap> {
        if m.unsigned_abs() as usize > self.l_max {
            return Err(QedError::Index(format!(
                "m = {m} exceeds l_max = {}",
                self.l_max
            )));
        }
        let nodes = HemisphereNodes::new(self.l_max);
        Ok(ChannelMap::build(
            self.l_max,
            m,
            self.a,
            &nodes.gram(self.l_max, m),
        ))
    }

    pub fn apply(&self, b: &PartialWaveSet) -> Result<PartialWaveSet> {
        if b.l_max() != self.l_max {
            return Err(QedError::Dimension {
                expected: self.l_max,
                got: b.l_max(),
            });
        }
        let l_max = self.l_max;
        let nodes = HemisphereNodes::new(l_max);
        let ms: Vec<i64> = (-(l_max as i64)..=(l_max as i64)).collect();
        let columns: Vec<(i64, Vec<Complex64>)> = ms
            .into_par_iter()
            .map(|m| {
                let col: Vec<Complex64> = (0..=l_max)
                    .map(|l| b.get(l, m).unwrap_or(Complex64::new(0.0, 0.0)))
                    .collect();
                if col.iter().all(|c| c.norm_sqr() == 0.0) {
                    return Ok((m, col));
                }
                let map = ChannelMap::build(l_max, m, self.a, &nodes.gram(l_max, m));
                Ok((m, map.apply(&col)?))
            })
            .collect::<Result<_>>()?;
        let mut c = PartialWaveSet::zeros(l_max);
        for (m, col) in columns {
            for (l, v) in col.into_iter().enumerate() {
                if l >= m.unsigned_abs() as usize {
                    c.set(l, m, v)?;
                }
            }
        }
        Ok(c)
    }
}

/// Applies the full-hemisphere map with the truncation of `b`.
pub fn hemisphere_map(b: &PartialWaveSet, a: PhaseDistance) -> Result<PartialWaveSet> {
    HemisphereMap::new(b.l_max(), a).apply(b)
}
