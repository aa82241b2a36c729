//! Spherical-mode machinery: coefficient sets, partial-wave sums, hemisphere
//! overlaps, the full-hemisphere coefficient map and a brute-force density
//! oracle built on top of it.

mod amplitude;
mod oracle;
mod overlap;
mod sums;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QedError, Result};

pub use amplitude::{
    amplitudes_at, far_field_amplitudes, flux_balance, parity_amplitudes, FluxBalance,
    ParityAmplitudes, ScatteringAmplitude,
};
pub use oracle::{default_oracle_l_max, oracle_density, oracle_weights};
pub use overlap::{hemisphere_map, hemisphere_overlap, overlap_i, ChannelMap, HemisphereMap};
pub use sums::{addition_sum, parity_sum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(l: usize) -> Self {
        if l.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Complex coefficients b_{l,m} for 0 ≤ l ≤ l_max, |m| ≤ l, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialWaveSet {
    l_max: usize,
    coeffs: Vec<Complex64>,
}

impl PartialWaveSet {
    pub fn zeros(l_max: usize) -> Self {
        PartialWaveSet {
            l_max,
            coeffs: vec![Complex64::new(0.0, 0.0); (l_max + 1) * (l_max + 1)],
        }
    }

    pub fn from_fn<F: FnMut(usize, i64) -> Complex64>(l_max: usize, mut f: F) -> Self {
        let mut s = Self::zeros(l_max);
        for l in 0..=l_max {
            for m in -(l as i64)..=(l as i64) {
                s.coeffs[Self::index(l, m)] = f(l, m);
            }
        }
        s
    }

    /// Unit amplitude in one (l, m) slot.
    pub fn unit(l_max: usize, l: usize, m: i64) -> Result<Self> {
        let mut s = Self::zeros(l_max);
        s.set(l, m, Complex64::new(1.0, 0.0))?;
        Ok(s)
    }

    pub fn from_vec(l_max: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = (l_max + 1) * (l_max + 1);
        if coeffs.len() != expected {
            return Err(QedError::Dimension {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(PartialWaveSet { l_max, coeffs })
    }

    fn index(l: usize, m: i64) -> usize {
        ((l * l + l) as i64 + m) as usize
    }

    fn check(&self, l: usize, m: i64) -> Result<usize> {
        if l > self.l_max || m.unsigned_abs() as usize > l {
            return Err(QedError::Index(format!(
                "(l, m) = ({l}, {m}) outside l_max = {}",
                self.l_max
            )));
        }
        Ok(Self::index(l, m))
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, l: usize, m: i64) -> Result<Complex64> {
        Ok(self.coeffs[self.check(l, m)?])
    }

    pub fn set(&mut self, l: usize, m: i64, v: Complex64) -> Result<()> {
        let i = self.check(l, m)?;
        self.coeffs[i] = v;
        Ok(())
    }

    /// Entries as ((l, m), b) in storage order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, i64), Complex64)> + '_ {
        (0..=self.l_max)
            .flat_map(|l| (-(l as i64)..=(l as i64)).map(move |m| (l, m)))
            .zip(self.coeffs.iter().copied())
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_storage() {
        let s = PartialWaveSet::zeros(4);
        assert_eq!(s.len(), 25);
        let mut s = PartialWaveSet::from_fn(3, |l, m| Complex64::new(l as f64, m as f64));
        assert_eq!(s.get(2, -1).unwrap(), Complex64::new(2.0, -1.0));
        assert!(s.get(4, 0).is_err());
        assert!(s.get(2, 3).is_err());
        assert!(s.set(1, -2, Complex64::new(1.0, 0.0)).is_err());
        s.set(3, 3, Complex64::new(0.0, 7.0)).unwrap();
        assert_eq!(s.get(3, 3).unwrap(), Complex64::new(0.0, 7.0));
        let keys: Vec<(usize, i64)> = s.iter().map(|(k, _)| k).collect();
        assert_eq!(keys.len(), 16);
        assert_eq!(keys[0], (0, 0));
        assert_eq!(keys[1], (1, -1));
        assert_eq!(keys[15], (3, 3));
        assert!(PartialWaveSet::from_vec(2, vec![Complex64::new(0.0, 0.0); 8]).is_err());
    }
}
