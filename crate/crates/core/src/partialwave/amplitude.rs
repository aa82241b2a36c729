use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QedError, Result};
use crate::mirror1d::PhaseDistance;
use crate::modefield::AngularGrid;
use crate::specfun::LegendreTable;

use super::PartialWaveSet;

/// Complex far-field amplitude sampled at a fixed list of directions.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringAmplitude {
    values: Vec<Complex64>,
}

impl ScatteringAmplitude {
    pub fn new(values: Vec<Complex64>) -> Self {
        ScatteringAmplitude { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check(&self, grid: &AngularGrid) -> Result<()> {
        if self.len() != grid.len() {
            return Err(QedError::Dimension {
                expected: grid.len(),
                got: self.len(),
            });
        }
        Ok(())
    }

    /// ∫ |f|² dΩ over the grid's hemisphere.
    pub fn norm_sqr_integral(&self, grid: &AngularGrid) -> Result<f64> {
        self.check(grid)?;
        Ok(self
            .values
            .iter()
            .zip(grid.weights())
            .map(|(v, w)| w * v.norm_sqr())
            .sum())
    }
}

/// Even/odd amplitudes and their incoming/outgoing combinations.
#[derive(Debug, Clone)]
pub struct ParityAmplitudes {
    pub even: ScatteringAmplitude,
    pub odd: ScatteringAmplitude,
    pub incoming: ScatteringAmplitude,
    pub outgoing: ScatteringAmplitude,
}

/// f^{e/o}(Ω) = Σ_{even/odd l, m} b_{l,m} i^l Y_{l,m}(Ω) at arbitrary (θ, φ),
/// with f^in = (i/2)(f^o − f^e) and f^out = (i/2)(f^o + f^e).
pub fn amplitudes_at(b: &PartialWaveSet, points: &[(f64, f64)]) -> ParityAmplitudes {
    let l_max = b.l_max();
    let i = Complex64::i();
    let pairs: Vec<(Complex64, Complex64)> = points
        .par_iter()
        .map(|&(theta, phi)| {
            let t = LegendreTable::new(l_max, theta);
            let mut fe = Complex64::new(0.0, 0.0);
            let mut fo = Complex64::new(0.0, 0.0);
            for ((l, m), bl) in b.iter() {
                if bl.norm_sqr() == 0.0 {
                    continue;
                }
                let v = bl * i.powu(l as u32) * t.harmonic(l, m, phi);
                if l % 2 == 0 {
                    fe += v;
                } else {
                    fo += v;
                }
            }
            (fe, fo)
        })
        .collect();
    let even = pairs.iter().map(|p| p.0).collect::<Vec<_>>();
    let odd = pairs.iter().map(|p| p.1).collect::<Vec<_>>();
    let incoming = pairs.iter().map(|&(e, o)| 0.5 * i * (o - e)).collect();
    let outgoing = pairs.iter().map(|&(e, o)| 0.5 * i * (o + e)).collect();
    ParityAmplitudes {
        even: ScatteringAmplitude::new(even),
        odd: ScatteringAmplitude::new(odd),
        incoming: ScatteringAmplitude::new(incoming),
        outgoing: ScatteringAmplitude::new(outgoing),
    }
}

/// Parity amplitudes on the nodes of a hemisphere grid.
pub fn parity_amplitudes(b: &PartialWaveSet, grid: &AngularGrid) -> ParityAmplitudes {
    amplitudes_at(b, &grid.nodes())
}

fn far_field_at(
    fin: Complex64,
    fout: Complex64,
    on_mirror: bool,
    a: f64,
) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let e = Complex64::from_polar(1.0, a);
    let (s, c) = a.sin_cos();
    if on_mirror {
        (i * (-2.0 * e * c * fin), i * (2.0 * i * e * s * fin))
    } else {
        (i * (fin + fout), i * (fin - fout))
    }
}

/// Far-field amplitudes (g^e, g^o) of the focal region for a lossless
/// mirror covering θ < α, from the incoming and outgoing vacuum amplitudes.
pub fn far_field_amplitudes(
    amps: &ParityAmplitudes,
    a: PhaseDistance,
    alpha: f64,
    grid: &AngularGrid,
) -> Result<(ScatteringAmplitude, ScatteringAmplitude)> {
    amps.incoming.check(grid)?;
    amps.outgoing.check(grid)?;
    let (ge, go) = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(k, &(theta, _))| {
            far_field_at(
                amps.incoming.values[k],
                amps.outgoing.values[k],
                theta < alpha,
                a.value(),
            )
        })
        .unzip();
    Ok((ScatteringAmplitude::new(ge), ScatteringAmplitude::new(go)))
}

/// Power balance of the far-field relations.
///
/// The hemisphere figures use the grid directions only. The sphere figures
/// add the antipodal directions, with the transmission pattern taken
/// symmetric under Ω → −Ω (mirror cap θ < α paired with the opposite
/// interface θ > π − α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxBalance {
    /// ∫_hemisphere (|g^e|² + |g^o|²) dΩ
    pub far_field: f64,
    /// ∫_hemisphere [4(1 − T)|f^in|² + 2T(|f^in|² + |f^out|²)] dΩ
    pub expected: f64,
    /// 4 ∫_hemisphere |f^in|² dΩ
    pub four_incoming: f64,
    /// ∫_sphere (|g^e|² + |g^o|²) dΩ
    pub far_field_sphere: f64,
    /// 4 ∫_sphere |f^in|² dΩ
    pub four_incoming_sphere: f64,
}

pub fn flux_balance(
    b: &PartialWaveSet,
    a: PhaseDistance,
    alpha: f64,
    grid: &AngularGrid,
) -> Result<FluxBalance> {
    let nodes = grid.nodes();
    let weights = grid.weights();
    let here = amplitudes_at(b, &nodes);
    let flipped: Vec<(f64, f64)> = nodes
        .iter()
        .map(|&(t, p)| (std::f64::consts::PI - t, p + std::f64::consts::PI))
        .collect();
    let there = amplitudes_at(b, &flipped);
    let (ge, go) = far_field_amplitudes(&here, a, alpha, grid)?;
    let far_field = ge.norm_sqr_integral(grid)? + go.norm_sqr_integral(grid)?;
    let mut expected = 0.0;
    let mut far_back = 0.0;
    for (k, w) in weights.iter().enumerate() {
        let on_mirror = nodes[k].0 < alpha;
        let fin = here.incoming.values[k].norm_sqr();
        let fout = here.outgoing.values[k].norm_sqr();
        expected += w * if on_mirror {
            4.0 * fin
        } else {
            2.0 * (fin + fout)
        };
        let (e, o) = far_field_at(
            there.incoming.values[k],
            there.outgoing.values[k],
            on_mirror,
            a.value(),
        );
        far_back += w * (e.norm_sqr() + o.norm_sqr());
    }
    let four_incoming = 4.0 * here.incoming.norm_sqr_integral(grid)?;
    let four_incoming_sphere = four_incoming + 4.0 * there.incoming.norm_sqr_integral(grid)?;
    Ok(FluxBalance {
        far_field,
        expected,
        four_incoming,
        far_field_sphere: far_field + far_back,
        four_incoming_sphere,
    })
}
