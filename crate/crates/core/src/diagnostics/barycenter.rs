use std::f64::consts::PI;

use crate::energy::Evaluation;
use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::torus::{ModelParams, TorusSpec};

/// Resultant length below which an axis is flagged degenerate.
pub const DEGENERATE_RESULTANT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barycenter {
    pub point: [f64; 3],
    /// Mean resultant length per axis, in `[0, 1]`.
    pub resultant: [f64; 3],
    pub degenerate: [bool; 3],
}

impl Barycenter {
    pub fn is_degenerate(&self) -> bool {
        self.degenerate.iter().any(|&d| d)
    }
}

/// Per-axis circular mean of position weighted by `weights`.
///
/// Each coordinate is mapped to the angle `2πx/L`; the weighted mean of the
/// unit vectors gives the direction (mapped back to `[0, L)`) and its
/// length the concentration along that axis.
pub fn circular_mean(weights: &ScalarField) -> Result<Barycenter> {
    let spec = *weights.spec();
    let total = weights.integral();
    if !(total > 0.0) {
        return Err(SbppError::NonPositiveDensity(total));
    }
    let [n0, n1, n2] = spec.resolution();
    let n = [n0, n1, n2];
    // marginal sums per axis
    let mut marg = [vec![0.0; n0], vec![0.0; n1], vec![0.0; n2]];
    for (idx, &w) in weights.values().iter().enumerate() {
        let [i, j, k] = spec.unravel(idx);
        marg[0][i] += w;
        marg[1][j] += w;
        marg[2][k] += w;
    }
    let mut point = [0.0; 3];
    let mut resultant = [0.0; 3];
    let mut degenerate = [false; 3];
    let sum: f64 = marg[0].iter().sum();
    for a in 0..3 {
        let (mut c, mut s) = (0.0, 0.0);
        for (m, &w) in marg[a].iter().enumerate() {
            let theta = 2.0 * PI * m as f64 / n[a] as f64;
            c += w * theta.cos();
            s += w * theta.sin();
        }
        c /= sum;
        s /= sum;
        let r = (c * c + s * s).sqrt();
        resultant[a] = r.min(1.0);
        degenerate[a] = r < DEGENERATE_RESULTANT;
        let ang = s.atan2(c).rem_euclid(2.0 * PI);
        point[a] = ang / (2.0 * PI) * spec.side_lengths()[a];
    }
    Ok(Barycenter {
        point: spec.wrap(point),
        resultant,
        degenerate,
    })
}

/// Γ-weighted barycenter of `u`.
pub fn barycenter(u: &ScalarField, params: &ModelParams) -> Result<Barycenter> {
    u.validate()?;
    let ev = Evaluation::new(u.clone(), params);
    circular_mean(&ev.gamma(params))
}

/// Whole-cell shift that moves `from` closest to `to`.
pub(crate) fn cell_shift(spec: &TorusSpec, from: [f64; 3], to: [f64; 3]) -> [i64; 3] {
    let d = spec.displacement(to, from);
    let h = spec.spacing();
    [
        (d[0] / h[0]).round() as i64,
        (d[1] / h[1]).round() as i64,
        (d[2] / h[2]).round() as i64,
    ]
}
