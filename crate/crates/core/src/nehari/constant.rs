use std::f64::consts::PI;

use crate::error::{Result, SbppError};
use crate::manifold::torus::ModelParams;

/// The positive constant solution `u ≡ c_*`.
///
/// For constant `u`, `φ = 4πc²` and the equation reduces to
/// `c^{p−2} = 1 + 4πq²c²`, whose unique positive root exceeds 1. Its energy
/// on a torus of volume `V` is `(V/ε³)[c²/4 + (¼ − 1/p)cᵖ]`, which blows up
/// like `ε⁻³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSolution {
    pub c_star: f64,
    /// `|c^{p−2} − 1 − 4πq²c²| / (1 + 4πq²c²)`.
    pub residual: f64,
    pub energy: f64,
}

pub fn constant_solution(params: &ModelParams, volume: f64) -> Result<ConstantSolution> {
    if !(volume > 0.0 && volume.is_finite()) {
        return Err(SbppError::InvalidArgument(format!("volume = {volume} must be > 0")));
    }
    let p = params.p;
    let k = 4.0 * PI * params.q * params.q;
    let g = |c: f64| c.powf(p - 2.0) - 1.0 - k * c * c;
    let dg = |c: f64| (p - 2.0) * c.powf(p - 3.0) - 2.0 * k * c;

    let mut lo = 1.0;
    let mut hi = 2.0;
    while g(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(SbppError::Bracket("constant solution root not bracketed".into()));
        }
    }
    let mut c = 0.5 * (lo + hi);
    for _ in 0..300 {
        let gc = g(c);
        if gc > 0.0 {
            hi = c;
        } else {
            lo = c;
        }
        if gc.abs() <= 2.0 * f64::EPSILON * (1.0 + k * c * c) || hi - lo <= 2.0 * f64::EPSILON * c {
            break;
        }
        let newton = c - gc / dg(c);
        c = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    let residual = g(c).abs() / (1.0 + k * c * c);
    let energy = volume / params.eps.powi(3) * (0.25 * c * c + (0.25 - 1.0 / p) * c.powf(p));
    Ok(ConstantSolution {
        c_star: c,
        residual,
        energy,
    })
}
