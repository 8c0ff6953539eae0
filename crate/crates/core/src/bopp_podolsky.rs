//! The fourth-order electrostatic equation
//!
//! ```text
//! -ε²Δφ + ε⁴Δ²φ + φ = 4π u²
//! ```
//!
//! is diagonal in the Fourier basis: each coefficient of the source is
//! multiplied by `1 / (1 + ε²|k|² + ε⁴|k|⁴)`, which lies in `(0, 1]`.
//! The zero mode passes through unchanged, so the mean of `φ` equals the
//! mean of `4π u²` exactly.

use std::f64::consts::PI;

use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::spectral::SpectralGrid;
use crate::manifold::torus::ModelParams;

/// Inverse symbol of `1 - ε²Δ + ε⁴Δ²` at `|k|² = k_sq`.
#[inline]
pub fn phi_multiplier(k_sq: f64, eps: f64) -> f64 {
    let e2k = eps * eps * k_sq;
    1.0 / (1.0 + e2k + e2k * e2k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiSolveReport {
    pub min_value: f64,
    /// `(∫ φ² + |∇φ|² + |Δφ|²)^{1/2}` on the grid.
    pub h2_norm: f64,
    /// `|u|₂² = ∫ u²`, the size of the source.
    pub source_l2: f64,
}

/// Solves for `φ(u)` without validation or diagnostics.
pub(crate) fn phi_of(u: &ScalarField, eps: f64) -> ScalarField {
    let grid = SpectralGrid::for_spec(u.spec());
    let source: Vec<f64> = u.values().iter().map(|&v| 4.0 * PI * v * v).collect();
    ScalarField::from_raw(*u.spec(), grid.apply_symbol(&source, |k2| phi_multiplier(k2, eps)))
}

/// Unique grid solution `φ(u)` and its report.
pub fn solve_phi(u: &ScalarField, params: &ModelParams) -> Result<(ScalarField, PhiSolveReport)> {
    u.validate()?;
    let phi = phi_of(u, params.eps);
    let grid = SpectralGrid::for_spec(u.spec());
    let h2_sq = grid.quadratic_form(phi.values(), |k2| 1.0 + k2 + k2 * k2);
    let report = PhiSolveReport {
        min_value: phi.min(),
        h2_norm: h2_sq.sqrt(),
        source_l2: u.inner(u),
    };
    Ok((phi, report))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiProperties {
    /// `max|φ(tu) - t²φ(u)| / max|t²φ(u)|`.
    pub scaling_deviation: f64,
    pub min_phi: f64,
    /// Whether `min φ ≥ -1e-10 · max φ`.
    pub nonnegative: bool,
}

/// Measures the scaling law `φ(tu) = t²φ(u)` and the sign of `φ(u)`.
///
/// Positivity is only expected for small ε (no maximum principle holds for
/// the fourth-order operator), so a negative minimum is reported rather
/// than treated as an error.
pub fn check_phi_properties(u: &ScalarField, params: &ModelParams, t: f64) -> Result<PhiProperties> {
    if t == 0.0 || !t.is_finite() {
        return Err(SbppError::InvalidArgument(format!(
            "t = {t} must be nonzero and finite"
        )));
    }
    let (phi, _) = solve_phi(u, params)?;
    let (phi_t, _) = solve_phi(&u.scale(t), params)?;
    let scaled = phi.scale(t * t);
    let denom = scaled.max_abs();
    let dev = if denom == 0.0 {
        phi_t.max_abs()
    } else {
        (&phi_t - &scaled).max_abs() / denom
    };
    let min_phi = phi.min();
    Ok(PhiProperties {
        scaling_deviation: dev,
        min_phi,
        nonnegative: min_phi >= -1e-10 * phi.max().abs().max(1.0),
    })
}
