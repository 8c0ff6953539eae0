use crate::diagnostics::barycenter::{circular_mean, Barycenter};
use crate::energy::Evaluation;
use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::spectral::SpectralGrid;
use crate::manifold::torus::{ModelParams, TorusSpec};

/// Where the energy density `Γ(u)` of a state sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationReport {
    pub barycenter: [f64; 3],
    pub resultant_length: [f64; 3],
    pub degenerate: bool,
    /// Grid point whose ball carries the most `Γ`-mass.
    pub center_q: [f64; 3],
    /// Ball mass over `∫Γ`, clipped to `[0, 1]`.
    pub mass_fraction_in_ball: f64,
    pub ball_radius: f64,
    pub total_gamma: f64,
    /// Periodic distance between the barycenter and `center_q`.
    pub barycenter_distance: f64,
}

/// Indicator of the closed periodic ball of `radius` around the origin.
pub(crate) fn ball_indicator(spec: &TorusSpec, radius: f64) -> Vec<f64> {
    (0..spec.len())
        .map(|i| {
            let d = spec.displacement(spec.point(i), [0.0; 3]);
            if d[0] * d[0] + d[1] * d[1] + d[2] * d[2] <= radius * radius {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

/// Finds the grid point `q` maximizing `∫_{B(q, radius)} Γ(u)` (lowest
/// index on ties) and relates it to the barycenter.
pub fn concentration_center(u: &ScalarField, params: &ModelParams, radius: f64) -> Result<ConcentrationReport> {
    u.validate()?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(SbppError::InvalidArgument(format!("radius = {radius} must be > 0")));
    }
    let spec = *u.spec();
    let gamma = Evaluation::new(u.clone(), params).gamma(params);
    let b: Barycenter = circular_mean(&gamma)?;
    let total = gamma.integral();
    let grid = SpectralGrid::for_spec(&spec);
    let mass = grid.convolve_even(gamma.values(), &ball_indicator(&spec, radius));
    let mut best = 0;
    for (i, &m) in mass.iter().enumerate() {
        if m > mass[best] {
            best = i;
        }
    }
    let q = spec.point(best);
    let fraction = (mass[best] * spec.cell_volume() / total).clamp(0.0, 1.0);
    Ok(ConcentrationReport {
        barycenter: b.point,
        resultant_length: b.resultant,
        degenerate: b.is_degenerate(),
        center_q: q,
        mass_fraction_in_ball: fraction,
        ball_radius: radius,
        total_gamma: total,
        barycenter_distance: spec.distance(b.point, q),
    })
}
