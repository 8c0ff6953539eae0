//! Differential operators and the ε-rescaled norms
//!
//! ```text
//! ‖v‖²₁,ε = (1/ε) ∫|∇v|² + (1/ε³) ∫v²        |v|ᵖ_p,ε = (1/ε³) ∫|v|ᵖ
//! ```
//!
//! Integrals use the periodic trapezoidal rule; `∫|∇v|²` is the spectral
//! quadratic form `Σ |k|² |v̂_k|²`, i.e. exactly `-⟨Δv, v⟩` on the grid.

use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::spectral::SpectralGrid;
use crate::manifold::torus::ModelParams;

/// Spectral Laplacian, multiplier `-|k|²`.
pub fn laplacian(u: &ScalarField) -> Result<ScalarField> {
    u.validate()?;
    let grid = SpectralGrid::for_spec(u.spec());
    Ok(ScalarField::from_raw(
        *u.spec(),
        grid.apply_symbol(u.values(), |k2| -k2),
    ))
}

/// Spectral gradient; the Nyquist mode of each component is zeroed.
pub fn gradient(u: &ScalarField) -> Result<[ScalarField; 3]> {
    u.validate()?;
    let grid = SpectralGrid::for_spec(u.spec());
    Ok([0, 1, 2].map(|a| ScalarField::from_raw(*u.spec(), grid.derivative(u.values(), a))))
}

/// `∫|∇u|²` on the grid.
pub fn dirichlet_energy(u: &ScalarField) -> f64 {
    SpectralGrid::for_spec(u.spec()).quadratic_form(u.values(), |k2| k2)
}

/// `‖u‖²₁,ε`.
pub fn norm_1eps_sq(u: &ScalarField, params: &ModelParams) -> Result<f64> {
    u.validate()?;
    let eps = params.eps;
    let form = SpectralGrid::for_spec(u.spec()).quadratic_form(u.values(), |k2| eps * eps * k2 + 1.0);
    Ok(form / eps.powi(3))
}

/// `∫|u|ᵖ` by the grid rule.
pub(crate) fn integral_abs_pow(u: &ScalarField, p: f64) -> f64 {
    let mut acc = 0.0;
    for chunk in u.values().chunks(1024) {
        acc += chunk.iter().map(|v| v.abs().powf(p)).sum::<f64>();
    }
    acc * u.spec().cell_volume()
}

/// `|u|_p,ε = ((1/ε³) ∫|u|ᵖ)^{1/p}` for `p ∈ [1, 6]`.
pub fn norm_p_eps(u: &ScalarField, p: f64, params: &ModelParams) -> Result<f64> {
    if !(1.0..=6.0).contains(&p) {
        return Err(SbppError::ExponentOutOfRange(p));
    }
    u.validate()?;
    Ok((integral_abs_pow(u, p) / params.eps.powi(3)).powf(1.0 / p))
}

/// Pointwise `max(u, 0)`.
pub fn positive_part(u: &ScalarField) -> ScalarField {
    u.map(|v| v.max(0.0))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::manifold::torus::TorusSpec;

    fn cube(n: usize) -> TorusSpec {
        TorusSpec::cube(2.0 * PI, n).unwrap()
    }

    fn params(eps: f64) -> ModelParams {
        ModelParams::new(eps, 5.0, 1.0, 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn laplacian_of_constant_vanishes() {
        let u = ScalarField::constant(cube(16), 1.0);
        assert!(laplacian(&u).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn laplacian_eigenfunction() {
        let spec = TorusSpec::new([1.5, 2.0, 2.5], [16, 16, 16]).unwrap();
        let l1 = 1.5;
        let u = ScalarField::from_fn(spec, |x| (2.0 * PI * x[0] / l1).cos());
        let lap = laplacian(&u).unwrap();
        let c = -(2.0 * PI / l1).powi(2);
        let scale = c.abs();
        for (a, b) in lap.values().iter().zip(u.values()) {
            assert!((a - c * b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn laplacian_rejects_nan() {
        let mut u = ScalarField::constant(cube(8), 1.0);
        u.values_mut()[3] = f64::NAN;
        assert!(matches!(laplacian(&u), Err(SbppError::NonFinite { .. })));
    }

    #[test]
    fn norm_1eps_examples() {
        let v = (2.0 * PI).powi(3);
        let one = ScalarField::constant(cube(16), 1.0);
        assert!(rel(norm_1eps_sq(&one, &params(1.0)).unwrap(), v) < 1e-12);
        assert!(rel(norm_1eps_sq(&one, &params(0.5)).unwrap(), 8.0 * v) < 1e-12);
        let c = ScalarField::from_fn(cube(16), |x| x[0].cos());
        assert!(rel(norm_1eps_sq(&c, &params(1.0)).unwrap(), v) < 1e-12);
    }

    #[test]
    fn norm_p_examples() {
        let v = (2.0 * PI).powi(3);
        let one = ScalarField::constant(cube(16), 1.0);
        for p in [1.0, 2.0, 4.5, 6.0] {
            let got = norm_p_eps(&one, p, &params(1.0)).unwrap();
            assert!(rel(got, v.powf(1.0 / p)) < 1e-12);
        }
        let zero = ScalarField::zeros(cube(8));
        assert_eq!(norm_p_eps(&zero, 3.0, &params(1.0)).unwrap(), 0.0);
        let c = ScalarField::from_fn(cube(16), |x| x[0].cos().abs());
        assert!(rel(norm_p_eps(&c, 2.0, &params(1.0)).unwrap(), (v / 2.0).sqrt()) < 1e-12);
        assert!(matches!(
            norm_p_eps(&one, 7.0, &params(1.0)),
            Err(SbppError::ExponentOutOfRange(_))
        ));
        assert!(norm_p_eps(&one, 0.5, &params(1.0)).is_err());
    }

    #[test]
    fn positive_part_examples() {
        let m = ScalarField::constant(cube(8), -1.0);
        assert_eq!(positive_part(&m).max_abs(), 0.0);
        let two = ScalarField::constant(cube(8), 2.0);
        assert_eq!(positive_part(&two), two);
        let s = ScalarField::from_fn(cube(16), |x| x[0].sin());
        let sp = positive_part(&s);
        let l2 = sp.inner(&sp);
        assert!(rel(l2, (2.0 * PI).powi(3) / 4.0) < 1e-12);
    }

    #[test]
    fn gradient_energy_matches_dirichlet_for_band_limited() {
        let u = ScalarField::from_fn(cube(16), |x| x[0].sin() * (2.0 * x[1]).cos() + x[2].cos());
        let g = gradient(&u).unwrap();
        let from_grad: f64 = g.iter().map(|c| c.inner(c)).sum();
        assert!(rel(from_grad, dirichlet_energy(&u)) < 1e-12);
    }
}
