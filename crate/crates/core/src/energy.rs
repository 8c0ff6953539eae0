//! Energy functional
//!
//! ```text
//! J_ε(u) = ½‖u‖²₁,ε + (q²/4ε³)∫φ(u)u² − (1/p)|u⁺|ᵖ_p,ε
//! ```
//!
//! with its L² gradient, the Nehari functional `N_ε(u) = J'_ε(u)[u]`, the
//! density `Γ` and the three energy formulas that coincide on the Nehari
//! manifold.

use crate::bopp_podolsky::phi_of;
use crate::error::{Result, SbppError};
use crate::manifold::field::{dot, sum, ScalarField};
use crate::manifold::spectral::SpectralGrid;
use crate::manifold::torus::ModelParams;

/// The three pieces of `J_ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// `‖u‖²₁,ε`
    pub kinetic_mass: f64,
    /// `(q²/ε³)∫φ(u)u²`
    pub coupling: f64,
    /// `|u⁺|ᵖ_p,ε`
    pub power: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(kinetic_mass: f64, coupling: f64, power: f64, p: f64) -> Self {
        Self {
            kinetic_mass,
            coupling,
            power,
            total: 0.5 * kinetic_mass + 0.25 * coupling - power / p,
        }
    }

    /// Breakdown of `t·u` from the breakdown of `u`.
    pub fn scaled(&self, t: f64, p: f64) -> Self {
        let t2 = t * t;
        Self::new(
            t2 * self.kinetic_mass,
            t2 * t2 * self.coupling,
            t.abs().powf(p) * self.power,
            p,
        )
    }

    /// `N_ε = ‖u‖² + coupling − power`.
    pub fn nehari(&self) -> f64 {
        self.kinetic_mass + self.coupling - self.power
    }
}

/// A field with `φ(u)` and the energy pieces computed once.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub u: ScalarField,
    pub phi: ScalarField,
    pub energy: EnergyBreakdown,
}

impl Evaluation {
    pub fn new(u: ScalarField, params: &ModelParams) -> Self {
        let eps = params.eps;
        let eps3 = eps.powi(3);
        let grid = SpectralGrid::for_spec(u.spec());
        let kinetic = grid.quadratic_form(u.values(), |k2| eps * eps * k2 + 1.0) / eps3;
        let phi = phi_of(&u, eps);
        let dv = u.spec().cell_volume();
        let uu: Vec<f64> = u.values().iter().map(|v| v * v).collect();
        let coupling = params.q * params.q * dv * dot(phi.values(), &uu) / eps3;
        let power = power_integral(&u, params.p) / eps3;
        Self {
            energy: EnergyBreakdown::new(kinetic, coupling, power, params.p),
            u,
            phi,
        }
    }

    /// Evaluation of `t·u`, using `φ(tu) = t²φ(u)`.
    pub fn scaled(&self, t: f64, params: &ModelParams) -> Self {
        Self {
            u: self.u.scale(t),
            phi: self.phi.scale(t * t),
            energy: self.energy.scaled(t, params.p),
        }
    }

    /// L² gradient `(1/ε³)(−ε²Δu + u + q²φu − (u⁺)^{p−1})`.
    pub fn gradient(&self, params: &ModelParams) -> ScalarField {
        let eps = params.eps;
        let grid = SpectralGrid::for_spec(self.u.spec());
        // (−ε²Δ + 1) u in one pass
        let lin = grid.apply_symbol(self.u.values(), |k2| eps * eps * k2 + 1.0);
        let q2 = params.q * params.q;
        let pm1 = params.p - 1.0;
        let inv = 1.0 / eps.powi(3);
        let vals = lin
            .iter()
            .zip(self.u.values())
            .zip(self.phi.values())
            .map(|((&l, &u), &ph)| inv * (l + q2 * ph * u - u.max(0.0).powf(pm1)))
            .collect();
        ScalarField::from_raw(*self.u.spec(), vals)
    }

    /// L² representation of `N'_ε(u)`:
    /// `(1/ε³)(2(−ε²Δu + u) + 4q²φu − p(u⁺)^{p−1})`.
    pub fn nehari_gradient(&self, params: &ModelParams) -> ScalarField {
        let eps = params.eps;
        let grid = SpectralGrid::for_spec(self.u.spec());
        let lin = grid.apply_symbol(self.u.values(), |k2| eps * eps * k2 + 1.0);
        self.nehari_gradient_from_linear(&lin, params)
    }

    /// Both gradients sharing one application of `−ε²Δ + 1`.
    pub fn gradients(&self, params: &ModelParams) -> (ScalarField, ScalarField) {
        let eps = params.eps;
        let grid = SpectralGrid::for_spec(self.u.spec());
        let lin = grid.apply_symbol(self.u.values(), |k2| eps * eps * k2 + 1.0);
        let q2 = params.q * params.q;
        let p = params.p;
        let inv = 1.0 / eps.powi(3);
        let mut g = Vec::with_capacity(lin.len());
        let mut n = Vec::with_capacity(lin.len());
        for ((&l, &u), &ph) in lin.iter().zip(self.u.values()).zip(self.phi.values()) {
            let up = u.max(0.0).powf(p - 1.0);
            g.push(inv * (l + q2 * ph * u - up));
            n.push(inv * (2.0 * l + 4.0 * q2 * ph * u - p * up));
        }
        let spec = *self.u.spec();
        (ScalarField::from_raw(spec, g), ScalarField::from_raw(spec, n))
    }

    fn nehari_gradient_from_linear(&self, lin: &[f64], params: &ModelParams) -> ScalarField {
        let q2 = params.q * params.q;
        let p = params.p;
        let inv = 1.0 / params.eps.powi(3);
        let vals = lin
            .iter()
            .zip(self.u.values())
            .zip(self.phi.values())
            .map(|((&l, &u), &ph)| inv * (2.0 * l + 4.0 * q2 * ph * u - p * u.max(0.0).powf(p - 1.0)))
            .collect();
        ScalarField::from_raw(*self.u.spec(), vals)
    }

    /// Pointwise `Γ(u) = (½ − 1/p)(1/ε³)(u⁺)ᵖ − (q²/4ε³)u²φ(u)`.
    pub fn gamma(&self, params: &ModelParams) -> ScalarField {
        let inv = 1.0 / params.eps.powi(3);
        let a = 0.5 - 1.0 / params.p;
        let q2 = params.q * params.q;
        let p = params.p;
        self.u.zip_map(&self.phi, |u, ph| {
            inv * (a * u.max(0.0).powf(p) - 0.25 * q2 * u * u * ph)
        })
    }
}

/// `∫(u⁺)ᵖ`.
pub(crate) fn power_integral(u: &ScalarField, p: f64) -> f64 {
    let pos: Vec<f64> = u
        .values()
        .iter()
        .map(|&v| if v > 0.0 { v.powf(p) } else { 0.0 })
        .collect();
    sum(&pos) * u.spec().cell_volume()
}

pub fn energy_j(u: &ScalarField, params: &ModelParams) -> Result<EnergyBreakdown> {
    u.validate()?;
    Ok(Evaluation::new(u.clone(), params).energy)
}

pub fn grad_j(u: &ScalarField, params: &ModelParams) -> Result<ScalarField> {
    u.validate()?;
    Ok(Evaluation::new(u.clone(), params).gradient(params))
}

pub fn nehari_n(u: &ScalarField, params: &ModelParams) -> Result<f64> {
    u.validate()?;
    if u.values().iter().all(|&v| v == 0.0) {
        return Err(SbppError::ZeroField);
    }
    Ok(Evaluation::new(u.clone(), params).energy.nehari())
}

pub fn gamma_density(u: &ScalarField, params: &ModelParams) -> Result<ScalarField> {
    u.validate()?;
    Ok(Evaluation::new(u.clone(), params).gamma(params))
}

/// The three on-manifold energy formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyIdentities {
    /// `∫Γ(u)`
    pub gamma_integral: f64,
    /// `(½ − 1/p)‖u‖² + (¼ − 1/p)·coupling`
    pub without_power: f64,
    /// `‖u‖²/4 + (¼ − 1/p)·power`
    pub without_coupling: f64,
    pub max_rel_deviation: f64,
}

/// Default relative Nehari residual accepted by [`energy_identities`].
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

pub fn energy_identities(u: &ScalarField, params: &ModelParams) -> Result<EnergyIdentities> {
    energy_identities_with_tol(u, params, IDENTITY_TOLERANCE)
}

pub fn energy_identities_with_tol(u: &ScalarField, params: &ModelParams, tol: f64) -> Result<EnergyIdentities> {
    u.validate()?;
    let ev = Evaluation::new(u.clone(), params);
    identities_of(&ev, params, tol)
}

pub(crate) fn identities_of(ev: &Evaluation, params: &ModelParams, tol: f64) -> Result<EnergyIdentities> {
    let e = ev.energy;
    let residual = e.nehari().abs() / e.kinetic_mass.max(f64::MIN_POSITIVE);
    if residual > tol {
        return Err(SbppError::OffManifold {
            residual,
            tolerance: tol,
        });
    }
    let p = params.p;
    let gamma_integral = ev.gamma(params).integral();
    let without_power = (0.5 - 1.0 / p) * e.kinetic_mass + (0.25 - 1.0 / p) * e.coupling;
    let without_coupling = 0.25 * e.kinetic_mass + (0.25 - 1.0 / p) * e.power;
    let vals = [gamma_integral, without_power, without_coupling];
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut dev = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            dev = dev.max((vals[i] - vals[j]).abs() / scale);
        }
    }
    Ok(EnergyIdentities {
        gamma_integral,
        without_power,
        without_coupling,
        max_rel_deviation: dev,
    })
}
