//! Nehari projection, constrained descent to ground states, multi-start
//! search for distinct critical points, and the constant solution.

pub mod constant;
pub mod init;
pub mod minimize;
pub mod multistart;
pub mod projection;

pub use constant::{constant_solution, ConstantSolution};
pub use init::InitSpec;
pub use minimize::{minimize_on_nehari, SolverOptions, Symmetry};
pub use multistart::{multistart_search, MultistartOutcome};
pub use projection::{nehari_scale, project_to_nehari};

use crate::energy::{EnergyBreakdown, Evaluation};
use crate::manifold::field::ScalarField;
use crate::manifold::spectral::SpectralGrid;
use crate::manifold::torus::ModelParams;

/// How a [`NehariState`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Projection only, no descent attempted.
    Projected,
    /// Tangential gradient residual reached the tolerance.
    Converged,
    IterationCap,
    /// Line search could not find a decrease before the step underflowed.
    LineSearchStalled,
    /// `|u⁺|_p,ε` fell below the collapse floor.
    Collapsed,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Projected => "projected",
            SolveStatus::Converged => "converged",
            SolveStatus::IterationCap => "iteration_cap",
            SolveStatus::LineSearchStalled => "line_search_stalled",
            SolveStatus::Collapsed => "collapsed",
        }
    }
}

/// A field on the Nehari manifold with cached diagnostics.
#[derive(Debug, Clone)]
pub struct NehariState {
    pub u: ScalarField,
    pub phi: ScalarField,
    /// Last projection factor applied.
    pub t_u: f64,
    pub energy: EnergyBreakdown,
    /// `N_ε(u)`, absolute.
    pub nehari_residual: f64,
    /// `‖∇J − λ∇N‖₁,ε / ‖u‖₁,ε` with the least-squares multiplier λ.
    pub grad_residual: f64,
    /// `‖∇J‖₁,ε / ‖u‖₁,ε` (dual norm of `J'`).
    pub full_grad_residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Energy after every accepted step, starting with the projected initial field.
    pub energy_trace: Vec<f64>,
}

impl NehariState {
    pub(crate) fn from_evaluation(ev: Evaluation, t_u: f64, params: &ModelParams) -> Self {
        let res = Residuals::compute(&ev, params);
        Self {
            nehari_residual: ev.energy.nehari(),
            energy: ev.energy,
            u: ev.u,
            phi: ev.phi,
            t_u,
            grad_residual: res.tangential,
            full_grad_residual: res.full,
            iterations: 0,
            status: SolveStatus::Projected,
            energy_trace: vec![],
        }
    }

    pub fn is_converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// `|N_ε(u)| / ‖u‖²₁,ε`.
    pub fn relative_nehari_residual(&self) -> f64 {
        self.nehari_residual.abs() / self.energy.kinetic_mass
    }
}

/// Sobolev (‖·‖₁,ε) gradients and the Nehari-tangential residual.
pub(crate) struct Residuals {
    /// Tangential descent direction `d − λ n` (Riesz representatives).
    pub direction: ScalarField,
    /// `‖d − λn‖²₁,ε`
    pub direction_sq: f64,
    pub tangential: f64,
    pub full: f64,
}

impl Residuals {
    pub(crate) fn compute(ev: &Evaluation, params: &ModelParams) -> Self {
        let eps = params.eps;
        let eps3 = eps.powi(3);
        let (g, n) = ev.gradients(params);
        let grid = SpectralGrid::for_spec(ev.u.spec());
        let gs: Vec<f64> = g.values().iter().map(|v| v * eps3).collect();
        let ns: Vec<f64> = n.values().iter().map(|v| v * eps3).collect();
        let (d, nd) = grid.apply_symbol_pair(&gs, &ns, |k2| 1.0 / (1.0 + eps * eps * k2));
        let spec = *ev.u.spec();
        let d = ScalarField::from_raw(spec, d);
        let nd = ScalarField::from_raw(spec, nd);
        let gd = g.inner(&d).max(0.0);
        let gn = g.inner(&nd);
        let nn = n.inner(&nd);
        let lambda = if nn > 0.0 { gn / nn } else { 0.0 };
        let direction = d.axpy(-lambda, &nd);
        let direction_sq = (gd - lambda * gn).max(0.0);
        let norm_u = ev.energy.kinetic_mass.sqrt().max(f64::MIN_POSITIVE);
        Self {
            direction,
            direction_sq,
            tangential: direction_sq.sqrt() / norm_u,
            full: gd.sqrt() / norm_u,
        }
    }
}
