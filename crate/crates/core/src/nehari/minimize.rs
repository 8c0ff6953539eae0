//! Projected Sobolev-gradient descent on the Nehari manifold.
//!
//! Each iteration computes the ‖·‖₁,ε Riesz representative of `J'` with the
//! component along `N'` removed, takes an Armijo-backtracked step along its
//! negative, and rescales the trial point back onto the manifold. Every
//! iterate is feasible and accepted steps never increase the energy.

use crate::energy::Evaluation;
use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::torus::ModelParams;
use crate::nehari::projection::project_evaluation;
use crate::nehari::{NehariState, Residuals, SolveStatus};

/// Optional symmetry imposed on every iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Symmetry {
    #[default]
    None,
    /// Invariance under translation by half the period along `axis`.
    HalfShift { axis: usize },
}

impl Symmetry {
    fn apply(&self, u: ScalarField) -> ScalarField {
        match *self {
            Symmetry::None => u,
            Symmetry::HalfShift { axis } => {
                let mut cells = [0i64; 3];
                cells[axis] = (u.spec().resolution()[axis] / 2) as i64;
                let s = u.shift(cells);
                u.zip_map(&s, |a, b| 0.5 * (a + b))
            }
        }
    }
}

impl Symmetry {
    /// Half-shift symmetry that `u` already has (to `1e-12` relative), if any.
    pub fn detect(u: &ScalarField) -> Symmetry {
        let scale = u.max_abs();
        if scale == 0.0 {
            return Symmetry::None;
        }
        for axis in 0..3 {
            let mut cells = [0i64; 3];
            cells[axis] = (u.spec().resolution()[axis] / 2) as i64;
            let s = u.shift(cells);
            let d = u
                .values()
                .iter()
                .zip(s.values())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if d <= 1e-12 * scale {
                return Symmetry::HalfShift { axis };
            }
        }
        Symmetry::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop when the tangential gradient residual drops to this value.
    pub tol: f64,
    pub max_iter: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Backtracking factor in `(0, 1)`.
    pub backtrack: f64,
    pub initial_step: f64,
    pub max_step: f64,
    /// Smallest admissible `|u⁺|_p,ε` before a run is declared collapsed.
    pub collapse_floor: f64,
    pub symmetry: Symmetry,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 2000,
            armijo: 1e-4,
            backtrack: 0.5,
            initial_step: 1.0,
            max_step: 64.0,
            collapse_floor: 1e-6,
            symmetry: Symmetry::None,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SbppError::InvalidArgument(m.to_string()));
        if !(self.tol > 0.0) {
            return bad("tol must be > 0");
        }
        if !(self.armijo > 0.0 && self.armijo < 1.0) {
            return bad("armijo must lie in (0, 1)");
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtrack must lie in (0, 1)");
        }
        if !(self.initial_step > 0.0 && self.max_step >= self.initial_step) {
            return bad("need 0 < initial_step <= max_step");
        }
        if let Symmetry::HalfShift { axis } = self.symmetry {
            if axis > 2 {
                return bad("symmetry axis must be 0, 1 or 2");
            }
        }
        Ok(())
    }
}

/// Descends from `u0` to a critical point of `J_ε` on the Nehari manifold.
///
/// Non-convergence is not an error: the returned state carries a status
/// flag (`IterationCap`, `LineSearchStalled`, `Collapsed`).
pub fn minimize_on_nehari(u0: &ScalarField, params: &ModelParams, opts: &SolverOptions) -> Result<NehariState> {
    opts.validate()?;
    u0.validate()?;
    if !u0.has_positive_part() {
        return Err(SbppError::NoPositivePart);
    }
    let start = Evaluation::new(opts.symmetry.apply(u0.clone()), params);
    let (mut ev, mut t_u) = project_evaluation(&start, params)?;
    let mut trace = vec![ev.energy.total];
    let mut alpha = opts.initial_step;
    let mut status = SolveStatus::IterationCap;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let res = Residuals::compute(&ev, params);
        if res.tangential <= opts.tol {
            status = SolveStatus::Converged;
            break;
        }
        let e0 = ev.energy.total;
        let mut accepted = None;
        while alpha >= 1e-14 * opts.initial_step {
            let trial = opts.symmetry.apply(ev.u.axpy(-alpha, &res.direction));
            if trial.has_positive_part() {
                let tev = Evaluation::new(trial, params);
                if let Ok((pev, t)) = project_evaluation(&tev, params) {
                    let e1 = pev.energy.total;
                    let predicted = opts.armijo * alpha * res.direction_sq;
                    let roundoff = 64.0 * f64::EPSILON * e0.abs();
                    if e1 <= e0 - predicted || (predicted <= roundoff && e1 <= e0) {
                        accepted = Some((pev, t));
                        break;
                    }
                }
            }
            alpha *= opts.backtrack;
        }
        let Some((pev, t)) = accepted else {
            status = SolveStatus::LineSearchStalled;
            break;
        };
        ev = pev;
        t_u = t;
        iterations += 1;
        trace.push(ev.energy.total);
        alpha = (alpha / opts.backtrack).min(opts.max_step);

        let pnorm = ev.energy.power.powf(1.0 / params.p);
        if pnorm < opts.collapse_floor {
            status = SolveStatus::Collapsed;
            break;
        }
    }

    let mut state = NehariState::from_evaluation(ev, t_u, params);
    if status == SolveStatus::IterationCap && state.grad_residual <= opts.tol {
        status = SolveStatus::Converged;
    }
    state.status = status;
    state.iterations = iterations;
    state.energy_trace = trace;
    Ok(state)
}
