use crate::diagnostics::barycenter::{barycenter, cell_shift};
use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::torus::ModelParams;
use crate::nehari::minimize::{minimize_on_nehari, SolverOptions, Symmetry};
use crate::nehari::{NehariState, SolveStatus};

/// Result of a multi-start run.
#[derive(Debug, Clone)]
pub struct MultistartOutcome {
    /// Distinct converged states (modulo translation), sorted by energy.
    pub states: Vec<NehariState>,
    /// For every init: its final status, energy and the index into
    /// `states` of the class it landed in (if converged).
    pub runs: Vec<RunRecord>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub status: SolveStatus,
    pub energy: f64,
    pub iterations: usize,
    pub class: Option<usize>,
}

/// Relative L² distance between `a` and the best whole-cell translate of `b`.
///
/// Candidate translations align Γ-barycenters (when neither is degenerate)
/// and the positions of the maxima.
pub fn translation_distance(a: &NehariState, b: &NehariState, params: &ModelParams) -> f64 {
    let spec = *a.u.spec();
    let norm = a.u.inner(&a.u).max(b.u.inner(&b.u)).sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    let mut shifts = vec![cell_shift(&spec, spec.point(b.u.argmax()), spec.point(a.u.argmax()))];
    if let (Ok(ba), Ok(bb)) = (barycenter(&a.u, params), barycenter(&b.u, params)) {
        if !ba.is_degenerate() && !bb.is_degenerate() {
            shifts.push(cell_shift(&spec, bb.point, ba.point));
        }
    }
    shifts
        .into_iter()
        .map(|s| {
            let moved = b.u.shift(s);
            let d = &a.u - &moved;
            d.inner(&d).sqrt() / norm
        })
        .fold(f64::INFINITY, f64::min)
}

/// Runs [`minimize_on_nehari`] from every init and keeps one representative
/// per translation class (relative distance below `distinct_tol`).
///
/// When `opts.symmetry` is `None`, a half-shift symmetry already present in
/// an init is imposed on its run, so symmetric multi-bump starts stay on
/// their symmetric branch.
pub fn multistart_search(
    inits: &[ScalarField],
    params: &ModelParams,
    opts: &SolverOptions,
    distinct_tol: f64,
) -> Result<MultistartOutcome> {
    for (i, u) in inits.iter().enumerate() {
        if !u.has_positive_part() {
            return Err(SbppError::InvalidArgument(format!("init {i} has no positive part")));
        }
    }
    let mut classes: Vec<NehariState> = Vec::new();
    let mut runs = Vec::with_capacity(inits.len());
    let mut diagnostics = Vec::new();
    for (i, u0) in inits.iter().enumerate() {
        let mut run_opts = *opts;
        if run_opts.symmetry == Symmetry::None {
            run_opts.symmetry = Symmetry::detect(u0);
        }
        let state = minimize_on_nehari(u0, params, &run_opts)?;
        let mut rec = RunRecord {
            status: state.status,
            energy: state.energy.total,
            iterations: state.iterations,
            class: None,
        };
        if !state.is_converged() {
            diagnostics.push(format!(
                "init {i}: {} after {} iterations (residual {:.3e}, energy {:.6e})",
                state.status.as_str(),
                state.iterations,
                state.grad_residual,
                state.energy.total
            ));
            runs.push(rec);
            continue;
        }
        let found = classes
            .iter()
            .position(|c| translation_distance(c, &state, params) < distinct_tol);
        match found {
            Some(k) => {
                if state.energy.total < classes[k].energy.total {
                    classes[k] = state;
                }
                rec.class = Some(k);
            }
            None => {
                rec.class = Some(classes.len());
                classes.push(state);
            }
        }
        runs.push(rec);
    }
    if classes.is_empty() && !inits.is_empty() {
        diagnostics.push("no run converged".to_string());
    }
    // sort by energy and remap class indices
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&x, &y| classes[x].energy.total.total_cmp(&classes[y].energy.total));
    let mut rank = vec![0; classes.len()];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r;
    }
    for rec in runs.iter_mut() {
        rec.class = rec.class.map(|k| rank[k]);
    }
    let mut slots: Vec<Option<NehariState>> = classes.into_iter().map(Some).collect();
    let states = order
        .iter()
        .map(|&k| slots[k].take().expect("each class once"))
        .collect();
    Ok(MultistartOutcome {
        states,
        runs,
        diagnostics,
    })
}
