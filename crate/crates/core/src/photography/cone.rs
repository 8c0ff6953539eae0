//! The cone `C_ε = {θ v_ε + (1−θ) W_{ξ,ε}}`, its energy level
//! `c_ε = max J_ε(t_u u)`, and a local min-max refinement toward a
//! higher-energy critical point.

use std::f64::consts::PI;

use crate::bopp_podolsky::phi_multiplier;
use crate::energy::Evaluation;
use crate::error::{Result, SbppError};
use crate::manifold::field::{dot, ScalarField};
use crate::manifold::spectral::SpectralGrid;
use crate::manifold::torus::{ModelParams, TorusSpec};
use crate::nehari::minimize::{minimize_on_nehari, SolverOptions};
use crate::nehari::projection::{nehari_scale, project_evaluation};
use crate::nehari::{NehariState, Residuals, SolveStatus};
use crate::photography::bump::{build_bump, psi_map, sample_radial, BumpSpec};
use crate::photography::profile::GroundStateProfile;

/// Width (in units of ε) of the Gaussian reference profile `V`.
pub const V_WIDTH: f64 = 2.0;

/// `v_ε(x) = U(0)·exp(−|d/ε|²/2V_WIDTH²)·χ(|d|)` centered at `xi0`.
pub fn reference_bump(
    xi0: [f64; 3],
    params: &ModelParams,
    profile: &GroundStateProfile,
    target: &TorusSpec,
) -> Result<ScalarField> {
    BumpSpec::new(xi0, params).validate(target)?;
    let amp = profile.peak();
    let s2 = 2.0 * (V_WIDTH * params.eps).powi(2);
    Ok(sample_radial(target, xi0, params.cutoff_r, |d| {
        amp * (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / s2).exp()
    }))
}

/// `θ v + (1 − θ) W_{ξ,ε}`.
pub fn cone_point(
    theta: f64,
    xi: [f64; 3],
    v_bump: &ScalarField,
    params: &ModelParams,
    profile: &GroundStateProfile,
    target: &TorusSpec,
) -> Result<ScalarField> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(SbppError::InvalidArgument(format!("theta = {theta} outside [0, 1]")));
    }
    if v_bump.spec() != target {
        return Err(SbppError::ShapeMismatch {
            expected: target.resolution(),
            found: v_bump.spec().resolution(),
        });
    }
    if theta == 1.0 {
        return Ok(v_bump.clone());
    }
    let w = build_bump(&BumpSpec::new(xi, params), profile, target)?;
    if theta == 0.0 {
        return Ok(w);
    }
    Ok(v_bump.zip_map(&w, |v, w| theta * v + (1.0 - theta) * w))
}

/// Discretization of the cone.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeGrid {
    pub xi0: [f64; 3],
    pub thetas: Vec<f64>,
    pub centers: Vec<[f64; 3]>,
}

impl ConeGrid {
    /// `n_theta` equispaced θ in `[0, 1]` and an `m × m × m` lattice of
    /// centers offset by a quarter cell of the lattice.
    pub fn uniform(target: &TorusSpec, xi0: [f64; 3], n_theta: usize, m: usize) -> Result<Self> {
        if n_theta < 2 || m == 0 {
            return Err(SbppError::InvalidArgument(
                "cone grid needs n_theta >= 2 and m >= 1".into(),
            ));
        }
        let l = target.side_lengths();
        let thetas = (0..n_theta).map(|i| i as f64 / (n_theta - 1) as f64).collect();
        let mut centers = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let f = |c: usize, a: usize| (c as f64 + 0.25) * l[a] / m as f64;
                    centers.push([f(i, 0), f(j, 1), f(k, 2)]);
                }
            }
        }
        Ok(Self { xi0, thetas, centers })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSample {
    pub theta: f64,
    pub xi: [f64; 3],
    /// `J_ε(t_u u)`.
    pub energy: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxOptions {
    /// Run the local min-max refinement after sampling.
    pub refine: bool,
    pub tol: f64,
    pub max_iter: usize,
    pub armijo: f64,
    /// Energy margin above `m_inf_estimate` a refined state must clear, as a
    /// fraction of `m_inf_estimate`.
    pub delta_fraction: f64,
    /// Options for the one-bump support state.
    pub support: SolverOptions,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        Self {
            refine: true,
            tol: 1e-6,
            max_iter: 400,
            armijo: 1e-4,
            delta_fraction: 0.1,
            support: SolverOptions {
                tol: 1e-7,
                ..SolverOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HighEnergyStatus {
    /// Refinement reached a critical point above `m_inf_estimate + δ`.
    Converged,
    /// Refinement stopped early above the threshold; the state is a
    /// saddle candidate only.
    SaddleCandidate,
    /// Refinement fell back to the low-energy basin.
    CollapsedLow,
    /// Refinement disabled; the state is the projected cone maximizer.
    NotRefined,
}

impl HighEnergyStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            HighEnergyStatus::Converged => "converged",
            HighEnergyStatus::SaddleCandidate => "saddle_candidate",
            HighEnergyStatus::CollapsedLow => "collapsed_low",
            HighEnergyStatus::NotRefined => "not_refined",
        }
    }
}

#[derive(Debug, Clone)]
pub struct HighEnergyOutcome {
    pub c_eps: f64,
    pub best: ConeSample,
    pub samples: Vec<ConeSample>,
    pub state: NehariState,
    pub status: HighEnergyStatus,
    /// Energy of the one-bump state used as min-max support.
    pub support_energy: Option<f64>,
    pub diagnostics: Vec<String>,
}

/// Samples `J_ε(t_u u)` over the cone, then optionally refines the maximizer.
///
/// The refinement is a one-dimensional local min-max: with the one-bump
/// ground state `w` near the maximizing center as support, each iterate
/// `v` is replaced by the energy maximizer on the projected segment
/// between `w` and `v`, and `v` moves along the negative Nehari-tangential
/// gradient at that maximizer with Armijo backtracking.
pub fn high_energy_search(
    params: &ModelParams,
    profile: &GroundStateProfile,
    target: &TorusSpec,
    grid: &ConeGrid,
    opts: &MinimaxOptions,
) -> Result<HighEnergyOutcome> {
    if grid.thetas.is_empty() || grid.centers.is_empty() {
        return Err(SbppError::InvalidArgument("cone discretization is empty".into()));
    }
    let v = reference_bump(grid.xi0, params, profile, target)?;
    let mut samples = Vec::with_capacity(grid.thetas.len() * grid.centers.len());
    for &xi in &grid.centers {
        for &theta in &grid.thetas {
            let u = cone_point(theta, xi, &v, params, profile, target)?;
            let ev = Evaluation::new(u, params);
            let (pev, t) = project_evaluation(&ev, params)?;
            samples.push(ConeSample {
                theta,
                xi,
                energy: pev.energy.total,
                t,
            });
        }
    }
    let best = *samples
        .iter()
        .fold(None::<&ConeSample>, |acc, s| match acc {
            Some(b) if b.energy >= s.energy => Some(b),
            _ => Some(s),
        })
        .expect("nonempty");
    let c_eps = best.energy;
    let u_best = cone_point(best.theta, best.xi, &v, params, profile, target)?;
    let (start, t_start) = project_evaluation(&Evaluation::new(u_best, params), params)?;
    let mut diagnostics = Vec::new();

    if !opts.refine {
        return Ok(HighEnergyOutcome {
            c_eps,
            best,
            samples,
            state: NehariState::from_evaluation(start, t_start, params),
            status: HighEnergyStatus::NotRefined,
            support_energy: None,
            diagnostics,
        });
    }

    let support = minimize_on_nehari(&psi_map(best.xi, params, profile, target)?.u, params, &opts.support)?;
    if !support.is_converged() {
        diagnostics.push(format!(
            "support state {} (residual {:.3e})",
            support.status.as_str(),
            support.grad_residual
        ));
    }
    let support_energy = support.energy.total;
    let (state, iters, stopped) = local_minimax(&support.u, start, params, opts, &mut diagnostics)?;
    let threshold = profile.m_inf_estimate * (1.0 + opts.delta_fraction);
    let mut state = state;
    state.iterations = iters;
    let status = if state.energy.total <= threshold {
        diagnostics.push(format!(
            "refined energy {:.6e} is not above m_inf + delta = {:.6e}",
            state.energy.total, threshold
        ));
        HighEnergyStatus::CollapsedLow
    } else if state.grad_residual <= opts.tol && !stopped {
        HighEnergyStatus::Converged
    } else {
        HighEnergyStatus::SaddleCandidate
    };
    state.status = if status == HighEnergyStatus::Converged {
        SolveStatus::Converged
    } else if stopped {
        SolveStatus::LineSearchStalled
    } else {
        SolveStatus::IterationCap
    };
    Ok(HighEnergyOutcome {
        c_eps,
        best,
        samples,
        state,
        status,
        support_energy: Some(support_energy),
        diagnostics,
    })
}

/// Precomputed pieces of `J(t·((1−s)a + s b))`.
struct Segment {
    a: ScalarField,
    b: ScalarField,
    /// `‖a‖², ⟨a,b⟩, ‖b‖²` in `‖·‖₁,ε`.
    k: [f64; 3],
    /// Quartic coefficients of `(q²/ε³)∫φ(u_s)u_s²` in the basis
    /// `(1−s)^{4−j} s^j`.
    b4: [f64; 5],
}

impl Segment {
    fn new(a: &ScalarField, b: &ScalarField, params: &ModelParams) -> Self {
        let eps = params.eps;
        let eps3 = eps.powi(3);
        let spec = *a.spec();
        let dv = spec.cell_volume();
        let grid = SpectralGrid::for_spec(&spec);
        let (la, lb) = grid.apply_symbol_pair(a.values(), b.values(), |k2| 1.0 + eps * eps * k2);
        let k = [
            dv * dot(&la, a.values()) / eps3,
            dv * dot(&la, b.values()) / eps3,
            dv * dot(&lb, b.values()) / eps3,
        ];
        let aa: Vec<f64> = a.values().iter().map(|x| x * x).collect();
        let ab: Vec<f64> = a.values().iter().zip(b.values()).map(|(x, y)| x * y).collect();
        let bb: Vec<f64> = b.values().iter().map(|x| x * x).collect();
        let mult = |k2: f64| 4.0 * PI * phi_multiplier(k2, eps);
        let (paa, pab) = grid.apply_symbol_pair(&aa, &ab, mult);
        let pbb = grid.apply_symbol(&bb, mult);
        let c = params.q * params.q * dv / eps3;
        let m = |x: &[f64], y: &[f64]| c * dot(x, y);
        // u_s² = (1−s)² aa + 2s(1−s) ab + s² bb
        let (m_aa_aa, m_aa_ab, m_aa_bb) = (m(&paa, &aa), m(&paa, &ab), m(&paa, &bb));
        let (m_ab_ab, m_ab_bb, m_bb_bb) = (m(&pab, &ab), m(&pab, &bb), m(&pbb, &bb));
        let b4 = [
            m_aa_aa,
            4.0 * m_aa_ab,
            2.0 * m_aa_bb + 4.0 * m_ab_ab,
            4.0 * m_ab_bb,
            m_bb_bb,
        ];
        Self {
            a: a.clone(),
            b: b.clone(),
            k,
            b4,
        }
    }

    /// `(energy, t)` at `s`, or `None` when `u_s` has no positive part.
    fn energy(&self, s: f64, params: &ModelParams) -> Option<(f64, f64)> {
        let r = 1.0 - s;
        let kin = r * r * self.k[0] + 2.0 * r * s * self.k[1] + s * s * self.k[2];
        let mut coup = 0.0;
        for (j, c) in self.b4.iter().enumerate() {
            coup += c * r.powi(4 - j as i32) * s.powi(j as i32);
        }
        let p = params.p;
        let pos: Vec<f64> = self
            .a
            .values()
            .iter()
            .zip(self.b.values())
            .map(|(&x, &y)| {
                let u = r * x + s * y;
                if u > 0.0 {
                    u.powf(p)
                } else {
                    0.0
                }
            })
            .collect();
        let power = crate::manifold::field::sum(&pos) * self.a.spec().cell_volume() / params.eps.powi(3);
        if !(power > 0.0) {
            return None;
        }
        let t = nehari_scale(kin, coup.max(0.0), power, p).ok()?;
        let e = 0.5 * t * t * kin + 0.25 * t.powi(4) * coup - t.powf(p) * power / p;
        Some((e, t))
    }

    /// Maximizer of the projected energy over `s ∈ [0, 1]`.
    fn peak(&self, params: &ModelParams) -> Option<(f64, f64, f64)> {
        const SAMPLES: usize = 32;
        let vals: Vec<Option<(f64, f64)>> = (0..=SAMPLES)
            .map(|i| self.energy(i as f64 / SAMPLES as f64, params))
            .collect();
        let (imax, _) = vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|(e, _)| (i, e)))
            .fold(None::<(usize, f64)>, |acc, (i, e)| match acc {
                Some((_, be)) if be >= e => acc,
                _ => Some((i, e)),
            })?;
        let h = 1.0 / SAMPLES as f64;
        let mut lo = (imax as f64 - 1.0).max(0.0) * h;
        let mut hi = (imax as f64 + 1.0).min(SAMPLES as f64) * h;
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let f = |s: f64| self.energy(s, params).map_or(f64::NEG_INFINITY, |v| v.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        while hi - lo > 1e-7 {
            if f1 >= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = f(x2);
            }
        }
        let mut s = 0.5 * (lo + hi);
        let mut best = self.energy(s, params)?;
        if let Some(edge) = vals[imax] {
            if edge.0 > best.0 {
                s = imax as f64 * h;
                best = edge;
            }
        }
        Some((s, best.0, best.1))
    }

    fn point(&self, s: f64, t: f64) -> ScalarField {
        self.a.zip_map(&self.b, |x, y| t * ((1.0 - s) * x + s * y))
    }
}

/// `⟨·,·⟩₁,ε` against a fixed field.
struct Pairing {
    la: Vec<f64>,
    scale: f64,
}

impl Pairing {
    fn new(a: &ScalarField, params: &ModelParams) -> Self {
        let eps = params.eps;
        let grid = SpectralGrid::for_spec(a.spec());
        Self {
            la: grid.apply_symbol(a.values(), |k2| 1.0 + eps * eps * k2),
            scale: a.spec().cell_volume() / eps.powi(3),
        }
    }

    fn with(&self, b: &ScalarField) -> f64 {
        self.scale * dot(&self.la, b.values())
    }
}

fn unit(u: &ScalarField, params: &ModelParams) -> ScalarField {
    let n = Pairing::new(u, params).with(u);
    u.scale(1.0 / n.sqrt())
}

/// Unit-normalized component of `b` orthogonal to the unit field `a`.
fn orthogonal_unit(b: &ScalarField, a: &ScalarField, pa: &Pairing, params: &ModelParams) -> Option<ScalarField> {
    let c = b.axpy(-pa.with(b), a);
    if !c.has_positive_part() {
        return None;
    }
    Some(unit(&c, params))
}

/// Returns the final state, the iteration count and whether the line
/// search stalled.
fn local_minimax(
    support: &ScalarField,
    start: Evaluation,
    params: &ModelParams,
    opts: &MinimaxOptions,
    diagnostics: &mut Vec<String>,
) -> Result<(NehariState, usize, bool)> {
    let a = unit(support, params);
    let pa = Pairing::new(&a, params);
    let b0 = orthogonal_unit(&start.u, &a, &pa, params).ok_or(SbppError::NoPositivePart)?;
    let mut seg = Segment::new(&a, &b0, params);
    let Some((mut s, mut e, mut t)) = seg.peak(params) else {
        return Err(SbppError::NoPositivePart);
    };
    let mut trace = vec![e];
    let mut alpha = 1.0;
    let mut iterations = 0;
    loop {
        let ev = Evaluation::new(seg.point(s, t), params);
        let (ev, t_fix) = project_evaluation(&ev, params)?;
        let res = Residuals::compute(&ev, params);
        if res.tangential <= opts.tol || iterations >= opts.max_iter {
            let mut state = NehariState::from_evaluation(ev, t * t_fix, params);
            state.energy_trace = trace;
            if iterations >= opts.max_iter {
                diagnostics.push(format!("min-max iteration cap, residual {:.3e}", res.tangential));
            }
            return Ok((state, iterations, false));
        }
        // the weight of b in the peak scales the step, as in Li-Zhou
        let weight = (t * s).max(f64::MIN_POSITIVE);
        let mut accepted = None;
        while alpha >= 1e-12 {
            let moved = seg.b.axpy(-alpha / weight, &res.direction);
            if let Some(b) = orthogonal_unit(&moved, &a, &pa, params) {
                let tseg = Segment::new(&a, &b, params);
                if let Some((ts, te, tt)) = tseg.peak(params) {
                    if te <= e - opts.armijo * alpha * res.direction_sq {
                        accepted = Some((tseg, ts, te, tt));
                        break;
                    }
                }
            }
            alpha *= 0.5;
        }
        let Some((tseg, ts, te, tt)) = accepted else {
            diagnostics.push(format!("min-max line search stalled, residual {:.3e}", res.tangential));
            let mut state = NehariState::from_evaluation(ev, t * t_fix, params);
            state.energy_trace = trace;
            return Ok((state, iterations, true));
        };
        seg = tseg;
        s = ts;
        e = te;
        t = tt;
        trace.push(e);
        iterations += 1;
        alpha = (alpha * 2.0).min(64.0);
    }
}
