use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::diagnostics::barycenter::{barycenter, cell_shift};
use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::io::{load_field, save_field};
use crate::manifold::torus::{ModelParams, TorusSpec};
use crate::nehari::minimize::{minimize_on_nehari, SolverOptions};

/// Numerical ground state `U` of the limit problem
/// `−Δu + u + q²φ(u)u = (u⁺)^{p−1}` (ε = 1) on a large cubic torus,
/// centered on the middle grid point.
#[derive(Debug, Clone)]
pub struct GroundStateProfile {
    pub box_side: f64,
    pub field: ScalarField,
    pub p: f64,
    pub q: f64,
    /// Energy of `U`, the estimate of the limit level `m_∞`.
    pub m_inf_estimate: f64,
    /// `‖U‖²_{H¹}`.
    pub h1_norm_sq: f64,
    /// `|U⁺|_p`.
    pub p_norm: f64,
    /// `q²∫φ(U)U²`.
    pub coupling: f64,
    /// Full width at half maximum, averaged over the six axis directions.
    pub core_diameter: f64,
    pub grad_residual: f64,
    /// `|N(U)| / ‖U‖²_{H¹}`.
    pub nehari_residual: f64,
    pub iterations: usize,
    /// Stopping tolerance used for the descent.
    pub tol: f64,
}

impl GroundStateProfile {
    /// Parameters of the limit problem (ε = 1).
    pub fn limit_params(&self) -> ModelParams {
        ModelParams::new(1.0, self.p, self.q, 0.25 * self.box_side).expect("validated at construction")
    }

    /// Grid point at which `U` is centered.
    pub fn center(&self) -> [f64; 3] {
        let spec = self.field.spec();
        let n = spec.resolution();
        spec.point(spec.index(n[0] / 2, n[1] / 2, n[2] / 2))
    }

    /// `U(0)`.
    pub fn peak(&self) -> f64 {
        self.field.max()
    }

    /// `U` at displacement `z` from the center, by trigonometric
    /// interpolation; zero beyond half the box along any axis.
    pub fn value_at(&self, z: [f64; 3]) -> f64 {
        self.sample_grid([&[z[0]], &[z[1]], &[z[2]]])[0]
    }

    /// `U` on the tensor grid `axes[0] × axes[1] × axes[2]` of displacements,
    /// row-major, clamped at zero. Each axis is interpolated with the
    /// periodic sinc kernel of the profile grid, so nodes are reproduced
    /// exactly and off-node values are spectrally accurate.
    pub fn sample_grid(&self, axes: [&[f64]; 3]) -> Vec<f64> {
        let spec = self.field.spec();
        let n = spec.resolution();
        let h = spec.spacing();
        let w: Vec<Vec<f64>> = (0..3).map(|a| interpolation_matrix(axes[a], n[a], h[a])).collect();
        let m = [axes[0].len(), axes[1].len(), axes[2].len()];
        // contract axis 2, then 1, then 0
        let src = self.field.values();
        let mut t2 = vec![0.0; n[0] * n[1] * m[2]];
        for ij in 0..n[0] * n[1] {
            let row = &src[ij * n[2]..(ij + 1) * n[2]];
            for (c, wc) in w[2].chunks_exact(n[2]).enumerate() {
                t2[ij * m[2] + c] = dot(wc, row);
            }
        }
        let mut t1 = vec![0.0; n[0] * m[1] * m[2]];
        for i in 0..n[0] {
            for (b, wb) in w[1].chunks_exact(n[1]).enumerate() {
                let out = &mut t1[(i * m[1] + b) * m[2]..(i * m[1] + b + 1) * m[2]];
                for (j, &wj) in wb.iter().enumerate() {
                    if wj != 0.0 {
                        let line = &t2[(i * n[1] + j) * m[2]..(i * n[1] + j + 1) * m[2]];
                        out.iter_mut().zip(line).for_each(|(o, v)| *o += wj * v);
                    }
                }
            }
        }
        let plane = m[1] * m[2];
        let mut out = vec![0.0; m[0] * plane];
        for (a, wa) in w[0].chunks_exact(n[0]).enumerate() {
            let dst = &mut out[a * plane..(a + 1) * plane];
            for (i, &wi) in wa.iter().enumerate() {
                if wi != 0.0 {
                    dst.iter_mut()
                        .zip(&t1[i * plane..(i + 1) * plane])
                        .for_each(|(o, v)| *o += wi * v);
                }
            }
        }
        out.iter_mut().for_each(|v| *v = v.max(0.0));
        out
    }

    /// Writes `<stem>.fld` and the key=value sidecar `<stem>.meta`.
    pub fn save(&self, stem: &Path) -> Result<()> {
        let (fld, meta) = profile_paths(stem);
        save_field(&fld, &self.field)?;
        let n = self.field.spec().resolution()[0];
        let text = format!(
            "box_side={}\nresolution={}\np={}\nq={}\nm_inf_estimate={}\nh1_norm_sq={}\np_norm={}\ncoupling={}\ncore_diameter={}\ngrad_residual={}\nnehari_residual={}\niterations={}\ntol={}\n",
            self.box_side,
            n,
            self.p,
            self.q,
            self.m_inf_estimate,
            self.h1_norm_sq,
            self.p_norm,
            self.coupling,
            self.core_diameter,
            self.grad_residual,
            self.nehari_residual,
            self.iterations,
            self.tol
        );
        fs::write(&meta, text).map_err(|e| SbppError::io(&meta, e))
    }

    pub fn load(stem: &Path) -> Result<Self> {
        let (fld, meta) = profile_paths(stem);
        let field = load_field(&fld)?;
        let text = fs::read_to_string(&meta).map_err(|e| SbppError::io(&meta, e))?;
        let mut kv = BTreeMap::new();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| SbppError::Format(format!("{}: bad line '{line}'", meta.display())))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| -> Result<f64> {
            kv.get(k)
                .ok_or_else(|| SbppError::Format(format!("{}: missing key '{k}'", meta.display())))?
                .parse::<f64>()
                .map_err(|_| SbppError::Format(format!("{}: bad value for '{k}'", meta.display())))
        };
        let box_side = get("box_side")?;
        let spec = field.spec();
        if spec.side_lengths() != [box_side; 3] || spec.resolution()[0] as f64 != get("resolution")? {
            return Err(SbppError::Format(format!(
                "{}: field geometry does not match the sidecar",
                fld.display()
            )));
        }
        Ok(Self {
            box_side,
            p: get("p")?,
            q: get("q")?,
            m_inf_estimate: get("m_inf_estimate")?,
            h1_norm_sq: get("h1_norm_sq")?,
            p_norm: get("p_norm")?,
            coupling: get("coupling")?,
            core_diameter: get("core_diameter")?,
            grad_residual: get("grad_residual")?,
            nehari_residual: get("nehari_residual")?,
            iterations: get("iterations")? as usize,
            tol: get("tol")?,
            field,
        })
    }
}

fn profile_paths(stem: &Path) -> (PathBuf, PathBuf) {
    (stem.with_extension("fld"), stem.with_extension("meta"))
}

/// Minimizes the limit functional on a cube of side `box_side` with
/// `resolution` points per axis, starting from a centered Gaussian.
pub fn compute_limit_ground_state(
    box_side: f64,
    resolution: usize,
    p: f64,
    q: f64,
    opts: &SolverOptions,
) -> Result<GroundStateProfile> {
    let spec = TorusSpec::cube(box_side, resolution)?;
    let params = ModelParams::new(1.0, p, q, 0.25 * box_side)?;
    let mid = resolution / 2;
    let c = spec.point(spec.index(mid, mid, mid));
    let u0 = ScalarField::from_fn(spec, |x| {
        let d = spec.displacement(x, c);
        4.0 * (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / 2.0).exp()
    });
    let state = minimize_on_nehari(&u0, &params, opts)?;
    if !state.is_converged() {
        return Err(SbppError::NotConverged(format!(
            "limit ground state: {} after {} iterations, residual {:.3e}",
            state.status.as_str(),
            state.iterations,
            state.grad_residual
        )));
    }
    let b = barycenter(&state.u, &params)?;
    let u = state.u.shift(cell_shift(&spec, b.point, c));
    let e = state.energy;
    let profile = GroundStateProfile {
        box_side,
        core_diameter: half_max_width(&u),
        field: u,
        p,
        q,
        m_inf_estimate: e.total,
        h1_norm_sq: e.kinetic_mass,
        p_norm: e.power.powf(1.0 / p),
        coupling: e.coupling,
        grad_residual: state.grad_residual,
        nehari_residual: state.relative_nehari_residual(),
        iterations: state.iterations,
        tol: opts.tol,
    };
    Ok(profile)
}

/// FWHM of a single-peaked field, from linear interpolation along the six
/// axis rays leaving its maximum.
pub(crate) fn half_max_width(u: &ScalarField) -> f64 {
    let spec = u.spec();
    let n = spec.resolution();
    let h = spec.spacing();
    let top = u.argmax();
    let peak = u.values()[top];
    let c = spec.unravel(top);
    let mut total = 0.0;
    for a in 0..3 {
        for dir in [1i64, -1] {
            let at = |m: usize| {
                let mut idx = c;
                idx[a] = (c[a] as i64 + dir * m as i64).rem_euclid(n[a] as i64) as usize;
                u.values()[spec.index(idx[0], idx[1], idx[2])]
            };
            let mut r = (n[a] / 2) as f64 * h[a];
            for m in 1..=n[a] / 2 {
                let (v0, v1) = (at(m - 1), at(m));
                if v1 < 0.5 * peak {
                    r = h[a] * ((m - 1) as f64 + (v0 - 0.5 * peak) / (v0 - v1));
                    break;
                }
            }
            total += r;
        }
    }
    total / 3.0
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row `i` holds the weights of the `n` nodes (centered at index `n/2`,
/// spacing `h`) for the point `z[i]`; rows beyond the node range are zero.
fn interpolation_matrix(z: &[f64], n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; z.len() * n];
    let nf = n as f64;
    for (i, &zi) in z.iter().enumerate() {
        let s = zi / h + (n / 2) as f64;
        if s < 0.0 || s > nf - 1.0 {
            continue;
        }
        let row = &mut w[i * n..(i + 1) * n];
        let r = s.round();
        if (s - r).abs() <= 1e-9 {
            row[r as usize] = 1.0;
            continue;
        }
        for (j, wj) in row.iter_mut().enumerate() {
            let x = std::f64::consts::PI * (s - j as f64);
            *wj = if n % 2 == 0 {
                x.sin() / (nf * (x / nf).tan())
            } else {
                x.sin() / (nf * (x / nf).sin())
            };
        }
    }
    w
}
