use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::torus::{ModelParams, TorusSpec};
use crate::nehari::{project_to_nehari, NehariState};
use crate::photography::profile::GroundStateProfile;

/// Minimum number of target grid cells across the profile core (its FWHM
/// scaled by ε).
pub const MIN_CORE_CELLS: f64 = 4.0;

/// Center, scale and cutoff radius of a concentrated bump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    pub center: [f64; 3],
    pub eps: f64,
    pub cutoff_r: f64,
}

impl BumpSpec {
    pub fn new(center: [f64; 3], params: &ModelParams) -> Self {
        Self {
            center,
            eps: params.eps,
            cutoff_r: params.cutoff_r,
        }
    }

    pub fn validate(&self, target: &TorusSpec) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(SbppError::InvalidArgument(format!("eps = {} must be > 0", self.eps)));
        }
        if !(self.cutoff_r > 0.0 && self.cutoff_r < 0.5 * target.min_side()) {
            return Err(SbppError::InvalidArgument(format!(
                "cutoff_r = {} must lie in (0, {})",
                self.cutoff_r,
                0.5 * target.min_side()
            )));
        }
        if self.center.iter().any(|c| !c.is_finite()) {
            return Err(SbppError::InvalidArgument("bump center must be finite".into()));
        }
        Ok(())
    }
}

/// C² cutoff: 1 on `[0, r/2]`, 0 on `[r, ∞)`, quintic smoothstep between.
pub fn cutoff(rho: f64, r: f64) -> f64 {
    let s = rho / r;
    if s <= 0.5 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        let t = 2.0 * s - 1.0;
        1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

/// Number of target grid cells across `ε·core_diameter`.
pub fn core_cells(profile: &GroundStateProfile, eps: f64, target: &TorusSpec) -> f64 {
    let h = target.spacing().iter().cloned().fold(0.0, f64::max);
    profile.core_diameter * eps / h
}

/// Splits a point into its nearest grid index and the remaining offset in
/// cells; offsets below `1e-9` are snapped to zero.
fn split_center(target: &TorusSpec, center: [f64; 3]) -> ([i64; 3], [f64; 3]) {
    let h = target.spacing();
    let n = target.resolution();
    let c = target.wrap(center);
    let mut idx = [0i64; 3];
    let mut off = [0.0; 3];
    for a in 0..3 {
        let pos = c[a] / h[a];
        let r = pos.round();
        idx[a] = (r as i64).rem_euclid(n[a] as i64);
        off[a] = if (pos - r).abs() <= 1e-9 { 0.0 } else { pos - r };
    }
    (idx, off)
}

/// `W(x) = U(d/ε)·χ(|d|)` with `d` the minimal periodic displacement from
/// the bump center.
///
/// Displacements are formed from integer cell offsets, so moving the
/// center by whole cells shifts the result exactly.
pub fn build_bump(bump: &BumpSpec, profile: &GroundStateProfile, target: &TorusSpec) -> Result<ScalarField> {
    bump.validate(target)?;
    let cells = core_cells(profile, bump.eps, target);
    if cells < MIN_CORE_CELLS {
        return Err(SbppError::Unresolved {
            cells,
            required: MIN_CORE_CELLS,
        });
    }
    let disp = displacements(target, bump.center);
    let scaled: Vec<Vec<f64>> = disp.iter().map(|d| d.iter().map(|x| x / bump.eps).collect()).collect();
    let u = profile.sample_grid([&scaled[0], &scaled[1], &scaled[2]]);
    Ok(apply_cutoff(target, &disp, bump.cutoff_r, |idx, _| u[idx]))
}

/// `f(d)·χ(|d|)` at every grid point, `d` the periodic displacement from
/// `center`.
pub(crate) fn sample_radial(target: &TorusSpec, center: [f64; 3], r: f64, f: impl Fn([f64; 3]) -> f64) -> ScalarField {
    let disp = displacements(target, center);
    apply_cutoff(target, &disp, r, |_, d| f(d))
}

/// Per-axis periodic displacements of the grid nodes from `center`.
fn displacements(target: &TorusSpec, center: [f64; 3]) -> [Vec<f64>; 3] {
    let n = target.resolution();
    let h = target.spacing();
    let (cidx, off) = split_center(target, center);
    [0, 1, 2].map(|a| {
        let na = n[a] as i64;
        (0..na)
            .map(|i| {
                let mut m = (i - cidx[a]).rem_euclid(na);
                if m >= na / 2 {
                    m -= na;
                }
                let mut d = m as f64 - off[a];
                if d < -0.5 * na as f64 {
                    d += na as f64;
                } else if d >= 0.5 * na as f64 {
                    d -= na as f64;
                }
                d * h[a]
            })
            .collect()
    })
}

/// `f(index, d)·χ(|d|)` at every node with `|d| < r`, zero elsewhere.
fn apply_cutoff(target: &TorusSpec, disp: &[Vec<f64>; 3], r: f64, f: impl Fn(usize, [f64; 3]) -> f64) -> ScalarField {
    let n = target.resolution();
    let mut values = vec![0.0; target.len()];
    for i in 0..n[0] {
        let dx = disp[0][i];
        for j in 0..n[1] {
            let dy = disp[1][j];
            for k in 0..n[2] {
                let dz = disp[2][k];
                let rho = (dx * dx + dy * dy + dz * dz).sqrt();
                if rho < r {
                    let idx = target.index(i, j, k);
                    values[idx] = cutoff(rho, r) * f(idx, [dx, dy, dz]);
                }
            }
        }
    }
    ScalarField::from_raw(*target, values)
}

/// `Ψ_ε(ξ) = t_W W_{ξ,ε}`, the bump at `xi` projected onto the Nehari manifold.
pub fn psi_map(
    xi: [f64; 3],
    params: &ModelParams,
    profile: &GroundStateProfile,
    target: &TorusSpec,
) -> Result<NehariState> {
    let w = build_bump(&BumpSpec::new(xi, params), profile, target)?;
    project_to_nehari(&w, params)
}
