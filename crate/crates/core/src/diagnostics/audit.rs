use std::fmt::Write as _;

use crate::energy::Evaluation;
use crate::error::{Result, SbppError};
use crate::manifold::torus::{ModelParams, TorusSpec};
use crate::nehari::projection::nehari_scale;
use crate::photography::bump::{build_bump, BumpSpec};
use crate::photography::profile::GroundStateProfile;

/// One ε of the bump-limit audit; ratios are `W` over `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub eps: f64,
    pub resolution: [usize; 3],
    /// `None` when the row was computed, otherwise why it was skipped.
    pub skipped: Option<String>,
    /// `‖W‖²₁,ε / ‖U‖²_{H¹}`
    pub h1_ratio: f64,
    /// `|W⁺|ᵖ_{p,ε} / |U⁺|ᵖ_p`
    pub p_ratio: f64,
    /// `(q²/ε³)∫φ(W)W² / q²∫φ(U)U²`
    pub coupling_ratio: f64,
    pub t_w: f64,
    /// `J_ε(t_W W) / m_inf_estimate`
    pub energy_ratio: f64,
}

/// Column order of [`audit_csv`].
pub const AUDIT_COLUMNS: &str = "eps,n1,n2,n3,status,h1_ratio,p_ratio,coupling_ratio,t_w,energy_ratio";

/// Tabulates how the bump pieces approach those of `U` as ε decreases.
///
/// `targets` holds either one grid shared by every ε or one grid per ε.
/// ε values whose bump is unresolved on their grid are kept as skipped rows.
pub fn w_limits_audit(
    xi: [f64; 3],
    eps_list: &[f64],
    base: &ModelParams,
    profile: &GroundStateProfile,
    targets: &[TorusSpec],
) -> Result<Vec<AuditRow>> {
    if targets.len() != 1 && targets.len() != eps_list.len() {
        return Err(SbppError::InvalidArgument(format!(
            "{} grids for {} eps values",
            targets.len(),
            eps_list.len()
        )));
    }
    let mut rows = Vec::with_capacity(eps_list.len());
    for (i, &eps) in eps_list.iter().enumerate() {
        let target = targets[if targets.len() == 1 { 0 } else { i }];
        let params = base.with_eps(eps)?;
        let mut row = AuditRow {
            eps,
            resolution: target.resolution(),
            skipped: None,
            h1_ratio: f64::NAN,
            p_ratio: f64::NAN,
            coupling_ratio: f64::NAN,
            t_w: f64::NAN,
            energy_ratio: f64::NAN,
        };
        let w = match build_bump(&BumpSpec::new(xi, &params), profile, &target) {
            Ok(w) => w,
            Err(e @ SbppError::Unresolved { .. }) => {
                row.skipped = Some(e.to_string());
                rows.push(row);
                continue;
            }
            Err(e) => return Err(e),
        };
        let e = Evaluation::new(w, &params).energy;
        let t = nehari_scale(e.kinetic_mass, e.coupling, e.power, params.p)?;
        row.h1_ratio = e.kinetic_mass / profile.h1_norm_sq;
        row.p_ratio = e.power / profile.p_norm.powf(profile.p);
        row.coupling_ratio = e.coupling / profile.coupling;
        row.t_w = t;
        row.energy_ratio = e.scaled(t, params.p).total / profile.m_inf_estimate;
        rows.push(row);
    }
    Ok(rows)
}

/// CSV with header [`AUDIT_COLUMNS`]; skipped rows carry empty numbers.
pub fn audit_csv(rows: &[AuditRow]) -> String {
    let mut out = String::from(AUDIT_COLUMNS);
    out.push('\n');
    for r in rows {
        let [n1, n2, n3] = r.resolution;
        match &r.skipped {
            Some(_) => {
                let _ = writeln!(out, "{},{n1},{n2},{n3},skipped,,,,,", r.eps);
            }
            None => {
                let _ = writeln!(
                    out,
                    "{},{n1},{n2},{n3},ok,{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                    r.eps, r.h1_ratio, r.p_ratio, r.coupling_ratio, r.t_w, r.energy_ratio
                );
            }
        }
    }
    out
}
