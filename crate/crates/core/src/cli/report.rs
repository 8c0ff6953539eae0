use std::fmt::Write as _;
use std::path::PathBuf;

use crate::diagnostics::ConcentrationReport;
use crate::energy::EnergyBreakdown;
use crate::nehari::NehariState;

/// Version stamp written into every report.
pub const VERSION: &str = concat!("sbpp ", env!("CARGO_PKG_VERSION"));

/// Diagnostics of one state produced by a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord {
    pub label: String,
    pub status: String,
    pub energy: EnergyBreakdown,
    pub t_u: f64,
    /// `|N_ε(u)| / ‖u‖²₁,ε`
    pub nehari_residual: f64,
    pub grad_residual: f64,
    pub full_grad_residual: f64,
    pub iterations: usize,
    /// `None` when `∫Γ(u) ≤ 0`.
    pub concentration: Option<ConcentrationReport>,
    /// Field dump, relative to the output directory.
    pub field: Option<PathBuf>,
    /// Energy trace, relative to the output directory.
    pub trace: Option<PathBuf>,
    pub wall_time: f64,
}

impl SolutionRecord {
    pub fn from_state(label: impl Into<String>, s: &NehariState) -> Self {
        Self {
            label: label.into(),
            status: s.status.as_str().to_string(),
            energy: s.energy,
            t_u: s.t_u,
            nehari_residual: s.relative_nehari_residual(),
            grad_residual: s.grad_residual,
            full_grad_residual: s.full_grad_residual,
            iterations: s.iterations,
            concentration: None,
            field: None,
            trace: None,
            wall_time: 0.0,
        }
    }
}

/// Everything a run produced.
///
/// [`RunReport::to_text`] is deterministic: wall times are kept out of it and
/// written to the separate `timing.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub version: String,
    pub mode: String,
    pub config_echo: Vec<(String, String)>,
    pub solutions: Vec<SolutionRecord>,
    /// Lowest energy of a reported critical point (mode dependent).
    pub m_eps_best: Option<f64>,
    /// Mode-specific scalars under `summary.`.
    pub summary: Vec<(String, String)>,
    /// Other files written, relative to the output directory.
    pub files: Vec<(String, PathBuf)>,
    pub flags: Vec<String>,
    pub partial: bool,
    pub output_dir: PathBuf,
    pub wall_time: f64,
}

impl RunReport {
    /// 0 when everything converged, 2 when some flag is set.
    pub fn exit_code(&self) -> i32 {
        if self.partial {
            2
        } else {
            0
        }
    }

    /// Absolute paths of every file the report references.
    pub fn referenced_paths(&self) -> Vec<PathBuf> {
        let mut out: Vec<PathBuf> = self.files.iter().map(|(_, p)| self.output_dir.join(p)).collect();
        for s in &self.solutions {
            out.extend(s.field.iter().chain(s.trace.iter()).map(|p| self.output_dir.join(p)));
        }
        out
    }

    pub fn report_path(&self) -> PathBuf {
        self.output_dir.join("report.txt")
    }

    /// `key = value` lines; every key is a dotted path.
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(o, "{k} = {v}");
        };
        kv("version", &self.version);
        kv("mode", &self.mode);
        kv("status", &if self.partial { "partial" } else { "converged" });
        match self.m_eps_best {
            Some(m) => kv("m_eps_best", &num(m)),
            None => kv("m_eps_best", &"none"),
        }
        for (k, v) in &self.config_echo {
            kv(&format!("config.{k}"), v);
        }
        for (k, v) in &self.summary {
            kv(&format!("summary.{k}"), v);
        }
        for (k, p) in &self.files {
            kv(&format!("file.{k}"), &p.display());
        }
        kv("solutions", &self.solutions.len());
        for (i, s) in self.solutions.iter().enumerate() {
            let key = |name: &str| format!("solution.{i}.{name}");
            kv(&key("label"), &s.label);
            kv(&key("status"), &s.status);
            kv(&key("energy.total"), &num(s.energy.total));
            kv(&key("energy.kinetic_mass"), &num(s.energy.kinetic_mass));
            kv(&key("energy.coupling"), &num(s.energy.coupling));
            kv(&key("energy.power"), &num(s.energy.power));
            kv(&key("t_u"), &num(s.t_u));
            kv(&key("nehari_residual"), &num(s.nehari_residual));
            kv(&key("grad_residual"), &num(s.grad_residual));
            kv(&key("full_grad_residual"), &num(s.full_grad_residual));
            kv(&key("iterations"), &s.iterations);
            if let Some(c) = &s.concentration {
                kv(&key("barycenter"), &join(&c.barycenter));
                kv(&key("barycenter.resultant"), &join(&c.resultant_length));
                kv(&key("barycenter.degenerate"), &c.degenerate);
                kv(&key("concentration.center"), &join(&c.center_q));
                kv(&key("concentration.radius"), &num(c.ball_radius));
                kv(&key("concentration.mass_fraction"), &num(c.mass_fraction_in_ball));
                kv(&key("concentration.total_gamma"), &num(c.total_gamma));
                kv(&key("concentration.barycenter_distance"), &num(c.barycenter_distance));
            }
            if let Some(p) = &s.field {
                kv(&key("field"), &p.display());
            }
            if let Some(p) = &s.trace {
                kv(&key("trace"), &p.display());
            }
        }
        for (i, f) in self.flags.iter().enumerate() {
            kv(&format!("flag.{i}"), f);
        }
        o
    }

    /// `label,seconds` rows for the run and every solution.
    pub fn timing_csv(&self) -> String {
        let mut o = String::from("label,seconds\n");
        let _ = writeln!(o, "total,{}", num(self.wall_time));
        for s in &self.solutions {
            let _ = writeln!(o, "{},{}", s.label.replace(',', ";"), num(s.wall_time));
        }
        o
    }
}

/// Shortest round-tripping text for `x`, in exponent form when very small
/// or very large.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub(crate) fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

/// Reads a report back into `key → value` pairs.
pub fn parse_report(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Value of `key` in a report file's text.
pub fn report_value<'a>(pairs: &'a [(String, String)], key: &str) -> Option<&'a str> {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}
