use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::cli::config::{EpsLadder, ExperimentConfig, Mode};
use crate::cli::report::{join, num, RunReport, SolutionRecord, VERSION};
use crate::diagnostics::{audit_csv, concentration_center, w_limits_audit};
use crate::energy::Evaluation;
use crate::error::{Result, SbppError};
use crate::manifold::field::ScalarField;
use crate::manifold::io::save_field;
use crate::nehari::{
    constant_solution, minimize_on_nehari, multistart_search, project_to_nehari, NehariState, SolverOptions,
};
use crate::photography::{
    compute_limit_ground_state, high_energy_search, psi_map, ConeGrid, GroundStateProfile, HighEnergyStatus,
};

/// Header of `runs.csv` (mode `ground`).
pub const RUNS_COLUMNS: &str = "init,spec,status,energy,iterations,class";
/// Header of energy traces.
pub const TRACE_COLUMNS: &str = "iteration,energy";
/// Header of `photography.csv`.
pub const PHOTOGRAPHY_COLUMNS: &str = "x,y,z,energy,t_w,nehari_residual";
/// Header of `cone.csv`.
pub const CONE_COLUMNS: &str = "theta,x,y,z,energy,t";
/// Header of `sweep.csv`.
pub const SWEEP_COLUMNS: &str = "eps,n1,n2,n3,psi_energy,t_w,m_eps,m_over_m_inf,status,iterations,grad_residual";

struct Output {
    dir: PathBuf,
}

impl Output {
    fn create(dir: &Path) -> Result<Self> {
        for sub in ["", "fields", "traces"] {
            let d = dir.join(sub);
            fs::create_dir_all(&d).map_err(|e| SbppError::io(&d, e))?;
        }
        Ok(Self { dir: dir.to_path_buf() })
    }

    fn text(&self, rel: &str, text: &str) -> Result<PathBuf> {
        let path = self.dir.join(rel);
        fs::write(&path, text).map_err(|e| SbppError::io(&path, e))?;
        Ok(PathBuf::from(rel))
    }

    fn field(&self, rel: &str, u: &ScalarField) -> Result<PathBuf> {
        save_field(self.dir.join(rel), u)?;
        Ok(PathBuf::from(rel))
    }

    fn trace(&self, rel: &str, energies: &[f64]) -> Result<PathBuf> {
        let mut o = format!("{TRACE_COLUMNS}\n");
        for (i, e) in energies.iter().enumerate() {
            let _ = writeln!(o, "{i},{}", num(*e));
        }
        self.text(rel, &o)
    }
}

/// Maps `f` over `items` on up to `k` scoped threads, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], k: usize, f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
    if k <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let k = k.min(items.len());
    let mut slots: Vec<Option<Result<R>>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let f = &f;
        let workers: Vec<_> = (0..k)
            .map(|w| {
                s.spawn(move || {
                    (w..items.len())
                        .step_by(k)
                        .map(|i| (i, f(&items[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in workers {
            for (i, r) in h.join().expect("worker thread panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every slot filled")).collect()
}

struct Run<'a> {
    cfg: &'a ExperimentConfig,
    out: Output,
    report: RunReport,
}

impl Run<'_> {
    fn summary(&mut self, key: &str, value: impl ToString) {
        self.report.summary.push((key.to_string(), value.to_string()));
    }

    fn flag(&mut self, msg: String) {
        self.report.partial = true;
        self.report.flags.push(msg);
    }

    /// Record for `state` with its concentration report, field dump and trace.
    fn record(&self, label: String, state: &NehariState, stem: &str, secs: f64) -> Result<SolutionRecord> {
        let params = self.cfg.model;
        let mut rec = SolutionRecord::from_state(label, state);
        rec.concentration = concentration_center(&state.u, &params, 0.5 * params.cutoff_r).ok();
        rec.field = Some(self.out.field(&format!("fields/{stem}.fld"), &state.u)?);
        if !state.energy_trace.is_empty() {
            rec.trace = Some(self.out.trace(&format!("traces/{stem}.csv"), &state.energy_trace)?);
        }
        rec.wall_time = secs;
        Ok(rec)
    }

    fn profile(&mut self) -> Result<GroundStateProfile> {
        let pc = &self.cfg.profile;
        let model = &self.cfg.model;
        let cached = match &pc.cache {
            Some(stem) if stem.with_extension("fld").exists() => {
                let p = GroundStateProfile::load(stem)?;
                let n = p.field.spec().resolution()[0];
                if p.p != model.p || p.q != model.q || p.box_side != pc.box_side || n != pc.resolution {
                    return Err(SbppError::Config(format!(
                        "profile.cache {}: stored profile (p={}, q={}, box={}, n={n}) does not match the config",
                        stem.display(),
                        p.p,
                        p.q,
                        p.box_side
                    )));
                }
                Some(p)
            }
            _ => None,
        };
        let profile = match cached {
            Some(p) => p,
            None => {
                let opts = SolverOptions {
                    tol: pc.tol,
                    max_iter: pc.max_iter,
                    ..self.cfg.solver
                };
                let p = compute_limit_ground_state(pc.box_side, pc.resolution, model.p, model.q, &opts)?;
                if let Some(stem) = &pc.cache {
                    p.save(stem)?;
                }
                p
            }
        };
        profile.save(&self.out.dir.join("profile"))?;
        self.report.files.push(("profile".into(), PathBuf::from("profile.fld")));
        self.report
            .files
            .push(("profile_meta".into(), PathBuf::from("profile.meta")));
        self.summary("m_inf_estimate", profile.m_inf_estimate);
        self.summary("profile.core_diameter", profile.core_diameter);
        self.summary("profile.peak", profile.peak());
        self.summary("profile.iterations", profile.iterations);
        Ok(profile)
    }

    fn ground(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let inits = cfg
            .inits
            .iter()
            .map(|i| i.build(&cfg.torus, &cfg.model))
            .collect::<Result<Vec<_>>>()?;
        let t0 = Instant::now();
        let out = multistart_search(&inits, &cfg.model, &cfg.solver, cfg.distinct_tol)?;
        let secs = t0.elapsed().as_secs_f64();
        let mut runs = format!("{RUNS_COLUMNS}\n");
        for (i, (r, spec)) in out.runs.iter().zip(&cfg.inits).enumerate() {
            let class = r.class.map_or(String::new(), |c| c.to_string());
            let _ = writeln!(
                runs,
                "{i},{},{},{},{},{class}",
                spec.to_string().replace(',', " "),
                r.status.as_str(),
                num(r.energy),
                r.iterations
            );
        }
        let path = self.out.text("runs.csv", &runs)?;
        self.report.files.push(("runs".into(), path));
        for (k, s) in out.states.iter().enumerate() {
            let members: Vec<String> = out
                .runs
                .iter()
                .enumerate()
                .filter(|(_, r)| r.class == Some(k))
                .map(|(i, _)| i.to_string())
                .collect();
            let rec = self.record(
                format!("class {k} (inits {})", members.join(" ")),
                s,
                &format!("state_{k}"),
                secs / out.states.len() as f64,
            )?;
            self.report.solutions.push(rec);
        }
        let c = constant_solution(&cfg.model, cfg.torus.volume())?;
        self.summary("distinct_states", out.states.len());
        self.summary("constant_energy", c.energy);
        self.report.m_eps_best = out.states.first().map(|s| s.energy.total);
        for d in out.diagnostics {
            self.flag(d);
        }
        Ok(())
    }

    fn photography(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let profile = self.profile()?;
        let m = cfg.photography_points;
        let l = cfg.torus.side_lengths();
        let mut centers = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let f = |c: usize, a: usize| (c as f64 + 0.5) * l[a] / m as f64;
                    centers.push([f(i, 0), f(j, 1), f(k, 2)]);
                }
            }
        }
        let states = par_map(&centers, cfg.parallel, |&xi| {
            let t0 = Instant::now();
            let s = psi_map(xi, &cfg.model, &profile, &cfg.torus)?;
            Ok((s, t0.elapsed().as_secs_f64()))
        })?;
        let mut csv = format!("{PHOTOGRAPHY_COLUMNS}\n");
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, ((s, secs), xi)) in states.iter().zip(&centers).enumerate() {
            let e = s.energy.total;
            let _ = writeln!(
                csv,
                "{},{},{},{}",
                join(xi),
                num(e),
                num(s.t_u),
                num(s.relative_nehari_residual())
            );
            lo = lo.min(e);
            hi = hi.max(e);
            let rec = self.record(format!("psi at {}", join(xi)), s, &format!("psi_{i}"), *secs)?;
            self.report.solutions.push(rec);
        }
        let path = self.out.text("photography.csv", &csv)?;
        self.report.files.push(("photography".into(), path));
        self.summary("psi_energy_min", lo);
        self.summary("psi_energy_max", hi);
        self.summary("psi_over_m_inf_max", hi / profile.m_inf_estimate);
        self.report.m_eps_best = Some(lo);
        Ok(())
    }

    fn cone(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let profile = self.profile()?;
        let grid = ConeGrid::uniform(&cfg.torus, cfg.cone.xi0, cfg.cone.theta_samples, cfg.cone.points)?;
        let t0 = Instant::now();
        let out = high_energy_search(&cfg.model, &profile, &cfg.torus, &grid, &cfg.cone.minimax)?;
        let secs = t0.elapsed().as_secs_f64();
        let mut csv = format!("{CONE_COLUMNS}\n");
        for s in &out.samples {
            let _ = writeln!(csv, "{},{},{},{}", num(s.theta), join(&s.xi), num(s.energy), num(s.t));
        }
        let path = self.out.text("cone.csv", &csv)?;
        self.report.files.push(("cone".into(), path));
        let rec = self.record(format!("cone {}", out.status.as_str()), &out.state, "cone_state", secs)?;
        self.report.solutions.push(rec);
        self.summary("c_eps", out.c_eps);
        self.summary("cone.status", out.status.as_str());
        self.summary("cone.best_theta", out.best.theta);
        self.summary("cone.best_xi", join(&out.best.xi));
        if let Some(e) = out.support_energy {
            self.summary("cone.support_energy", e);
        }
        let c = constant_solution(&cfg.model, cfg.torus.volume())?;
        self.summary("constant_energy", c.energy);
        let best = match out.status {
            HighEnergyStatus::Converged | HighEnergyStatus::CollapsedLow => Some(out.state.energy.total),
            _ => None,
        };
        self.report.m_eps_best = match (best, out.support_energy) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for d in out.diagnostics {
            self.report.flags.push(d);
        }
        if matches!(
            out.status,
            HighEnergyStatus::SaddleCandidate | HighEnergyStatus::CollapsedLow
        ) {
            self.flag(format!("cone refinement ended as {}", out.status.as_str()));
        }
        Ok(())
    }

    fn constant(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let c = constant_solution(&cfg.model, cfg.torus.volume())?;
        let u = ScalarField::constant(cfg.torus, c.c_star);
        let ev = Evaluation::new(u.clone(), &cfg.model);
        let grad = ev.gradient(&cfg.model);
        let state = project_to_nehari(&u, &cfg.model)?;
        let rec = self.record("constant".into(), &state, "constant", 0.0)?;
        self.report.solutions.push(rec);
        self.summary("c_star", c.c_star);
        self.summary("root_residual", c.residual);
        self.summary("energy_formula", c.energy);
        self.summary("energy_grid", ev.energy.total);
        self.summary("grad_max_norm", grad.max_abs());
        self.report.m_eps_best = Some(c.energy);
        Ok(())
    }

    fn sweep(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let ladder: &EpsLadder = cfg.sweep.as_ref().expect("validated");
        let profile = self.profile()?;
        let idx: Vec<usize> = (0..ladder.eps.len()).collect();
        let rows = par_map(&idx, cfg.parallel, |&i| {
            let t0 = Instant::now();
            let target = ladder.target(&cfg.torus, i)?;
            let params = cfg.model.with_eps(ladder.eps[i])?;
            params.check_torus(&target)?;
            let psi = psi_map(ladder.center, &params, &profile, &target)?;
            let state = minimize_on_nehari(&psi.u, &params, &cfg.solver)?;
            Ok((target, psi, state, t0.elapsed().as_secs_f64()))
        })?;
        let mut csv = format!("{SWEEP_COLUMNS}\n");
        for (i, (target, psi, state, secs)) in rows.iter().enumerate() {
            let eps = ladder.eps[i];
            let [n1, n2, n3] = target.resolution();
            let m = state.energy.total;
            let _ = writeln!(
                csv,
                "{},{n1},{n2},{n3},{},{},{},{},{},{},{}",
                num(eps),
                num(psi.energy.total),
                num(psi.t_u),
                num(m),
                num(m / profile.m_inf_estimate),
                state.status.as_str(),
                state.iterations,
                num(state.grad_residual)
            );
            let rec = self.record(format!("eps {eps}"), state, &format!("sweep_{i}"), *secs)?;
            self.report.solutions.push(rec);
            if !state.is_converged() {
                self.flag(format!(
                    "eps {eps}: {} after {} iterations",
                    state.status.as_str(),
                    state.iterations
                ));
            }
        }
        let path = self.out.text("sweep.csv", &csv)?;
        self.report.files.push(("sweep".into(), path));
        let mut by_eps: Vec<(f64, f64)> = rows
            .iter()
            .zip(&ladder.eps)
            .map(|(r, &e)| (e, r.2.energy.total))
            .collect();
        by_eps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let nonincreasing = by_eps.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9));
        self.summary("m_eps_nonincreasing_in_eps", nonincreasing);
        self.report.m_eps_best = by_eps.first().map(|&(_, m)| m);
        Ok(())
    }

    fn audit(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let ladder: &EpsLadder = cfg.audit.as_ref().expect("validated");
        let profile = self.profile()?;
        let targets = (0..ladder.resolutions.len())
            .map(|i| ladder.target(&cfg.torus, i))
            .collect::<Result<Vec<_>>>()?;
        let rows = w_limits_audit(ladder.center, &ladder.eps, &cfg.model, &profile, &targets)?;
        let path = self.out.text("audit.csv", &audit_csv(&rows))?;
        self.report.files.push(("audit".into(), path));
        let skipped = rows.iter().filter(|r| r.skipped.is_some()).count();
        self.summary("audit.rows", rows.len());
        self.summary("audit.skipped", skipped);
        Ok(())
    }
}

/// Runs the configured pipeline, writes every artifact below
/// `config.output_dir` (`report.txt`, `timing.csv`, `fields/`, `traces/`,
/// mode CSVs) and returns the report.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    let t0 = Instant::now();
    let out = Output::create(&config.output_dir)?;
    let report = RunReport {
        version: VERSION.to_string(),
        mode: config.mode.to_string(),
        config_echo: config.echo(),
        solutions: vec![],
        m_eps_best: None,
        summary: vec![],
        files: vec![],
        flags: vec![],
        partial: false,
        output_dir: config.output_dir.clone(),
        wall_time: 0.0,
    };
    let mut run = Run {
        cfg: config,
        out,
        report,
    };
    match config.mode {
        Mode::Ground => run.ground()?,
        Mode::Photography => run.photography()?,
        Mode::Cone => run.cone()?,
        Mode::Constant => run.constant()?,
        Mode::Sweep => run.sweep()?,
        Mode::Audit => run.audit()?,
    }
    let timing = PathBuf::from("timing.csv");
    run.report.files.push(("timing".into(), timing));
    run.report.wall_time = t0.elapsed().as_secs_f64();
    let Run { out, report, .. } = run;
    out.text("timing.csv", &report.timing_csv())?;
    out.text("report.txt", &report.to_text())?;
    Ok(report)
}
