//! The flat `key = value` experiment configuration.
//!
//! Lines are `key = value`; `#` starts a comment; blank lines are ignored.
//! Keys carry a section prefix. Every key, its default and its meaning:
//!
//! | key | default | meaning |
//! |---|---|---|
//! | `mode` | required | `ground`, `photography`, `cone`, `constant`, `sweep` or `audit` |
//! | `seed` | `0` | seed for `random` inits without an explicit seed |
//! | `parallel` | `1` | worker threads for independent runs |
//! | `torus.L` / `torus.L1..L3` | required | side lengths |
//! | `torus.N` / `torus.N1..N3` | `32` | grid points per axis |
//! | `model.eps` | required | ε |
//! | `model.p` | required | exponent, in the open interval (4,6) |
//! | `model.q` | `1` | charge |
//! | `model.r` | `0.45·min L` | bump cutoff radius, below `min L / 2` |
//! | `solver.tol` | `1e-8` | tangential gradient residual target |
//! | `solver.max_iter` | `2000` | descent iteration cap |
//! | `solver.armijo` | `1e-4` | sufficient-decrease constant |
//! | `solver.backtrack` | `0.5` | step reduction factor |
//! | `solver.initial_step` | `1` | first trial step |
//! | `solver.max_step` | `64` | step cap |
//! | `solver.collapse_floor` | `1e-6` | smallest admissible `|u⁺|_p,ε` |
//! | `search.inits` | see below | `;`-separated init descriptors |
//! | `search.distinct_tol` | `0.1` | relative L² distance separating classes |
//! | `profile.box` | `12.5` | side of the limit-problem torus |
//! | `profile.n` | `60` | its grid points per axis |
//! | `profile.tol` | `1e-8` | its descent tolerance |
//! | `profile.max_iter` | `2000` | its iteration cap |
//! | `profile.cache` | none | path stem to load the profile from, or save it to |
//! | `photography.points` | `2` | bump centers per axis |
//! | `cone.theta_samples` | `9` | θ samples in `[0, 1]` |
//! | `cone.points` | `2` | cone centers per axis |
//! | `cone.xi0` | `L/4` per axis | center of the reference bump |
//! | `cone.refine` | `true` | run the min-max refinement |
//! | `cone.tol` | `1e-6` | refinement residual target |
//! | `cone.max_iter` | `400` | refinement iteration cap |
//! | `sweep.eps` | required for `sweep` | comma-separated ε values |
//! | `sweep.n` | `torus.N` | one resolution, or one per ε |
//! | `sweep.center` | torus center | bump center |
//! | `audit.eps` | required for `audit` | comma-separated ε values |
//! | `audit.n` | `torus.N` | one resolution, or one per ε |
//! | `audit.center` | torus center | bump center |
//! | `output.dir` | `sbpp-out` | output directory |
//!
//! Init descriptors are `one-bump@x,y,z`, `two-bump@x,y,z/axis`,
//! `constant`, `random:seed` and bare `random`, which takes `seed + i` for
//! the `i`-th init. The default list is a one-bump at the torus center, a
//! two-bump at a quarter of the torus along axis 0, the constant and
//! `random`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::cli::report::num;
use crate::error::{Result, SbppError};
use crate::manifold::torus::{ModelParams, TorusSpec};
use crate::nehari::{InitSpec, SolverOptions};
use crate::photography::MinimaxOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ground,
    Photography,
    Cone,
    Constant,
    Sweep,
    Audit,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Ground => "ground",
            Mode::Photography => "photography",
            Mode::Cone => "cone",
            Mode::Constant => "constant",
            Mode::Sweep => "sweep",
            Mode::Audit => "audit",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = SbppError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ground" => Mode::Ground,
            "photography" => Mode::Photography,
            "cone" => Mode::Cone,
            "constant" => Mode::Constant,
            "sweep" => Mode::Sweep,
            "audit" => Mode::Audit,
            _ => {
                return Err(SbppError::Config(format!(
                    "mode = {s:?}: expected one of ground, photography, cone, constant, sweep, audit"
                )))
            }
        })
    }
}

const KNOWN_KEYS: &[&str] = &[
    "mode",
    "seed",
    "parallel",
    "torus.L",
    "torus.L1",
    "torus.L2",
    "torus.L3",
    "torus.N",
    "torus.N1",
    "torus.N2",
    "torus.N3",
    "model.eps",
    "model.p",
    "model.q",
    "model.r",
    "solver.tol",
    "solver.max_iter",
    "solver.armijo",
    "solver.backtrack",
    "solver.initial_step",
    "solver.max_step",
    "solver.collapse_floor",
    "search.inits",
    "search.distinct_tol",
    "profile.box",
    "profile.n",
    "profile.tol",
    "profile.max_iter",
    "profile.cache",
    "photography.points",
    "cone.theta_samples",
    "cone.points",
    "cone.xi0",
    "cone.refine",
    "cone.tol",
    "cone.max_iter",
    "sweep.eps",
    "sweep.n",
    "sweep.center",
    "audit.eps",
    "audit.n",
    "audit.center",
    "output.dir",
];

/// Parsed but unvalidated `key = value` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    /// Splits lines into pairs, rejecting malformed lines and duplicate keys.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = match line.find('#') {
                Some(i) => &line[..i],
                None => line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| SbppError::Config(format!("line {}: expected key = value, got {line:?}", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(SbppError::Config(format!("line {}: empty key", lineno + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(SbppError::Config(format!("duplicate key {k:?} (line {})", lineno + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Sets or replaces a key (command-line overrides).
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }
}

/// Settings of the limit ground state used by the photography modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileConfig {
    pub box_side: f64,
    pub resolution: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeConfig {
    pub theta_samples: usize,
    pub points: usize,
    pub xi0: [f64; 3],
    pub minimax: MinimaxOptions,
}

/// ε values with their grids and the bump center, for `sweep` and `audit`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsLadder {
    pub eps: Vec<f64>,
    pub resolutions: Vec<usize>,
    pub center: [f64; 3],
}

impl EpsLadder {
    /// Target grid for the `i`-th ε.
    pub fn target(&self, torus: &TorusSpec, i: usize) -> Result<TorusSpec> {
        let n = self.resolutions[if self.resolutions.len() == 1 { 0 } else { i }];
        TorusSpec::new(torus.side_lengths(), [n; 3])
    }
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub seed: u64,
    pub parallel: usize,
    pub torus: TorusSpec,
    pub model: ModelParams,
    pub solver: SolverOptions,
    pub inits: Vec<InitSpec>,
    pub distinct_tol: f64,
    pub profile: ProfileConfig,
    pub photography_points: usize,
    pub cone: ConeConfig,
    pub sweep: Option<EpsLadder>,
    pub audit: Option<EpsLadder>,
    pub output_dir: PathBuf,
}

/// Parses and validates configuration text.
pub fn validate_config(text: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::from_raw(&RawConfig::parse(text)?)
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| SbppError::Config(format!("{key} = {v:?} is not a valid number")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    let items: Vec<&str> = v.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(SbppError::Config(format!("{key} = {v:?}: empty list entry")));
    }
    items.into_iter().map(|s| parse_num(key, s)).collect()
}

fn parse_point(key: &str, v: &str) -> Result<[f64; 3]> {
    let xs: Vec<f64> = parse_list(key, v)?;
    <[f64; 3]>::try_from(xs).map_err(|_| SbppError::Config(format!("{key} = {v:?}: expected x,y,z")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(SbppError::Config(format!("{key} = {v:?}: expected true or false"))),
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn joinf(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

struct Reader<'a> {
    raw: &'a RawConfig,
}

impl Reader<'_> {
    fn num<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        self.raw.get(key).map_or(Ok(default), |v| parse_num(key, v))
    }

    fn required<T: FromStr>(&self, key: &str, why: &str) -> Result<T> {
        let v = self
            .raw
            .get(key)
            .ok_or_else(|| SbppError::Config(format!("missing required key {key} ({why})")))?;
        parse_num(key, v)
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64> {
        let v: f64 = self.num(key, default)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(SbppError::Config(format!("{key} = {v} must be > 0")));
        }
        Ok(v)
    }

    fn count(&self, key: &str, default: usize, min: usize) -> Result<usize> {
        let v: usize = self.num(key, default)?;
        if v < min {
            return Err(SbppError::Config(format!("{key} = {v} must be >= {min}")));
        }
        Ok(v)
    }

    fn per_axis<T: FromStr + Copy>(&self, all: &str, default: Option<T>) -> Result<[T; 3]> {
        let mut out = [None; 3];
        if let Some(v) = self.raw.get(all) {
            out = [Some(parse_num(all, v)?); 3];
        }
        for (a, slot) in out.iter_mut().enumerate() {
            let key = format!("{all}{}", a + 1);
            if let Some(v) = self.raw.get(&key) {
                if self.raw.contains(all) {
                    return Err(SbppError::Config(format!("{key} conflicts with {all}")));
                }
                *slot = Some(parse_num(&key, v)?);
            }
            if slot.is_none() {
                *slot = default;
            }
        }
        match out {
            [Some(a), Some(b), Some(c)] => Ok([a, b, c]),
            _ => Err(SbppError::Config(format!(
                "missing required key {all} (or all of {all}1, {all}2, {all}3)"
            ))),
        }
    }

    fn ladder(&self, section: &str, torus: &TorusSpec, n_default: usize) -> Result<Option<EpsLadder>> {
        let key = format!("{section}.eps");
        let Some(v) = self.raw.get(&key) else {
            return Ok(None);
        };
        let eps: Vec<f64> = parse_list(&key, v)?;
        if let Some(e) = eps.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(SbppError::Config(format!("{key}: eps = {e} must be > 0")));
        }
        let nkey = format!("{section}.n");
        let resolutions: Vec<usize> = match self.raw.get(&nkey) {
            Some(v) => parse_list(&nkey, v)?,
            None => vec![n_default],
        };
        if resolutions.len() != 1 && resolutions.len() != eps.len() {
            return Err(SbppError::Config(format!(
                "{nkey} has {} entries for {} eps values (give one, or one per eps)",
                resolutions.len(),
                eps.len()
            )));
        }
        if resolutions.iter().any(|&n| n < 2) {
            return Err(SbppError::Config(format!("{nkey}: resolutions must be >= 2")));
        }
        let ckey = format!("{section}.center");
        let center = match self.raw.get(&ckey) {
            Some(v) => parse_point(&ckey, v)?,
            None => torus.side_lengths().map(|l| 0.5 * l),
        };
        Ok(Some(EpsLadder {
            eps,
            resolutions,
            center,
        }))
    }
}

impl ExperimentConfig {
    /// Validates raw pairs and fills defaults.
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let unknown: Vec<&str> = raw
            .entries
            .keys()
            .map(String::as_str)
            .filter(|k| !KNOWN_KEYS.contains(k))
            .collect();
        if !unknown.is_empty() {
            return Err(SbppError::Config(format!("unknown keys: {}", unknown.join(", "))));
        }
        let r = Reader { raw };

        let mode: Mode = raw
            .get("mode")
            .ok_or_else(|| SbppError::Config("missing required key mode".into()))?
            .parse()?;
        let seed: u64 = r.num("seed", 0)?;
        let parallel = r.count("parallel", 1, 1)?;

        let sides: [f64; 3] = r.per_axis("torus.L", None)?;
        let res: [usize; 3] = r.per_axis("torus.N", Some(32))?;
        let torus = TorusSpec::new(sides, res).map_err(|e| SbppError::Config(format!("torus: {e}")))?;

        let eps: f64 = r.required("model.eps", "ε")?;
        let p: f64 = r.required("model.p", "exponent")?;
        if !(p > 4.0 && p < 6.0) {
            return Err(SbppError::Config(format!(
                "model.p = {p} violates p ∈ (4,6): the exponent must lie in the open interval (4,6)"
            )));
        }
        let q = r.positive("model.q", 1.0)?;
        let cutoff_r = r.positive("model.r", 0.45 * torus.min_side())?;
        let model = ModelParams::new(eps, p, q, cutoff_r).map_err(|e| SbppError::Config(format!("model: {e}")))?;
        model
            .check_torus(&torus)
            .map_err(|e| SbppError::Config(format!("model.r: {e}")))?;

        let d = SolverOptions::default();
        let solver = SolverOptions {
            tol: r.positive("solver.tol", d.tol)?,
            max_iter: r.num("solver.max_iter", d.max_iter)?,
            armijo: r.num("solver.armijo", d.armijo)?,
            backtrack: r.num("solver.backtrack", d.backtrack)?,
            initial_step: r.num("solver.initial_step", d.initial_step)?,
            max_step: r.num("solver.max_step", d.max_step)?,
            collapse_floor: r.num("solver.collapse_floor", d.collapse_floor)?,
            symmetry: d.symmetry,
        };
        solver
            .validate()
            .map_err(|e| SbppError::Config(format!("solver: {e}")))?;

        let inits = match raw.get("search.inits") {
            Some(v) => {
                let mut out = Vec::new();
                for (i, item) in v.split(';').map(str::trim).enumerate() {
                    if item == "random" {
                        out.push(InitSpec::Random {
                            seed: seed.wrapping_add(i as u64),
                        });
                    } else {
                        out.push(
                            item.parse()
                                .map_err(|e| SbppError::Config(format!("search.inits entry {i} ({item:?}): {e}")))?,
                        );
                    }
                }
                out
            }
            None => {
                let l = torus.side_lengths();
                vec![
                    InitSpec::OneBump {
                        center: l.map(|x| 0.5 * x),
                    },
                    InitSpec::TwoBump {
                        center: l.map(|x| 0.25 * x),
                        axis: 0,
                    },
                    InitSpec::Constant,
                    InitSpec::Random {
                        seed: seed.wrapping_add(3),
                    },
                ]
            }
        };
        let distinct_tol = r.positive("search.distinct_tol", 0.1)?;

        let profile = ProfileConfig {
            box_side: r.positive("profile.box", 12.5)?,
            resolution: r.count("profile.n", 60, 8)?,
            tol: r.positive("profile.tol", 1e-8)?,
            max_iter: r.num("profile.max_iter", 2000)?,
            cache: raw.get("profile.cache").map(PathBuf::from),
        };
        let photography_points = r.count("photography.points", 2, 1)?;

        let md = MinimaxOptions::default();
        let cone = ConeConfig {
            theta_samples: r.count("cone.theta_samples", 9, 2)?,
            points: r.count("cone.points", 2, 1)?,
            xi0: match raw.get("cone.xi0") {
                Some(v) => parse_point("cone.xi0", v)?,
                None => torus.side_lengths().map(|l| 0.25 * l),
            },
            minimax: MinimaxOptions {
                refine: raw
                    .get("cone.refine")
                    .map_or(Ok(md.refine), |v| parse_bool("cone.refine", v))?,
                tol: r.positive("cone.tol", md.tol)?,
                max_iter: r.num("cone.max_iter", md.max_iter)?,
                support: SolverOptions {
                    tol: solver.tol.max(md.support.tol),
                    ..solver
                },
                ..md
            },
        };

        let sweep = r.ladder("sweep", &torus, res[0])?;
        let audit = r.ladder("audit", &torus, res[0])?;
        match mode {
            Mode::Sweep if sweep.is_none() => return Err(SbppError::Config("mode = sweep requires sweep.eps".into())),
            Mode::Audit if audit.is_none() => return Err(SbppError::Config("mode = audit requires audit.eps".into())),
            Mode::Ground if inits.is_empty() => {
                return Err(SbppError::Config("mode = ground requires at least one init".into()))
            }
            _ => {}
        }

        Ok(Self {
            mode,
            seed,
            parallel,
            torus,
            model,
            solver,
            inits,
            distinct_tol,
            profile,
            photography_points,
            cone,
            sweep,
            audit,
            output_dir: PathBuf::from(raw.get("output.dir").unwrap_or("sbpp-out")),
        })
    }

    /// Every effective setting as sorted `key = value` pairs; feeding the
    /// echo back through [`validate_config`] reproduces the config.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut m: BTreeMap<String, String> = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("mode", self.mode.to_string());
        put("seed", self.seed.to_string());
        put("parallel", self.parallel.to_string());
        let l = self.torus.side_lengths();
        let n = self.torus.resolution();
        for a in 0..3 {
            put(&format!("torus.L{}", a + 1), num(l[a]));
            put(&format!("torus.N{}", a + 1), n[a].to_string());
        }
        put("model.eps", num(self.model.eps));
        put("model.p", num(self.model.p));
        put("model.q", num(self.model.q));
        put("model.r", num(self.model.cutoff_r));
        let s = &self.solver;
        put("solver.tol", num(s.tol));
        put("solver.max_iter", s.max_iter.to_string());
        put("solver.armijo", num(s.armijo));
        put("solver.backtrack", num(s.backtrack));
        put("solver.initial_step", num(s.initial_step));
        put("solver.max_step", num(s.max_step));
        put("solver.collapse_floor", num(s.collapse_floor));
        put(
            "search.inits",
            self.inits.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "),
        );
        put("search.distinct_tol", num(self.distinct_tol));
        put("profile.box", num(self.profile.box_side));
        put("profile.n", self.profile.resolution.to_string());
        put("profile.tol", num(self.profile.tol));
        put("profile.max_iter", self.profile.max_iter.to_string());
        if let Some(c) = &self.profile.cache {
            put("profile.cache", c.display().to_string());
        }
        put("photography.points", self.photography_points.to_string());
        put("cone.theta_samples", self.cone.theta_samples.to_string());
        put("cone.points", self.cone.points.to_string());
        put("cone.xi0", joinf(&self.cone.xi0));
        put("cone.refine", self.cone.minimax.refine.to_string());
        put("cone.tol", num(self.cone.minimax.tol));
        put("cone.max_iter", self.cone.minimax.max_iter.to_string());
        for (name, ladder) in [("sweep", &self.sweep), ("audit", &self.audit)] {
            if let Some(l) = ladder {
                put(&format!("{name}.eps"), joinf(&l.eps));
                put(&format!("{name}.n"), join(&l.resolutions));
                put(&format!("{name}.center"), joinf(&l.center));
            }
        }
        put("output.dir", self.output_dir.display().to_string());
        m.into_iter().collect()
    }

    /// The echo rendered as configuration text.
    pub fn to_text(&self) -> String {
        self.echo().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}
