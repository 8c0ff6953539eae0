use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sbpp::cli::{run_experiment, ExperimentConfig, RawConfig};

/// Run an sbpp experiment from a key=value config file.
#[derive(Parser, Debug)]
#[command(name = "sbpp", version)]
struct Args {
    /// Config file
    #[arg(long)]
    config: PathBuf,
    /// Override `mode`
    #[arg(long)]
    mode: Option<String>,
    /// Override `model.eps`
    #[arg(long)]
    eps: Option<f64>,
    /// Override `model.p`
    #[arg(long)]
    p: Option<f64>,
    /// Grid points per axis (overrides `torus.N*`)
    #[arg(long)]
    grid: Option<usize>,
    /// Output directory (default: `output.dir`, then $SBPP_OUT, then `sbpp-out`)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for independent runs
    #[arg(long)]
    parallel: Option<usize>,
    /// Override `solver.tol`
    #[arg(long)]
    tol: Option<f64>,
    /// Override `solver.max_iter`
    #[arg(long)]
    max_iter: Option<usize>,
}

fn load(args: &Args) -> sbpp::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| sbpp::SbppError::Io {
        path: args.config.clone(),
        source: e,
    })?;
    let mut raw = RawConfig::parse(&text)?;
    let mut set = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            raw.set(k, v);
        }
    };
    set("mode", args.mode.clone());
    set("model.eps", args.eps.map(|v| v.to_string()));
    set("model.p", args.p.map(|v| v.to_string()));
    set("seed", args.seed.map(|v| v.to_string()));
    set("parallel", args.parallel.map(|v| v.to_string()));
    set("solver.tol", args.tol.map(|v| v.to_string()));
    set("solver.max_iter", args.max_iter.map(|v| v.to_string()));
    set("output.dir", args.out.as_ref().map(|p| p.display().to_string()));
    if let Some(n) = args.grid {
        for k in ["torus.N1", "torus.N2", "torus.N3"] {
            raw.remove(k);
        }
        raw.set("torus.N", n.to_string());
    }
    if !raw.contains("output.dir") {
        if let Ok(dir) = std::env::var("SBPP_OUT") {
            raw.set("output.dir", dir);
        }
    }
    ExperimentConfig::from_raw(&raw)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("sbpp: {e}");
            return ExitCode::from(1);
        }
    };
    match run_experiment(&config) {
        Ok(report) => {
            println!("{}", report.report_path().display());
            for f in &report.flags {
                eprintln!("sbpp: flag: {f}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("sbpp: {e}");
            ExitCode::from(1)
        }
    }
}
