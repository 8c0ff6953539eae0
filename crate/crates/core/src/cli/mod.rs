//! Experiment configuration, orchestration and reports.
//!
//! A run reads a [`config`] file, dispatches on its mode and writes into the
//! output directory:
//!
//! - `report.txt`: `key = value` lines with dotted keys (deterministic);
//! - `timing.csv`: wall times (`label,seconds`);
//! - `fields/*.fld`: one dump per reported state;
//! - `traces/*.csv`: energy per accepted descent step (`iteration,energy`);
//! - a mode table: `runs.csv`, `photography.csv`, `cone.csv`, `sweep.csv`
//!   or `audit.csv`, with headers given by the `*_COLUMNS` constants;
//! - `profile.fld`/`profile.meta` for modes that use the limit ground state.
//!
//! Exit codes of the `sbpp` binary: 0 when everything converged, 2 when some
//! run is flagged, 1 on configuration, I/O or solver errors.

pub mod config;
pub mod report;
pub mod run;

pub use config::{validate_config, ExperimentConfig, Mode, RawConfig};
pub use report::{num, parse_report, report_value, RunReport, SolutionRecord, VERSION};
pub use run::{run_experiment, CONE_COLUMNS, PHOTOGRAPHY_COLUMNS, RUNS_COLUMNS, SWEEP_COLUMNS, TRACE_COLUMNS};
