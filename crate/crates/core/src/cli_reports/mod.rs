//! Command-line front end: TOML run configuration, orchestration of the four commands
//! (`psi`, `index`, `sweep`, `certify`), deterministic JSON reports, CSV sweep tables and
//! a lockfile guarding the output directory.
//!
//! Every number in a report is produced by a module operation; this layer only compares
//! recorded numbers with the configured tolerances.

mod commands;
mod config;
mod lock;
mod report;

pub use commands::{execute, run, Execution, RunOptions, RunOutcome};
pub use config::{
    CertifyConfig, Command, ExportConfig, IndexConfig, ModelConfig, NiceConfig, PsiConfig, RunConfig, SphereRule,
    SweepConfig, Tolerances,
};
pub use lock::{OutputLock, LOCK_FILE};
pub use report::{Rule, RunReport, Stage, Table, Timings, Verdict, REPORT_FILE, SWEEP_DIR, TIMINGS_FILE};
