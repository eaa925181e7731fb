//! Driving the orchestrator from code: a TOML configuration, one command, and the
//! report, timings and tables it writes.
//!
//! ```text
//! cargo run --release --example run_command -- [output directory]
//! ```

use std::path::PathBuf;

use ncindex::cli_reports::{run, Command, RunConfig, RunOptions};

const CONFIG: &str = r#"
seed = 7

[certify]
torus_resolution = 8
sphere = { kind = "lebedev", nodes = 14 }

[certify.export]
radius = 2
operators = ["d", "p"]
"#;

fn main() -> ncindex::Result<()> {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ncindex-example"));
    let config = RunConfig::from_toml_str(CONFIG)?;
    for command in [Command::Psi, Command::Certify] {
        let dir = out_dir.join(command.name());
        let outcome = run(command, config.clone(), &RunOptions { out_dir: dir, ..Default::default() })?;
        println!("{}: {}", command.name(), if outcome.report.passed { "PASS" } else { "FAIL" });
        for v in &outcome.report.verdicts {
            println!("  {:<32} {:e}", v.name, v.measured);
        }
        for path in &outcome.written {
            println!("  wrote {}", path.display());
        }
    }
    Ok(())
}
