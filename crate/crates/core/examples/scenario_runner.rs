//! Runs a scenario written inline, then every scenario shipped under
//! `scenarios/`, writing CSV reports and SVG plots to a temporary directory.

use std::path::Path;

use caustica::expcli::{evaluate, exit_code, run_files, Overrides, Scenario};

const ORBIT: &str = r#"
[scenario]
name = "circle-orbit"
kind = "simulate"
seed = 4

[table]
conic = [1, 0, 0, 1, 0, -1]

[check]
start = [0.0, 0.6]
direction = [1.0, 0.0]
bounces = 12
caustic = [1, 0, 0, 1, 0, -0.36]
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = Scenario::parse(ORBIT)?;
    let outcome = evaluate(&scenario)?;
    println!("{}", outcome.report.summary());
    println!("svg is {} bytes", outcome.svg.map_or(0, |s| s.len()));

    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut configs: Vec<_> = std::fs::read_dir(&dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    configs.retain(|p| p.extension().is_some_and(|e| e == "toml"));
    configs.sort();
    let out = std::env::temp_dir().join("caustica-scenarios");
    let results = run_files(&configs, &Overrides::default(), &out);
    for (path, result) in configs.iter().zip(&results) {
        match result {
            Ok(run) => println!("{}", run.report.summary()),
            Err(e) => println!("{}: {e}", path.display()),
        }
    }
    println!("outputs in {}, exit code {}", out.display(), exit_code(&results));
    Ok(())
}
