//! Drive a full experiment from a declarative config, the same path the CLI
//! takes: parse, run the partition pipeline, and inspect the report.

use std::path::Path;

use cesaro_hull::config::ExperimentConfig;
use cesaro_hull::runner::{run_partition, RunBody};

fn main() -> cesaro_hull::Result<()> {
    let config = ExperimentConfig::from_json(
        r#"{
            "space": { "masses": [0.5, 0.3, 0.2] },
            "family": { "kind": "per_atom", "atoms": [
                { "rule": { "constant": { "value": 1.0 } }, "bound": { "bounded": 1.0 } },
                { "rule": { "decay": { "level": 2.0, "bump": 0.25 } }, "bound": { "bounded": 2.25 } },
                { "rule": { "power": { "alpha": 1.0, "scale": 1.0 } }, "bound": "unbounded" }
            ] },
            "window": { "kind": "horizon", "horizon": 512 },
            "mode": "exact",
            "seed": 31
        }"#,
    )?;

    let report = run_partition(&config, Path::new("."))?;
    for line in &report.narrative {
        println!("{line}");
    }
    println!("all verdicts pass: {}", report.all_pass);

    if let RunBody::Partition(body) = &report.body {
        println!("\ncertificate (external JSON schema):");
        println!(
            "{}",
            serde_json::to_string_pretty(&body.certificate).expect("serializable")
        );
    }

    // the full report minus the timings block is byte-stable across reruns
    let rerun = run_partition(&config, Path::new("."))?;
    println!(
        "\ndeterministic rerun: {}",
        report.deterministic_json()? == rerun.deterministic_json()?
    );
    Ok(())
}
