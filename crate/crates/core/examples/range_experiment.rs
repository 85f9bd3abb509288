//! Config-driven range experiment on a random 3-regular graph with the
//! Glauber sampler, written to a temporary directory.

use lipgraph::experiment::{run_range_experiment, ExperimentConfig};

const CONFIG: &str = r#"{
  "schema_version": 1,
  "graph": {"family": "random-regular", "n": 50, "d": 3, "seed": 11},
  "M": 1,
  "mode": {"one-point": {"v0": 0}},
  "sampler": {"glauber": {"chains": 4}},
  "samples": 400,
  "seed": 5,
  "probes": [0, 25]
}"#;

fn main() -> lipgraph::Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?;
    let result = run_range_experiment(&cfg)?;
    let dir = std::env::temp_dir().join("lipgraph-range");
    result.write_to(&dir)?;
    let agg = &result.summary["aggregates"];
    println!("mean range {}", agg["mean_range"]);
    println!("tail {}", agg["range_tail"]);
    println!("probes {}", agg["probes"]);
    println!("theorem row {}", result.summary["theorem"]);
    println!("outputs in {}", dir.display());
    Ok(())
}
