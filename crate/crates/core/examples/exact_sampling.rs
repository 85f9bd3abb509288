//! Exactly uniform draws from a one-point ensemble, tallied against the
//! ensemble size.

use std::collections::BTreeMap;

use lipgraph::graph::{generate, GenSpec};
use lipgraph::lipschitz::{EnsembleSpec, ExactSampler};
use lipgraph::NodeBudget;

fn main() -> lipgraph::Result<()> {
    let g = generate(&GenSpec::Cycle { n: 4 })?;
    let mut sampler = ExactSampler::new(&g, &EnsembleSpec::one_point(0, 1), 42, NodeBudget::default())?;
    let draws = 19_000;
    let mut tally: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for _ in 0..draws {
        *tally.entry(sampler.draw()?.values().to_vec()).or_default() += 1;
    }
    println!("ensemble size {}, distinct draws {}", sampler.ensemble_size(), tally.len());
    for (f, c) in &tally {
        println!("{f:?}: {c}");
    }
    Ok(())
}
