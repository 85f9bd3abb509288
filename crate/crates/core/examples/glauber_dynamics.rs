//! Heat-bath Glauber chain on C4 with M=1; compares the visit frequencies
//! with the uniform law over the 19 functions.

use std::collections::HashMap;

use lipgraph::graph::{generate, GenSpec};
use lipgraph::lipschitz::{enumerate_onepoint, EnsembleSpec, GlauberChain};
use lipgraph::NodeBudget;

fn main() -> lipgraph::Result<()> {
    let g = generate(&GenSpec::Cycle { n: 4 })?;
    let all: Vec<Vec<i64>> = enumerate_onepoint(&g, 0, 1, NodeBudget::default())?
        .map(|f| f.map(|f| f.values().to_vec()))
        .collect::<lipgraph::Result<_>>()?;

    let mut chain = GlauberChain::new(&g, &EnsembleSpec::one_point(0, 1), 3)?;
    let steps = 500_000;
    let mut visits: HashMap<Vec<i64>, u64> = HashMap::new();
    chain.run_with(steps, |_, v| *visits.entry(v.to_vec()).or_default() += 1);

    let u = 1.0 / all.len() as f64;
    let tv: f64 = all
        .iter()
        .map(|f| (visits.get(f).copied().unwrap_or(0) as f64 / steps as f64 - u).abs())
        .sum::<f64>()
        / 2.0;
    println!("steps {steps}, acceptance {:.3}, TV to uniform {tv:.4}", chain.acceptance_rate());
    Ok(())
}
