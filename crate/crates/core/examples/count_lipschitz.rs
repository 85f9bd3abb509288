//! Exact counts of one-point and ground-state ensembles, checked against
//! plain enumeration.

use lipgraph::graph::{generate, GenSpec};
use lipgraph::lipschitz::{count_groundstate, count_onepoint, enumerate_onepoint};
use lipgraph::NodeBudget;

fn main() -> lipgraph::Result<()> {
    for (spec, m) in [
        (GenSpec::Complete { n: 2 }, 1),
        (GenSpec::Path { n: 3 }, 1),
        (GenSpec::Cycle { n: 4 }, 1),
        (GenSpec::Complete { n: 6 }, 1),
        (GenSpec::Cycle { n: 6 }, 2),
        (GenSpec::Petersen, 1),
    ] {
        let g = generate(&spec)?;
        let c = count_onepoint(&g, 0, m, NodeBudget::default())?;
        println!("|Lip_v0({}; M={m})| = {} ({} nodes)", g.name(), c.count, c.nodes_explored);
    }

    let c4 = generate(&GenSpec::Cycle { n: 4 })?;
    for f in enumerate_onepoint(&c4, 0, 1, NodeBudget::default())? {
        println!("  {:?}", f?.values());
    }

    let k6 = generate(&GenSpec::Complete { n: 6 })?;
    let star = count_groundstate(&k6, 0, 1, 1.0, NodeBudget::default())?;
    println!("|Lip*_0(K6; M=1)| = {}", star.count);

    match count_onepoint(&generate(&GenSpec::Hypercube { dim: 5 })?, 0, 2, NodeBudget::new(10_000)) {
        Err(e) => println!("Q5 with a small budget: {e}"),
        Ok(c) => println!("Q5: {}", c.count),
    }
    Ok(())
}
