//! Ground states, the flaw cap and kappa, plus the exhaustive check that
//! every function has a ground state.

use lipgraph::flaws::verify_ground_state_lemma;
use lipgraph::graph::{generate, GenSpec};
use lipgraph::lipschitz::{flaw_count, ground_states, kappa, FlawCap, LipschitzFn};
use lipgraph::NodeBudget;

fn main() -> lipgraph::Result<()> {
    let g = generate(&GenSpec::Complete { n: 6 })?;
    let cap = FlawCap::new(&g, 1.0)?;
    println!("threshold {} cap {}", cap.threshold, cap.cap());

    let f = LipschitzFn::new(&g, vec![0, 1, 1, 0, 1, 0], 1)?;
    for k in -2..=1 {
        println!("k={k}: flaws {}", flaw_count(f.values(), k, 1));
    }
    println!("ground states {:?}, kappa {}", ground_states(&g, &f, 1.0)?, kappa(&g, &f, 1.0)?);
    println!("shifted by 5: kappa {}", kappa(&g, &f.shifted(5), 1.0)?);

    let report = verify_ground_state_lemma(&g, 1, 1.0, 0, NodeBudget::default())?;
    println!("{} functions checked, {} failures, stats {}", report.instances_checked, report.failures.len(), report.stats);
    Ok(())
}
