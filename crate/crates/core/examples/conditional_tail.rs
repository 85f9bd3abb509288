//! Exact tail of f(w0) above the ground-state window on K6 and C6, with the
//! closed-form bound and the hypothesis gate.

use lipgraph::flaws::conditional_tail_exact;
use lipgraph::gates::Constants;
use lipgraph::graph::{generate, GenSpec};
use lipgraph::NodeBudget;

fn main() -> lipgraph::Result<()> {
    for (spec, lambda, m) in [(GenSpec::Complete { n: 6 }, 1.0, 1), (GenSpec::Cycle { n: 6 }, 2.0, 2)] {
        let g = generate(&spec)?;
        let rows = conditional_tail_exact(&g, m, lambda, 0, 0, &[2, 3, 4, 5, 6], &Constants::default(), NodeBudget::default())?;
        println!("{} (gate holds: {})", g.name(), rows[0].gate.holds);
        for r in rows {
            println!("  t={} p={}/{}={:.6} bound={:.6} |B|={}", r.t, r.favorable, r.total, r.probability, r.bound, r.ball_size);
        }
    }
    Ok(())
}
