//! Exact comparison of the ground-state ensemble with M+1 copies of the
//! one-point ensemble.

use lipgraph::experiment::{run_covering_check, ExperimentConfig, GraphSource, Mode, Records};
use lipgraph::graph::GenSpec;

fn main() -> lipgraph::Result<()> {
    for (spec, m) in [(GenSpec::Complete { n: 6 }, 1), (GenSpec::Complete { n: 6 }, 2), (GenSpec::Cycle { n: 5 }, 1)] {
        let cfg = ExperimentConfig::new(GraphSource::Spec(spec), m, Mode::GroundState { k: 0 });
        let result = run_covering_check(&cfg)?;
        if let Records::Covering(rows) = &result.records {
            let r = &rows[0];
            println!(
                "{} M={m}: {} <= {}? {} (asserted: {}, shift invariant: {})",
                r.graph, r.lhs, r.rhs, r.holds, r.asserted, r.shift_invariant
            );
        }
    }
    Ok(())
}
