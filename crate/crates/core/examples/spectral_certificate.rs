//! Spectral and exhaustive expansion certificates, then the expander
//! property checks they imply.

use lipgraph::graph::{generate, GenSpec};
use lipgraph::spectral::{exhaustive_lambda, spectral_lambda, spectrum, verify_expander_props, PropsOptions};

fn main() -> lipgraph::Result<()> {
    for spec in [GenSpec::Complete { n: 6 }, GenSpec::Petersen, GenSpec::Hypercube { dim: 3 }] {
        let g = generate(&spec)?;
        let s = spectrum(&g)?;
        let sp = spectral_lambda(&g)?;
        let ex = exhaustive_lambda(&g)?;
        println!("{}: eigenvalues {:?}", g.name(), s.eigenvalues.iter().map(|x| (x * 1e6).round() / 1e6).collect::<Vec<_>>());
        println!("  spectral lambda {:.6}, exhaustive lambda {:.6}", sp.lambda, ex.lambda);
        let report = verify_expander_props(&g, &ex, &PropsOptions::default());
        for c in &report.checks {
            println!("  {:<18} {:?}  {}", c.name, c.status, c.detail);
        }
    }
    Ok(())
}
