//! Entropy of small joint distributions: the standard properties and
//! Shearer's inequality over a pairwise cover.

use lipgraph::entropy::{check_entropy_properties, conditional_entropy, entropy, shearer_check, CoverWeights, JointPmf};

fn main() -> lipgraph::Result<()> {
    // X, Y fair bits and Z = X xor Y
    let xor = JointPmf::uniform(vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]])?;
    println!("H(X,Y,Z) = {}", entropy(&xor, &[0, 1, 2])?);
    println!("H(Z | X) = {}", conditional_entropy(&xor, &[2], &[0])?);
    println!("H(Z | X,Y) = {}", conditional_entropy(&xor, &[2], &[0, 1])?);

    let report = check_entropy_properties(&xor)?;
    for p in &report.properties {
        println!("{:<28} {} instances, {} failures", p.property, p.instances, p.failures.len());
    }

    let cw = CoverWeights { sets: vec![vec![0, 1], vec![1, 2], vec![0, 2]], weights: vec![0.5; 3], order: vec![] };
    let sh = shearer_check(&xor, &cw)?;
    println!("Shearer: {} <= {} ({})", sh.lhs, sh.rhs, sh.pass);
    Ok(())
}
