//! Linked sets with a given neighborhood size, mutual covers, approximating
//! pairs and the container family that covers them.

use lipgraph::containers::{
    build_container_family, check_psi_approx, enumerate_h, mutual_cover, psi_approx_pair, s_bound_check,
    verify_container_lemma,
};
use lipgraph::graph::{generate, GenSpec};
use lipgraph::spectral::exhaustive_lambda;
use lipgraph::NodeBudget;

fn main() -> lipgraph::Result<()> {
    let g = generate(&GenSpec::Petersen)?;
    let profile = exhaustive_lambda(&g)?;
    let mut budget = NodeBudget::default();
    println!("lambda {:.4}", profile.lambda);

    let sets = enumerate_h(&g, 0, 6, 1, &mut budget)?;
    println!("|H_1(0, 6)| = {}", sets.len());
    let x = &sets[0];
    let mc = mutual_cover(&g, x, &profile, 5)?;
    let out = psi_approx_pair(&g, &mc.cover, x, 1.0)?;
    println!("X {:?} cover {:?}", x.to_vec(), mc.cover.to_vec());
    println!("S {:?} F {:?} {:?}", out.pair.s.to_vec(), out.pair.f.to_vec(), check_psi_approx(&g, x, &out.pair));
    println!("{:?}", s_bound_check(&out.pair, &profile, None));

    for gs in 3..=8 {
        let fam = build_container_family(&g, 0, gs, 1, 1.0, &profile, 0, &mut budget)?;
        println!(
            "g={gs}: |H|={} pairs={} covers_all={} greedy_ok={}",
            fam.sets,
            fam.members.len(),
            fam.covers_all,
            fam.greedy_bounds_hold
        );
    }
    for row in verify_container_lemma(&g, 0, 1..=5, 1, &profile, &mut budget)? {
        println!("{}", serde_json::to_string(&row)?);
    }
    Ok(())
}
