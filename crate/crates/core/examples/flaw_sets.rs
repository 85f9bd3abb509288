//! Flaw components above a ground state and the boundary ordering of a
//! closed set.

use lipgraph::flaws::{boundary_ordering, check_b_in_a_interior, check_boundary_ordering, flaw_decomposition};
use lipgraph::graph::{closure, generate, interior, GenSpec};
use lipgraph::lipschitz::LipschitzFn;

fn main() -> lipgraph::Result<()> {
    let g = generate(&GenSpec::Path { n: 9 })?;
    let f = LipschitzFn::new(&g, vec![0, 0, 1, 2, 3, 4, 5, 4, 3], 1)?;
    let dec = flaw_decomposition(&g, &f, 6, 0)?;
    println!("thresholds {:?}", dec.thresholds);
    println!("A = {:?}", dec.a.to_vec());
    println!("B = {:?}", dec.b.to_vec());
    println!("B+ inside A: {}", check_b_in_a_interior(&g, &dec)?);

    let q4 = generate(&GenSpec::Hypercube { dim: 4 })?;
    let s = q4.set_of([0, 1, 3])?;
    let s_plus = closure(&q4, &s);
    let order = boundary_ordering(&q4, &s_plus)?;
    let check = check_boundary_ordering(&q4, &interior(&q4, &s_plus), &order);
    println!("order {order:?}");
    println!("{check:?}");
    Ok(())
}
