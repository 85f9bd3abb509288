//! Neighborhoods, boundaries and k-linked components of a vertex set.

use lipgraph::graph::{ball, boundary_ops, generate, is_k_linked, k_linked_components, GenSpec};

fn main() -> lipgraph::Result<()> {
    let g = generate(&GenSpec::Cycle { n: 12 })?;
    let x = g.set_of([0, 1, 2, 6])?;
    let b = boundary_ops(&g, &x);
    println!("X        = {:?}", x.to_vec());
    println!("N(X)     = {:?}", b.neighborhood.to_vec());
    println!("X+       = {:?}", b.closure.to_vec());
    println!("outer    = {:?}", b.outer_boundary.to_vec());
    println!("inner    = {:?}", b.inner_boundary.to_vec());
    println!("interior = {:?}", b.interior.to_vec());
    println!("B(0, 2)  = {:?}", ball(&g, 0, 2)?.to_vec());

    for k in 1..=4 {
        let comps: Vec<Vec<usize>> = k_linked_components(&g, &x, k).iter().map(|c| c.to_vec()).collect();
        println!("k={k}: linked={} components={comps:?}", is_k_linked(&g, &x, k));
    }
    Ok(())
}
