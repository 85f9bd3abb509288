//! Builds each graph family and round-trips one through the edge-list format.

use lipgraph::graph::{generate, parse_edge_list, to_edge_list, GenSpec};

fn main() -> lipgraph::Result<()> {
    let specs = [
        GenSpec::Cycle { n: 6 },
        GenSpec::Complete { n: 5 },
        GenSpec::CompleteBipartite { a: 3, b: 3 },
        GenSpec::Hypercube { dim: 4 },
        GenSpec::Torus { sides: vec![4, 5] },
        GenSpec::RandomRegular { n: 20, d: 3, seed: 7 },
        GenSpec::WiredTree { levels: 3, d: 3 },
        GenSpec::Petersen,
    ];
    for spec in &specs {
        let g = generate(spec)?;
        println!(
            "{:<24} n={:<3} edges={:<3} regular={:?}",
            g.name(),
            g.n(),
            g.edge_count(),
            g.regular_degree()
        );
    }

    let g = generate(&"rr:10:3:1".parse()?)?;
    let text = to_edge_list(&g);
    let back = parse_edge_list(&text, "copy")?;
    assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    print!("{text}");
    Ok(())
}
