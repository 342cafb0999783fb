//! Node curvatures and the curvature of arbitrary node subsets.

use orchid::curvature::{Aggregator, Curvature, CurvatureConfig, CurvatureOptions};
use orchid::generators::make_hypertree;
use orchid::hypergraph::parse_hypergraph;
use orchid::measures::MeasureKind;

fn main() -> orchid::Result<()> {
    let tree = make_hypertree(3, 2, 3)?;
    let h = &tree.hypergraph;
    let cfg = CurvatureConfig::new(MeasureKind::WeightedEdges, Aggregator::Mean, 0.1);
    let engine = Curvature::new(h, cfg)?;

    for i in [0, 3, h.node_count() - 1] {
        println!(
            "node {i}: edge-averaged {:+.4}  neighbor-averaged {:+.4}",
            engine.node_edges(i)?.unwrap(),
            engine.node_neighborhood(i)?.unwrap()
        );
    }

    let central = h.edge(tree.central_edge).to_vec();
    println!("central edge {central:?}: {:+.4}", engine.edge(tree.central_edge)?.unwrap());
    println!("same nodes as a subset: {:+.4}", engine.subset(&central)?);
    let spread = [0, h.node_count() / 2, h.node_count() - 1];
    println!("subset {spread:?}: {:+.4}", engine.subset(&spread)?);

    // a singleton edge counts towards the degree but has no curvature
    let looped = parse_hypergraph("a b c\nc d\na")?;
    let lenient = Curvature::new(&looped, cfg)?;
    let strict = Curvature::with_options(
        &looped,
        cfg,
        CurvatureOptions {
            strict_degree_denominator: true,
            ..CurvatureOptions::default()
        },
    )?;
    println!(
        "node a: {:+.4}, with the strict degree denominator {:+.4}",
        lenient.node_edges(0)?.unwrap(),
        strict.node_edges(0)?.unwrap()
    );
    Ok(())
}
