//! Edge and directional curvature under every measure and aggregator.

use orchid::curvature::{Aggregator, Curvature, CurvatureConfig, Selection};
use orchid::generators::make_hyperclique;
use orchid::hypergraph::parse_hypergraph;
use orchid::measures::MeasureKind;

fn main() -> orchid::Result<()> {
    // two triangles sharing a node, plus a bridge edge of size three
    let h = parse_hypergraph("a b c\nc d e\ne f g\ng a")?;

    for kind in MeasureKind::ALL {
        for agg in Aggregator::ALL {
            let engine = Curvature::new(&h, CurvatureConfig::new(kind, agg, 0.0))?;
            let values: Vec<String> = (0..h.edge_count())
                .map(|e| engine.edge(e).map(|k| format!("{:+.3}", k.unwrap())))
                .collect::<Result<_, _>>()?;
            println!("{kind}/{agg:<10} {}", values.join(" "));
        }
    }

    let engine = Curvature::new(&h, CurvatureConfig::new(MeasureKind::EqualNodes, Aggregator::Mean, 0.5))?;
    println!("kappa(a, b) at alpha 0.5 = {:.4}", engine.directional(0, 1)?);

    let clique = make_hyperclique(6, 3)?;
    let cfg = CurvatureConfig::new(MeasureKind::EqualEdges, Aggregator::Max, 0.0);
    let result = Curvature::new(&clique, cfg)?.all(Selection::all())?;
    println!("{}", serde_json::to_string(&result.to_json()["config"]).unwrap());
    let first = result.edge_curvatures.unwrap()[0].unwrap();
    println!("hyperclique n=6 r=3 edge curvature {first:.4} (1 - 1/5)");
    Ok(())
}
