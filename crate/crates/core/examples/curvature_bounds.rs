//! Total-variation bounds around edge curvatures.

use orchid::curvature::{Aggregator, Curvature, CurvatureConfig};
use orchid::generators::{gen_erdos_renyi, make_hyperclique};
use orchid::measures::MeasureKind;

fn main() -> orchid::Result<()> {
    // bounds need a finite diameter, so keep the first connected sample
    let h = (0..)
        .map(|seed| gen_erdos_renyi(40, 30, 0.08, seed))
        .find(|h| h.as_ref().map_or(true, |h| h.component_count() == 1))
        .unwrap()?;
    println!("{}", h.structural_profile(true));
    for agg in [Aggregator::Mean, Aggregator::Max] {
        let engine = Curvature::new(&h, CurvatureConfig::new(MeasureKind::EqualNodes, agg, 0.0))?;
        println!("{agg}:");
        for e in (0..h.edge_count()).filter(|&e| h.edge(e).len() > 1).take(6) {
            let b = engine.bounds(e)?;
            let k = engine.edge(e)?.unwrap();
            println!("  edge {e:>2}  {:+.3} <= {k:+.3} <= {:+.3}", b.lower, b.upper);
        }
    }

    // on a diameter-one hypergraph the bounds collapse onto the curvature
    let clique = make_hyperclique(5, 2)?;
    let engine = Curvature::new(&clique, CurvatureConfig::new(MeasureKind::EqualNodes, Aggregator::Max, 0.5))?;
    let b = engine.bounds(0)?;
    println!("K5: {:.4} = {:.4} = {:.4}", b.lower, engine.edge(0)?.unwrap(), b.upper);
    Ok(())
}
