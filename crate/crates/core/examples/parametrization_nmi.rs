//! How much do curvature parametrizations agree? NMI between the edge
//! curvatures of one hypergraph under a grid of configurations.

use orchid::analysis::{nmi, NmiNormalizer};
use orchid::curvature::{Aggregator, Curvature, CurvatureConfig, Selection};
use orchid::generators::gen_erdos_renyi;
use orchid::measures::MeasureKind;

fn main() -> orchid::Result<()> {
    let h = gen_erdos_renyi(80, 60, 0.05, 3)?;
    let only_edges = Selection {
        edges: true,
        ..Selection::none()
    };
    let mut names = Vec::new();
    let mut columns = Vec::new();
    for kind in MeasureKind::ALL {
        for agg in [Aggregator::Mean, Aggregator::Max] {
            for alpha in [0.0, 0.5] {
                let cfg = CurvatureConfig::new(kind, agg, alpha);
                let r = Curvature::new(&h, cfg)?.all(only_edges)?;
                // singleton edges have no curvature; mark them consistently
                columns.push(r.edge_curvatures.unwrap().iter().map(|k| k.unwrap_or(1.0)).collect::<Vec<_>>());
                names.push(format!("{kind}/{}/{alpha}", agg.name()));
            }
        }
    }
    for (a, xs) in columns.iter().enumerate() {
        let row: Vec<String> = columns
            .iter()
            .map(|ys| nmi(xs, ys, 10, NmiNormalizer::Max).map(|v| format!("{v:.2}")))
            .collect::<Result<_, _>>()?;
        println!("{:>16}  {}", names[a], row.join(" "));
    }
    Ok(())
}
