//! The three random-walk measures at one node, for a few laziness values.

use orchid::hypergraph::parse_hypergraph;
use orchid::measures::{build_measure, build_measure_exact, MeasureKind};
use num_rational::Ratio;

fn main() -> orchid::Result<()> {
    // node 0 sits in one large and one small edge
    let h = parse_hypergraph("0 1 2 3 4\n0 5\n5 6")?;

    for alpha in [0.0, 0.5] {
        println!("alpha = {alpha}");
        for kind in MeasureKind::ALL {
            let mu = build_measure(&h, 0, kind, alpha)?;
            let atoms: Vec<String> = mu.iter().map(|(k, m)| format!("{}:{m:.3}", h.label(k))).collect();
            println!("  {kind}: {}", atoms.join(" "));
        }
    }

    let exact = build_measure_exact(&h, 0, MeasureKind::EqualEdges, Ratio::new(1, 3))?;
    let atoms: Vec<String> = exact.iter().map(|(k, m)| format!("{}:{m}", h.label(*k))).collect();
    println!("exact ee at alpha 1/3: {}", atoms.join(" "));
    Ok(())
}
