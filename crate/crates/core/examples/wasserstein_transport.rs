//! Exact W1 between walk measures, its optimal plan, and a barycenter.

use orchid::hypergraph::parse_hypergraph;
use orchid::measures::{build_measure, MeasureKind};
use orchid::transport::{
    jump, reduce_instance, wasserstein1_with, wasserstein_barycenter, w1_empirical_1d, SolveOptions, SupportMode,
};

fn main() -> orchid::Result<()> {
    let h = parse_hypergraph("a b c\nc d\nd e f\nf a")?;
    let (a, d) = (0, 3);
    let mu = build_measure(&h, a, MeasureKind::WeightedEdges, 0.2)?;
    let nu = build_measure(&h, d, MeasureKind::WeightedEdges, 0.2)?;

    let reduced = reduce_instance(&mu, &nu);
    println!("shared mass {:.3}, moving mass {:.3}", 1.0 - reduced.moving_mass(), reduced.moving_mass());

    let opts = SolveOptions {
        plan: true,
        ..SolveOptions::default()
    };
    let w = wasserstein1_with(&h, &mu, &nu, opts)?;
    println!("W1(mu_a, mu_d) = {:.4}", w.cost);
    for (k, l, m) in w.plan.unwrap() {
        println!("  {} -> {}  {m:.4}", h.label(k), h.label(l));
    }
    println!("jump(a) = {:.4}", jump(&h, &mu)?);

    let edge: Vec<_> = [0, 1, 2]
        .iter()
        .map(|&i| build_measure(&h, i, MeasureKind::EqualNodes, 0.0))
        .collect::<Result<_, _>>()?;
    let bary = wasserstein_barycenter(&h, &edge, SupportMode::TwoHop)?;
    let atoms: Vec<String> = bary.measure.iter().map(|(k, m)| format!("{}:{m:.3}", h.label(k))).collect();
    println!("barycenter of a, b, c: {} (mean distance {:.4})", atoms.join(" "), bary.mean_distance);

    println!("1-D W1 of two samples: {}", w1_empirical_1d(&[0.0, 1.0, 2.0], &[0.5, 1.5]));
    Ok(())
}
