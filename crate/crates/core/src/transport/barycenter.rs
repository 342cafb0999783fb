use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};

use super::full_costs;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::measures::SparseMeasure;

/// Candidate support for the barycenter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupportMode {
    /// Nodes within two hops of some input's base node.
    #[default]
    TwoHop,
    /// Every node of the component holding the inputs.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Barycenter {
    pub measure: SparseMeasure,
    /// Minimised value of `(1/n) Σ_i W1(barycenter, μ_i)`.
    pub mean_distance: f64,
}

/// Candidate nodes for a barycenter of `measures` under `mode`, sorted.
pub fn candidate_support(h: &Hypergraph, measures: &[SparseMeasure], mode: SupportMode) -> Vec<usize> {
    let mut out: Vec<usize> = match mode {
        SupportMode::TwoHop => {
            let mut nodes = Vec::new();
            for m in measures {
                nodes.extend(
                    h.bfs(m.base, Some(2))
                        .iter()
                        .enumerate()
                        .filter(|(_, d)| d.is_some())
                        .map(|(v, _)| v),
                );
            }
            nodes
        }
        SupportMode::Full => {
            let comp = h.components();
            let target = comp[measures[0].base];
            (0..h.node_count()).filter(|&v| comp[v] == target).collect()
        }
    };
    for m in measures {
        out.extend(m.support.iter().copied());
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Wasserstein-1 barycenter by linear programming over a finite candidate
/// support: one transport plan per input measure, all sharing their target
/// marginal.
pub fn wasserstein_barycenter(
    h: &Hypergraph,
    measures: &[SparseMeasure],
    mode: SupportMode,
) -> Result<Barycenter> {
    if measures.len() < 2 {
        return Err(Error::Shape("a barycenter needs at least two measures".into()));
    }
    for m in measures {
        for &v in &m.support {
            h.check_node(v)?;
        }
    }
    let candidates = candidate_support(h, measures, mode);
    let mut sources: Vec<usize> = measures.iter().flat_map(|m| m.support.iter().copied()).collect();
    sources.sort_unstable();
    sources.dedup();
    let dist = full_costs(h, &sources, &candidates)?;
    let row_of = |k: usize| sources.binary_search(&k).unwrap();
    let nc = candidates.len();
    let weight = 1.0 / measures.len() as f64;

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let bary: Vec<_> = (0..nc).map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    for m in measures {
        let mut column_sums: Vec<LinearExpr> = (0..nc).map(|_| LinearExpr::empty()).collect();
        for (k, mass) in m.iter() {
            let row = row_of(k);
            let mut row_sum = LinearExpr::empty();
            for c in 0..nc {
                let var = lp.add_var(weight * dist[row * nc + c], (0.0, f64::INFINITY));
                row_sum.add(var, 1.0);
                column_sums[c].add(var, 1.0);
            }
            lp.add_constraint(row_sum, ComparisonOp::Eq, mass);
        }
        for (c, mut expr) in column_sums.into_iter().enumerate() {
            expr.add(bary[c], -1.0);
            lp.add_constraint(expr, ComparisonOp::Eq, 0.0);
        }
    }
    let solution = lp
        .solve()
        .map_err(|e| Error::Numerical(format!("barycenter LP: {e}")))?
        .into_solution()
        .map_err(|_| Error::Numerical("barycenter LP interrupted".into()))?;

    let atoms: Vec<(usize, f64)> = candidates
        .iter()
        .zip(&bary)
        .map(|(&v, &var)| (v, solution.var_value(var)))
        .filter(|&(_, x)| x > 1e-12)
        .collect();
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    let atoms = atoms.into_iter().map(|(v, x)| (v, x / total)).collect();
    Ok(Barycenter {
        measure: SparseMeasure::from_atoms(measures[0].base, atoms),
        mean_distance: solution.objective().max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::parse_hypergraph;
    use crate::measures::{build_measure, MeasureKind};
    use crate::transport::wasserstein1;

    #[test]
    fn identical_inputs() {
        let h = parse_hypergraph("a b c\nc d").unwrap();
        let m = build_measure(&h, 2, MeasureKind::EqualEdges, 0.3).unwrap();
        let b = wasserstein_barycenter(&h, &[m.clone(), m.clone(), m.clone()], SupportMode::TwoHop).unwrap();
        assert!(b.mean_distance.abs() < 1e-9);
        for (v, x) in m.iter() {
            assert!((b.measure.mass_at(v) - x).abs() < 1e-9);
        }
    }

    #[test]
    fn two_inputs_half_distance() {
        let h = parse_hypergraph("a b\nb c\nc d\nd e\nb d").unwrap();
        let m1 = build_measure(&h, 1, MeasureKind::EqualNodes, 0.1).unwrap();
        let m2 = build_measure(&h, 2, MeasureKind::EqualNodes, 0.1).unwrap();
        let w = wasserstein1(&h, &m1, &m2).unwrap().cost;
        for mode in [SupportMode::TwoHop, SupportMode::Full] {
            let b = wasserstein_barycenter(&h, &[m1.clone(), m2.clone()], mode).unwrap();
            assert!((b.mean_distance - w / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn three_diracs_on_a_path() {
        // enumerating candidate supports on the 3 nodes: δ_b costs (1+0+1)/3
        let h = parse_hypergraph("a b\nb c").unwrap();
        let diracs: Vec<_> = (0..3).map(SparseMeasure::dirac).collect();
        let b = wasserstein_barycenter(&h, &diracs, SupportMode::Full).unwrap();
        assert!((b.mean_distance - 2.0 / 3.0).abs() < 1e-9);
        assert!((b.measure.mass_at(1) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn needs_two_measures() {
        let h = parse_hypergraph("a b").unwrap();
        assert!(wasserstein_barycenter(&h, &[SparseMeasure::dirac(0)], SupportMode::Full).is_err());
    }

    #[test]
    fn split_components() {
        let h = parse_hypergraph("a b\nc d").unwrap();
        let r = wasserstein_barycenter(&h, &[SparseMeasure::dirac(0), SparseMeasure::dirac(2)], SupportMode::TwoHop);
        assert_eq!(r.unwrap_err(), Error::InfiniteCost);
    }
}
