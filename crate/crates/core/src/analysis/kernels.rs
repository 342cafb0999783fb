use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::FeatureDistribution;
use crate::error::{Error, Result};
use crate::transport::w1_empirical_1d;

pub const DEFAULT_QUANTILES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelKind {
    #[serde(rename = "rbf")]
    Rbf,
    #[serde(rename = "expw")]
    ExpWasserstein,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelMatrix {
    pub ids: Vec<String>,
    #[serde(serialize_with = "rows")]
    pub values: DMatrix<f64>,
    pub kind: KernelKind,
    pub gamma: f64,
}

fn rows<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    rows.serialize(s)
}

impl KernelMatrix {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// `v` evenly spaced quantiles at levels `(t + 1/2) / v`, each taken as the
/// order statistic of rank `ceil(q·n)`.
pub fn quantile_vector(dist: &FeatureDistribution, v: usize) -> Vec<f64> {
    let mut sorted = dist.samples.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    (0..v)
        .map(|t| {
            let q = (t as f64 + 0.5) / v as f64;
            let rank = ((q * n as f64).ceil() as usize).clamp(1, n);
            sorted[rank - 1]
        })
        .collect()
}

/// Symmetric matrix of pairwise values over the upper triangle.
fn pairwise(n: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> DMatrix<f64> {
    let upper: Vec<(usize, usize, f64)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..n).map(move |j| (i, j)).collect::<Vec<_>>())
        .map(|(i, j)| (i, j, f(i, j)))
        .collect();
    let mut m = DMatrix::zeros(n, n);
    for (i, j, v) in upper {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    m
}

/// Inverse median of the nonzero off-diagonal entries, or 1 when all
/// entries vanish.
fn median_gamma(d: &DMatrix<f64>) -> f64 {
    let n = d.nrows();
    let mut vals: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| d[(i, j)])
        .filter(|&v| v > 0.0)
        .collect();
    if vals.is_empty() {
        log::warn!("all inputs identical; median heuristic falls back to gamma = 1");
        return 1.0;
    }
    vals.sort_by(f64::total_cmp);
    let mid = vals.len() / 2;
    let median = if vals.len() % 2 == 1 {
        vals[mid]
    } else {
        0.5 * (vals[mid - 1] + vals[mid])
    };
    1.0 / median
}

fn check_gamma(gamma: Option<f64>) -> Result<()> {
    match gamma {
        Some(g) if !(g > 0.0 && g.is_finite()) => Err(Error::Shape(format!("kernel gamma {g} must be positive"))),
        _ => Ok(()),
    }
}

fn exp_kernel(ids: Vec<String>, d: DMatrix<f64>, kind: KernelKind, gamma: Option<f64>) -> Result<KernelMatrix> {
    check_gamma(gamma)?;
    let gamma = gamma.unwrap_or_else(|| median_gamma(&d));
    let values = d.map(|v| (-gamma * v).exp());
    Ok(KernelMatrix {
        ids,
        values,
        kind,
        gamma,
    })
}

/// `exp(-γ‖x - y‖²)` over feature vectors of equal length.
pub fn rbf_kernel_matrix(ids: Vec<String>, features: &[Vec<f64>], gamma: Option<f64>) -> Result<KernelMatrix> {
    if ids.len() != features.len() || features.len() < 2 {
        return Err(Error::Shape("rbf kernel needs at least two labelled feature vectors".into()));
    }
    let dim = features[0].len();
    if features.iter().any(|f| f.len() != dim) {
        return Err(Error::Shape("feature vectors differ in length".into()));
    }
    let d = pairwise(features.len(), |i, j| {
        features[i].iter().zip(&features[j]).map(|(a, b)| (a - b) * (a - b)).sum()
    });
    exp_kernel(ids, d, KernelKind::Rbf, gamma)
}

/// `exp(-γ W1(x, y))` with the 1-D empirical Wasserstein distance.
pub fn expw_kernel_matrix(dists: &[FeatureDistribution], gamma: Option<f64>) -> Result<KernelMatrix> {
    if dists.len() < 2 {
        return Err(Error::Shape("kernel needs at least two distributions".into()));
    }
    let d = pairwise(dists.len(), |i, j| w1_empirical_1d(&dists[i].samples, &dists[j].samples));
    let ids = dists.iter().map(|d| d.source_id.clone()).collect();
    exp_kernel(ids, d, KernelKind::ExpWasserstein, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::FeatureKind;

    fn dist(id: &str, samples: &[f64]) -> FeatureDistribution {
        FeatureDistribution::new(id, FeatureKind::EdgeCurvature, samples.to_vec()).unwrap()
    }

    #[test]
    fn quantiles() {
        assert_eq!(quantile_vector(&dist("a", &[3.0; 5]), 4), [3.0; 4]);
        assert_eq!(quantile_vector(&dist("a", &[1.0, 0.0]), 2), [0.0, 1.0]);
        let grid: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
        let q = quantile_vector(&dist("g", &grid), 10);
        for (t, v) in q.iter().enumerate() {
            assert!((v - (t as f64 + 0.5) / 10.0).abs() <= 0.01 + 1e-12);
        }
    }

    #[test]
    fn expw_entries() {
        let ds = [dist("a", &[0.0, 1.0]), dist("b", &[0.0, 1.0]), dist("c", &[0.0, 0.0])];
        let k = expw_kernel_matrix(&ds, Some(2.0)).unwrap();
        assert_eq!(k.values[(0, 1)], 1.0);
        assert_eq!(k.values[(1, 1)], 1.0);
        let w = w1_empirical_1d(&ds[0].samples, &ds[2].samples);
        assert!((k.values[(0, 2)] - (-2.0 * w).exp()).abs() < 1e-15);
        assert_eq!(k.values, k.values.transpose());
        // nonzero distances are 0.5, 0.5 and 0
        let auto = expw_kernel_matrix(&ds, None).unwrap();
        assert_eq!(auto.gamma, 2.0);
    }

    #[test]
    fn small_gamma_flattens() {
        let k = rbf_kernel_matrix(
            vec!["a".into(), "b".into()],
            &[vec![0.0, 1.0], vec![5.0, -3.0]],
            Some(1e-12),
        )
        .unwrap();
        assert!(k.values.iter().all(|&v| (v - 1.0).abs() < 1e-9));
    }

    #[test]
    fn identical_inputs_fall_back() {
        let k = rbf_kernel_matrix(vec!["a".into(), "b".into()], &[vec![1.0], vec![1.0]], None).unwrap();
        assert_eq!(k.gamma, 1.0);
        assert!(rbf_kernel_matrix(vec!["a".into()], &[vec![1.0]], None).is_err());
        assert!(rbf_kernel_matrix(vec!["a".into(), "b".into()], &[vec![1.0], vec![1.0]], Some(-1.0)).is_err());
    }

    #[test]
    fn json_shape() {
        let k = rbf_kernel_matrix(vec!["a".into(), "b".into()], &[vec![0.0], vec![1.0]], Some(1.0)).unwrap();
        let v = serde_json::to_value(&k).unwrap();
        assert_eq!(v["kind"], "rbf");
        assert_eq!(v["values"][0][0], 1.0);
        assert_eq!(v["values"][1].as_array().unwrap().len(), 2);
    }
}
