use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::FeatureDistribution;
use crate::error::{Error, Result};
use crate::transport::w1_empirical_1d;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MmdOutcome {
    pub mmd2: f64,
    pub p_value: f64,
    pub gamma: f64,
}

/// Unbiased MMD² between two samples under an RBF kernel whose bandwidth is
/// the median heuristic on the pooled sample, with a permutation p-value.
/// Replicate `b` shuffles with its own generator seeded `seed + b`.
pub fn mmd_test(xs: &FeatureDistribution, ys: &FeatureDistribution, replicates: usize, seed: u64) -> Result<MmdOutcome> {
    let (m, n) = (xs.len(), ys.len());
    if m < 2 || n < 2 {
        return Err(Error::Shape("the unbiased MMD estimate needs two samples on each side".into()));
    }
    if replicates == 0 {
        return Err(Error::Shape("at least one permutation replicate is required".into()));
    }
    let pooled: Vec<f64> = xs.samples.iter().chain(&ys.samples).copied().collect();
    let total = m + n;
    let mut sq: Vec<f64> = (0..total)
        .flat_map(|i| (i + 1..total).map(move |j| (i, j)))
        .map(|(i, j)| (pooled[i] - pooled[j]).powi(2))
        .filter(|&d| d > 0.0)
        .collect();
    let gamma = if sq.is_empty() {
        1.0
    } else {
        sq.sort_by(f64::total_cmp);
        let mid = sq.len() / 2;
        let median = if sq.len() % 2 == 1 { sq[mid] } else { 0.5 * (sq[mid - 1] + sq[mid]) };
        1.0 / median
    };
    let k = DMatrix::from_fn(total, total, |i, j| (-gamma * (pooled[i] - pooled[j]).powi(2)).exp());

    let statistic = |order: &[usize]| -> f64 {
        let (x, y) = order.split_at(m);
        let within = |s: &[usize]| {
            let mut acc = 0.0;
            for (a, &i) in s.iter().enumerate() {
                for &j in &s[a + 1..] {
                    acc += k[(i, j)];
                }
            }
            2.0 * acc / (s.len() * (s.len() - 1)) as f64
        };
        let mut cross = 0.0;
        for &i in x {
            for &j in y {
                cross += k[(i, j)];
            }
        }
        within(x) + within(y) - 2.0 * cross / (m * n) as f64
    };

    let identity: Vec<usize> = (0..total).collect();
    let observed = statistic(&identity);
    let exceed = (0..replicates as u64)
        .into_par_iter()
        .filter(|&b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(b));
            let mut order = identity.clone();
            order.shuffle(&mut rng);
            statistic(&order) >= observed
        })
        .count();
    Ok(MmdOutcome {
        mmd2: observed,
        p_value: (1 + exceed) as f64 / (replicates + 1) as f64,
        gamma,
    })
}

/// Multiplies every p-value by the number of tests, capped at 1.
pub fn bonferroni_adjust(pvals: &[f64]) -> Vec<f64> {
    let h = pvals.len() as f64;
    pvals.iter().map(|p| (p * h).min(1.0)).collect()
}

/// Pairwise 1-D Wasserstein distances, computed over the upper triangle.
pub fn w1_matrix(dists: &[FeatureDistribution]) -> DMatrix<f64> {
    let n = dists.len();
    let upper: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, j)| (i, j, w1_empirical_1d(&dists[i].samples, &dists[j].samples)))
        .collect();
    let mut m = DMatrix::zeros(n, n);
    for (i, j, w) in upper {
        m[(i, j)] = w;
        m[(j, i)] = w;
    }
    m
}

/// Wasserstein clustering coefficient `Σ_X ω(X) / (1 + Σ_{X≠Y} ω(X, Y))`,
/// where `ω(X)` is the mean pairwise W1 inside cluster `X` (0 for
/// singletons), `ω(X, Y)` the mean W1 across two clusters, and the cross
/// sum runs over ordered pairs. Lower is better.
pub fn wcc(labels: &[usize], dists: &[FeatureDistribution]) -> Result<f64> {
    if labels.len() != dists.len() {
        return Err(Error::Shape(format!(
            "{} cluster labels for {} distributions",
            labels.len(),
            dists.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::Shape("no sources to cluster".into()));
    }
    let w = w1_matrix(dists);
    let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        clusters.entry(l).or_default().push(i);
    }
    let clusters: Vec<Vec<usize>> = clusters.into_values().collect();
    let intra: f64 = clusters
        .iter()
        .map(|c| {
            if c.len() < 2 {
                return 0.0;
            }
            let mut acc = 0.0;
            for (a, &i) in c.iter().enumerate() {
                for &j in &c[a + 1..] {
                    acc += w[(i, j)];
                }
            }
            acc / (c.len() * (c.len() - 1) / 2) as f64
        })
        .sum();
    let mut inter = 0.0;
    for (a, x) in clusters.iter().enumerate() {
        for y in &clusters[a + 1..] {
            let mut acc = 0.0;
            for &i in x {
                for &j in y {
                    acc += w[(i, j)];
                }
            }
            // ω(X, Y) = ω(Y, X), counted once per order
            inter += 2.0 * acc / (x.len() * y.len()) as f64;
        }
    }
    Ok(intra / (1.0 + inter))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NmiNormalizer {
    #[default]
    Max,
    Min,
    Mean,
    Sqrt,
}

impl fmt::Display for NmiNormalizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Max => "max",
            Self::Min => "min",
            Self::Mean => "mean",
            Self::Sqrt => "sqrt",
        })
    }
}

impl FromStr for NmiNormalizer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max" => Ok(Self::Max),
            "min" => Ok(Self::Min),
            "mean" => Ok(Self::Mean),
            "sqrt" => Ok(Self::Sqrt),
            other => Err(format!("unknown normalizer '{other}' (expected max, min, mean or sqrt)")),
        }
    }
}

fn discretize(xs: &[f64], bins: usize) -> Vec<usize> {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = hi - lo;
    xs.iter()
        .map(|&x| {
            if width > 0.0 {
                (((x - lo) / width * bins as f64) as usize).min(bins - 1)
            } else {
                0
            }
        })
        .collect()
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Mutual information of the equal-width discretizations of `xs` and `ys`,
/// divided by the chosen combination of their entropies. A variable with
/// zero entropy gives 1 if both are constant and 0 otherwise.
pub fn nmi(xs: &[f64], ys: &[f64], bins: usize, normalizer: NmiNormalizer) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Shape(format!("samples of length {} and {}", xs.len(), ys.len())));
    }
    if xs.len() < 2 || bins < 2 {
        return Err(Error::Shape("nmi needs at least two samples and two bins".into()));
    }
    let (bx, by) = (discretize(xs, bins), discretize(ys, bins));
    let n = xs.len() as f64;
    let mut joint = vec![0usize; bins * bins];
    let mut mx = vec![0usize; bins];
    let mut my = vec![0usize; bins];
    for (&a, &b) in bx.iter().zip(&by) {
        joint[a * bins + b] += 1;
        mx[a] += 1;
        my[b] += 1;
    }
    let hx = entropy(mx.iter().copied(), n);
    let hy = entropy(my.iter().copied(), n);
    if hx == 0.0 || hy == 0.0 {
        return Ok(if hx == 0.0 && hy == 0.0 { 1.0 } else { 0.0 });
    }
    let mut mi = 0.0;
    for a in 0..bins {
        for b in 0..bins {
            let c = joint[a * bins + b];
            if c > 0 {
                let pxy = c as f64 / n;
                mi += pxy * (pxy * n * n / (mx[a] as f64 * my[b] as f64)).ln();
            }
        }
    }
    let denom = match normalizer {
        NmiNormalizer::Max => hx.max(hy),
        NmiNormalizer::Min => hx.min(hy),
        NmiNormalizer::Mean => 0.5 * (hx + hy),
        NmiNormalizer::Sqrt => (hx * hy).sqrt(),
    };
    Ok((mi / denom).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::FeatureKind;
    use rand::Rng;

    fn dist(id: &str, samples: Vec<f64>) -> FeatureDistribution {
        FeatureDistribution::new(id, FeatureKind::EdgeCurvature, samples).unwrap()
    }

    #[test]
    fn mmd_identical_samples() {
        let x = dist("x", (0..30).map(|i| (i as f64).sin()).collect());
        let out = mmd_test(&x, &x.clone(), 100, 1).unwrap();
        assert!(out.mmd2 <= 1e-12);
        assert!(out.p_value > 0.5);
    }

    #[test]
    fn mmd_separated_constants() {
        let x = dist("x", vec![0.0; 50]);
        let y = dist("y", vec![1.0; 50]);
        let out = mmd_test(&x, &y, 200, 7).unwrap();
        assert_eq!(out.p_value, 1.0 / 201.0);
        assert_eq!(out.gamma, 1.0);
        assert_eq!(out, mmd_test(&x, &y, 200, 7).unwrap());
    }

    #[test]
    fn mmd_rejects_tiny_samples() {
        let x = dist("x", vec![0.0]);
        let y = dist("y", vec![1.0, 2.0]);
        assert!(mmd_test(&x, &y, 10, 0).is_err());
        assert!(mmd_test(&y, &y, 0, 0).is_err());
    }

    #[test]
    fn bonferroni() {
        assert_eq!(bonferroni_adjust(&[0.01]), [0.01]);
        assert_eq!(bonferroni_adjust(&[0.01, 0.5]), [0.02, 1.0]);
        let h = 4;
        let adj = bonferroni_adjust(&vec![0.05 / h as f64; h]);
        assert!(adj.iter().all(|&p| (p - 0.05).abs() < 1e-15));
    }

    #[test]
    fn wcc_fixtures() {
        let same: Vec<FeatureDistribution> = (0..4).map(|i| dist(&i.to_string(), vec![0.0, 1.0])).collect();
        assert_eq!(wcc(&[0, 1, 0, 2], &same).unwrap(), 0.0);
        assert_eq!(wcc(&[0, 0], &same[..2]).unwrap(), 0.0);

        let mut groups = vec![
            dist("a", vec![0.0]),
            dist("b", vec![0.0]),
            dist("c", vec![1.0]),
            dist("d", vec![1.0]),
        ];
        assert_eq!(wcc(&[0, 0, 1, 1], &groups).unwrap(), 0.0);
        groups[0] = dist("a", vec![0.25]);
        // ω(X) = 0.25, ω(X, Y) = (0.75 + 1 + 0.75 + 1) / 4 = 0.875
        let v = wcc(&[0, 0, 1, 1], &groups).unwrap();
        assert!((v - 0.25 / (1.0 + 1.75)).abs() < 1e-12);
        assert_eq!(v, wcc(&[5, 5, 2, 2], &groups).unwrap());
    }

    #[test]
    fn nmi_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..500).map(|_| rng.random()).collect();
        let ys: Vec<f64> = (0..500).map(|_| rng.random()).collect();
        assert!((nmi(&xs, &xs, 10, NmiNormalizer::Max).unwrap() - 1.0).abs() < 1e-12);
        assert!(nmi(&xs, &ys, 5, NmiNormalizer::Max).unwrap() < 0.05);
        let (a, b) = (
            nmi(&xs, &ys, 8, NmiNormalizer::Sqrt).unwrap(),
            nmi(&ys, &xs, 8, NmiNormalizer::Sqrt).unwrap(),
        );
        assert!((a - b).abs() < 1e-15);
        let c = vec![2.0; 10];
        let v: Vec<f64> = (0..10).map(f64::from).collect();
        assert_eq!(nmi(&c, &c, 4, NmiNormalizer::Max).unwrap(), 1.0);
        assert_eq!(nmi(&c, &v, 4, NmiNormalizer::Max).unwrap(), 0.0);
        assert!(nmi(&c, &v[..3], 4, NmiNormalizer::Max).is_err());
    }

    #[test]
    fn normalizers_order() {
        let xs: Vec<f64> = (0..40).map(|i| (i % 7) as f64).collect();
        let ys: Vec<f64> = (0..40).map(|i| (i % 3) as f64).collect();
        let get = |n| nmi(&xs, &ys, 6, n).unwrap();
        assert!(get(NmiNormalizer::Max) <= get(NmiNormalizer::Sqrt) + 1e-15);
        assert!(get(NmiNormalizer::Mean) <= get(NmiNormalizer::Min) + 1e-15);
    }
}
