use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::KernelMatrix;
use crate::error::{Error, Result};

const KMEANS_RESTARTS: usize = 10;
const KMEANS_MAX_ITER: usize = 300;

/// Eigenpairs sorted by decreasing eigenvalue.
fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<DVector<f64>>>());
    (values, vectors)
}

fn fix_sign(v: &mut DVector<f64>) {
    let lead = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if lead < 0.0 {
        v.neg_mut();
    }
}

/// Kernel PCA: double-centre `K`, keep the top `dims` eigenvectors scaled by
/// the square root of their (clipped) eigenvalues. One row per source.
pub fn kpca_embed(k: &KernelMatrix, dims: usize) -> Result<Vec<Vec<f64>>> {
    let n = k.values.nrows();
    if dims > n {
        return Err(Error::Shape(format!("{dims} dimensions requested for {n} sources")));
    }
    let row_means = k.values.row_mean();
    let col_means = k.values.column_mean();
    let grand = k.values.mean();
    let centred = DMatrix::from_fn(n, n, |i, j| k.values[(i, j)] - col_means[i] - row_means[j] + grand);
    let centred = (&centred + centred.transpose()) * 0.5;
    let (values, vectors) = sorted_eigen(centred);
    let mut coords = vec![vec![0.0; dims]; n];
    for d in 0..dims {
        let lambda = values[d].max(0.0);
        let mut v = vectors.column(d).into_owned();
        fix_sign(&mut v);
        let scale = lambda.sqrt();
        for (i, row) in coords.iter_mut().enumerate() {
            row[d] = v[i] * scale;
        }
    }
    Ok(coords)
}

/// Normalized spectral clustering: negatives of `K` are clipped, the top
/// `k` eigenvectors of `D^{-1/2} K D^{-1/2}` are row-normalized and fed to
/// seeded k-means++ with restarts. Labels are numbered by first appearance.
pub fn spectral_cluster(kernel: &KernelMatrix, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = kernel.values.nrows();
    if k < 2 || k > n {
        return Err(Error::Shape(format!("cluster count {k} outside 2..={n}")));
    }
    let a = kernel.values.map(|v| v.max(0.0));
    let inv_sqrt: Vec<f64> = a
        .row_iter()
        .map(|r| {
            let d = r.sum();
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let m = DMatrix::from_fn(n, n, |i, j| a[(i, j)] * inv_sqrt[i] * inv_sqrt[j]);
    let m = (&m + m.transpose()) * 0.5;
    let (_, vectors) = sorted_eigen(m);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let row: Vec<f64> = (0..k).map(|c| vectors[(i, c)]).collect();
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter().map(|x| x / norm).collect()
            } else {
                row
            }
        })
        .collect();
    Ok(canonical(&kmeans(&points, k, seed)))
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Best of [`KMEANS_RESTARTS`] Lloyd runs from k-means++ seeds.
pub(crate) fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..KMEANS_RESTARTS {
        let (inertia, labels) = lloyd(points, plus_plus(points, k, &mut rng));
        if best.as_ref().is_none_or(|(b, _)| inertia < *b) {
            best = Some((inertia, labels));
        }
    }
    best.unwrap().1
}

fn plus_plus(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centres = vec![points[rng.random_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centres[0])).collect();
    while centres.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut idx = d2.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    idx = i;
                    break;
                }
                target -= w;
            }
            idx
        } else {
            rng.random_range(0..points.len())
        };
        centres.push(points[pick].clone());
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &centres[centres.len() - 1]));
        }
    }
    centres
}

fn lloyd(points: &[Vec<f64>], mut centres: Vec<Vec<f64>>) -> (f64, Vec<usize>) {
    let dim = points[0].len();
    let assign = |centres: &[Vec<f64>]| -> Vec<usize> {
        points
            .iter()
            .map(|p| {
                (0..centres.len())
                    .min_by(|&a, &b| sq_dist(p, &centres[a]).total_cmp(&sq_dist(p, &centres[b])))
                    .unwrap()
            })
            .collect()
    };
    let mut labels = assign(&centres);
    for _ in 0..KMEANS_MAX_ITER {
        for (c, centre) in centres.iter_mut().enumerate() {
            let members: Vec<&Vec<f64>> = points.iter().zip(&labels).filter(|(_, &l)| l == c).map(|(p, _)| p).collect();
            // an emptied cluster keeps its old centre
            if !members.is_empty() {
                *centre = (0..dim)
                    .map(|d| members.iter().map(|p| p[d]).sum::<f64>() / members.len() as f64)
                    .collect();
            }
        }
        let next = assign(&centres);
        if next == labels {
            break;
        }
        labels = next;
    }
    let inertia = points.iter().zip(&labels).map(|(p, &l)| sq_dist(p, &centres[l])).sum();
    (inertia, labels)
}

fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::KernelKind;

    fn kernel(values: DMatrix<f64>) -> KernelMatrix {
        KernelMatrix {
            ids: (0..values.nrows()).map(|i| i.to_string()).collect(),
            values,
            kind: KernelKind::Rbf,
            gamma: 1.0,
        }
    }

    #[test]
    fn identical_sources_embed_at_origin() {
        let coords = kpca_embed(&kernel(DMatrix::from_element(4, 4, 1.0)), 2).unwrap();
        assert!(coords.iter().flatten().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn two_sources_are_symmetric() {
        let k = kernel(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 1.0]));
        let c = kpca_embed(&k, 1).unwrap();
        assert!((c[0][0] + c[1][0]).abs() < 1e-12);
        assert!(c[0][0].abs() > 0.1);
        assert!(kpca_embed(&k, 3).is_err());
    }

    #[test]
    fn kpca_reconstructs_centred_kernel() {
        let x = DMatrix::from_fn(6, 3, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + 0.1 * i as f64);
        let k = kernel(&x * x.transpose());
        let n = 6;
        let coords = kpca_embed(&k, n).unwrap();
        let h = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
        let centred = &h * &k.values * &h;
        let recon = DMatrix::from_fn(n, n, |i, j| (0..n).map(|d| coords[i][d] * coords[j][d]).sum::<f64>());
        assert!((recon - centred).abs().max() < 1e-8);
    }

    #[test]
    fn block_recovery() {
        let labels_in = [0, 0, 1, 1, 0, 1];
        let k = kernel(DMatrix::from_fn(6, 6, |i, j| {
            if labels_in[i] == labels_in[j] {
                1.0
            } else {
                0.0
            }
        }));
        assert_eq!(spectral_cluster(&k, 2, 3).unwrap(), labels_in);
    }

    #[test]
    fn singleton_clusters() {
        let k = kernel(DMatrix::from_fn(4, 4, |i, j| (-((i as f64 - j as f64).powi(2))).exp()));
        let labels = spectral_cluster(&k, 4, 0).unwrap();
        assert_eq!(labels, [0, 1, 2, 3]);
        assert_eq!(labels, spectral_cluster(&k, 4, 0).unwrap());
    }
}
