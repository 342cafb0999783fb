//! Cluster a collection of hypergraphs by their edge-curvature
//! distributions: kernel, kernel PCA, spectral clustering and WCC.

use orchid::analysis::{
    expw_kernel_matrix, feature_distribution, kpca_embed, spectral_cluster, wcc, FeatureKind, FeatureSource,
};
use orchid::curvature::{Aggregator, Curvature, CurvatureConfig, Selection};
use orchid::generators::{gen_erdos_renyi, gen_hsbm};
use orchid::measures::MeasureKind;

fn main() -> orchid::Result<()> {
    let cfg = CurvatureConfig::new(MeasureKind::EqualNodes, Aggregator::Mean, 0.0);
    let only_edges = Selection {
        edges: true,
        ..Selection::none()
    };
    let mut dists = Vec::new();
    for seed in 0..6 {
        let planted = gen_hsbm(&[20, 20], &[20, 20], &[vec![0.25, 0.05], vec![0.05, 0.25]], seed)?.hypergraph;
        let flat = gen_erdos_renyi(40, 40, 0.15, 100 + seed)?;
        for (name, h) in [("hsbm", planted), ("er", flat)] {
            let result = Curvature::new(&h, cfg)?.all(only_edges)?;
            let id = format!("{name}{seed}");
            dists.push(feature_distribution(id, FeatureSource::Curvature(&result), FeatureKind::EdgeCurvature)?);
        }
    }

    let kernel = expw_kernel_matrix(&dists, None)?;
    println!("median-heuristic gamma {:.3}", kernel.gamma);
    let coords = kpca_embed(&kernel, 2)?;
    let labels = spectral_cluster(&kernel, 2, 0)?;
    for ((d, c), l) in dists.iter().zip(&coords).zip(&labels) {
        println!("{:>7}  cluster {l}  ({:+.3}, {:+.3})", d.source_id, c[0], c[1]);
    }
    println!("WCC {:.4}", wcc(&labels, &dists)?);
    Ok(())
}
