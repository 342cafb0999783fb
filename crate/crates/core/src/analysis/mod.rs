//! Statistics over collections of hypergraphs represented by feature
//! distributions: kernels, kernel PCA, spectral clustering, permutation
//! MMD tests, the Wasserstein clustering coefficient and normalized
//! mutual information.

mod cluster;
mod kernels;
mod stats;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureResult;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub use cluster::{kpca_embed, spectral_cluster};
pub use kernels::{
    expw_kernel_matrix, quantile_vector, rbf_kernel_matrix, KernelKind, KernelMatrix, DEFAULT_QUANTILES,
};
pub use stats::{bonferroni_adjust, mmd_test, nmi, wcc, w1_matrix, MmdOutcome, NmiNormalizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    EdgeCurvature,
    DirectionalCurvature,
    NodeCurvatureEdges,
    NodeCurvatureNeighborhood,
    EdgeCardinality,
    EdgeNeighborhoodSize,
    NodeDegree,
    NodeNeighborhoodSize,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 8] = [
        Self::EdgeCurvature,
        Self::DirectionalCurvature,
        Self::NodeCurvatureEdges,
        Self::NodeCurvatureNeighborhood,
        Self::EdgeCardinality,
        Self::EdgeNeighborhoodSize,
        Self::NodeDegree,
        Self::NodeNeighborhoodSize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::EdgeCurvature => "edge_curvature",
            Self::DirectionalCurvature => "directional_curvature",
            Self::NodeCurvatureEdges => "node_curvature_edges",
            Self::NodeCurvatureNeighborhood => "node_curvature_neighborhood",
            Self::EdgeCardinality => "edge_cardinality",
            Self::EdgeNeighborhoodSize => "edge_neighborhood_size",
            Self::NodeDegree => "node_degree",
            Self::NodeNeighborhoodSize => "node_neighborhood_size",
        }
    }

    pub fn is_curvature(self) -> bool {
        matches!(
            self,
            Self::EdgeCurvature | Self::DirectionalCurvature | Self::NodeCurvatureEdges | Self::NodeCurvatureNeighborhood
        )
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown feature '{s}'"))
    }
}

/// What a feature distribution is read from.
#[derive(Debug, Clone, Copy)]
pub enum FeatureSource<'a> {
    Hypergraph(&'a Hypergraph),
    Curvature(&'a CurvatureResult),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDistribution {
    pub source_id: String,
    pub feature_kind: FeatureKind,
    pub samples: Vec<f64>,
}

impl FeatureDistribution {
    pub fn new(source_id: impl Into<String>, feature_kind: FeatureKind, samples: Vec<f64>) -> Result<Self> {
        let samples: Vec<f64> = samples.into_iter().filter(|v| v.is_finite()).collect();
        if samples.is_empty() {
            return Err(Error::EmptyFeature);
        }
        Ok(Self {
            source_id: source_id.into(),
            feature_kind,
            samples,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Flattens one feature into a sample list: one value per edge, within-edge
/// pair or node. Undefined values (singleton edges, isolated nodes) are
/// dropped. Curvature features need a [`FeatureSource::Curvature`] in which
/// they were computed; structural ones need the hypergraph.
pub fn feature_distribution(
    source_id: impl Into<String>,
    source: FeatureSource<'_>,
    kind: FeatureKind,
) -> Result<FeatureDistribution> {
    let missing = |what: &str| Error::Unsupported(format!("feature {kind} needs {what}"));
    let samples: Vec<f64> = match (source, kind) {
        (FeatureSource::Curvature(r), FeatureKind::EdgeCurvature) => flatten(r.edge_curvatures.as_deref())
            .ok_or_else(|| missing("edge curvatures"))?,
        (FeatureSource::Curvature(r), FeatureKind::DirectionalCurvature) => r
            .directional
            .as_ref()
            .map(|d| d.iter().map(|t| t.2).collect())
            .ok_or_else(|| missing("directional curvatures"))?,
        (FeatureSource::Curvature(r), FeatureKind::NodeCurvatureEdges) => {
            flatten(r.node_edges.as_deref()).ok_or_else(|| missing("edge-averaged node curvatures"))?
        }
        (FeatureSource::Curvature(r), FeatureKind::NodeCurvatureNeighborhood) => flatten(r.node_neighborhood.as_deref())
            .ok_or_else(|| missing("direction-averaged node curvatures"))?,
        (FeatureSource::Hypergraph(h), FeatureKind::EdgeCardinality) => {
            h.edges().iter().map(|e| e.len() as f64).collect()
        }
        (FeatureSource::Hypergraph(h), FeatureKind::EdgeNeighborhoodSize) => (0..h.edge_count())
            .map(|e| h.edge_neighborhood(e).len() as f64)
            .collect(),
        (FeatureSource::Hypergraph(h), FeatureKind::NodeDegree) => {
            (0..h.node_count()).map(|i| h.degree(i) as f64).collect()
        }
        (FeatureSource::Hypergraph(h), FeatureKind::NodeNeighborhoodSize) => {
            (0..h.node_count()).map(|i| h.neighbors(i).len() as f64).collect()
        }
        (FeatureSource::Hypergraph(_), _) => return Err(missing("a curvature result")),
        (FeatureSource::Curvature(_), _) => return Err(missing("the hypergraph")),
    };
    FeatureDistribution::new(source_id, kind, samples)
}

fn flatten(values: Option<&[Option<f64>]>) -> Option<Vec<f64>> {
    values.map(|v| v.iter().flatten().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{all_curvatures, Aggregator, CurvatureConfig, Selection};
    use crate::hypergraph::parse_hypergraph;
    use crate::measures::MeasureKind;

    #[test]
    fn structural_features() {
        let h = parse_hypergraph("a b\na b c").unwrap();
        let f = feature_distribution("x", FeatureSource::Hypergraph(&h), FeatureKind::EdgeCardinality).unwrap();
        assert_eq!(f.samples, [2.0, 3.0]);
        let k3 = parse_hypergraph("a b\nb c\nc a").unwrap();
        let f = feature_distribution("k3", FeatureSource::Hypergraph(&k3), FeatureKind::NodeDegree).unwrap();
        assert_eq!(f.samples, [2.0, 2.0, 2.0]);
        let f = feature_distribution("k3", FeatureSource::Hypergraph(&k3), FeatureKind::EdgeNeighborhoodSize).unwrap();
        assert_eq!(f.samples, [2.0, 2.0, 2.0]);
    }

    #[test]
    fn curvature_features() {
        let k3 = parse_hypergraph("a b\nb c\nc a").unwrap();
        let cfg = CurvatureConfig::new(MeasureKind::EqualNodes, Aggregator::Mean, 0.0);
        let r = all_curvatures(&k3, cfg, Selection::all()).unwrap();
        let f = feature_distribution("k3", FeatureSource::Curvature(&r), FeatureKind::EdgeCurvature).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.samples.iter().all(|&k| (k - 0.5).abs() < 1e-12));
        assert!(feature_distribution("k3", FeatureSource::Curvature(&r), FeatureKind::NodeDegree).is_err());
        assert!(feature_distribution("k3", FeatureSource::Hypergraph(&k3), FeatureKind::EdgeCurvature).is_err());
    }

    #[test]
    fn nulls_dropped_and_empty_rejected() {
        let h = parse_hypergraph("a\nb").unwrap();
        let cfg = CurvatureConfig::new(MeasureKind::EqualNodes, Aggregator::Mean, 1.0);
        let r = all_curvatures(&h, cfg, Selection::all()).unwrap();
        assert_eq!(
            feature_distribution("s", FeatureSource::Curvature(&r), FeatureKind::EdgeCurvature),
            Err(Error::EmptyFeature)
        );
    }

    #[test]
    fn kind_names_round_trip() {
        for k in FeatureKind::ALL {
            assert_eq!(k.name().parse::<FeatureKind>().unwrap(), k);
            assert_eq!(serde_json::to_value(k).unwrap(), k.name());
        }
    }
}
