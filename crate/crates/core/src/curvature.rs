//! Ollivier-Ricci curvature for hypergraphs.
//!
//! A curvature notion is fixed by a [`CurvatureConfig`]: which random-walk
//! measure to attach to nodes, how to aggregate the Wasserstein distances
//! between the measures of an edge's nodes, and the laziness `alpha`.
//!
//! * directional: `κ(i, j) = 1 - W1(μ_i, μ_j) / d(i, j)`
//! * edge, [`Aggregator::Mean`]: one minus the mean pairwise `W1` over `e`
//! * edge, [`Aggregator::Barycenter`]: `1 - Σ_{i∈e} W1(μ_i, μ̄) / (|e| - 1)`
//!   where `μ̄` is the Wasserstein barycenter of the measures in `e`
//! * edge, [`Aggregator::Max`]: one minus the largest pairwise `W1`
//! * node: the mean over incident edges (`κ^E`) or over neighbors (`κ^N`)
//! * subset: one minus the aggregate divided by the subset's extent

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::measures::{measure_matrix, MeasureKind, MeasureMatrix, SparseMeasure};
use crate::transport::{self, wasserstein1, LocalDistances, SupportMode};

/// Edges larger than this, or barycenter candidate sets larger than
/// [`BARYCENTER_BALL_WARN`], trigger a performance warning.
pub const BARYCENTER_EDGE_WARN: usize = 8;
pub const BARYCENTER_BALL_WARN: usize = 200;

/// Entry budget of one shared distance table (bytes).
const LOCAL_TABLE_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Aggregator {
    #[serde(rename = "mean")]
    Mean,
    #[serde(rename = "barycenter")]
    Barycenter,
    #[serde(rename = "max")]
    Max,
}

impl Aggregator {
    pub const ALL: [Aggregator; 3] = [Self::Mean, Self::Barycenter, Self::Max];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mean => "mean",
            Self::Barycenter => "barycenter",
            Self::Max => "max",
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Aggregator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "mean" => Ok(Self::Mean),
            "b" | "bary" | "barycenter" => Ok(Self::Barycenter),
            "m" | "max" => Ok(Self::Max),
            other => Err(format!("unknown aggregator '{other}' (expected mean, barycenter or max)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureConfig {
    pub measure: MeasureKind,
    #[serde(rename = "agg")]
    pub aggregator: Aggregator,
    pub alpha: f64,
}

impl CurvatureConfig {
    pub fn new(measure: MeasureKind, aggregator: Aggregator, alpha: f64) -> Self {
        Self {
            measure,
            aggregator,
            alpha,
        }
    }
}

impl fmt::Display for CurvatureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/α={}", self.measure, self.aggregator, self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CurvatureOptions {
    /// Divide the edge-averaged node curvature by the full degree, counting
    /// singleton edges whose curvature is undefined.
    pub strict_degree_denominator: bool,
    pub barycenter_support: SupportMode,
}

/// Which curvature families [`all_curvatures`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Selection {
    pub edges: bool,
    pub directional: bool,
    pub node_edges: bool,
    pub node_neighborhood: bool,
}

impl Selection {
    pub fn all() -> Self {
        Self {
            edges: true,
            directional: true,
            node_edges: true,
            node_neighborhood: true,
        }
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        !(self.edges || self.directional || self.node_edges || self.node_neighborhood)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureResult {
    pub config: CurvatureConfig,
    pub node_labels: Vec<String>,
    /// κ(e) per edge; `None` for singleton edges.
    pub edge_curvatures: Option<Vec<Option<f64>>>,
    /// κ(i, j) for every within-edge pair, `i < j`, sorted.
    pub directional: Option<Vec<(usize, usize, f64)>>,
    pub node_edges: Option<Vec<Option<f64>>>,
    pub node_neighborhood: Option<Vec<Option<f64>>>,
}

impl CurvatureResult {
    /// JSON document with the field names `config`, `edge_curvature`,
    /// `directional`, `node_curvature_edges` and
    /// `node_curvature_neighborhood`; families not computed are omitted.
    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert(
            "config".into(),
            json!({
                "measure": self.config.measure.short_name(),
                "agg": self.config.aggregator.name(),
                "alpha": self.config.alpha,
            }),
        );
        if let Some(edges) = &self.edge_curvatures {
            doc.insert("edge_curvature".into(), json!(edges));
        }
        if let Some(dir) = &self.directional {
            let rows: Vec<Value> = dir.iter().map(|&(i, j, v)| json!([i, j, v])).collect();
            doc.insert("directional".into(), Value::Array(rows));
        }
        let node_map = |values: &[Option<f64>]| {
            let mut m = Map::new();
            for (label, v) in self.node_labels.iter().zip(values) {
                m.insert(label.clone(), json!(v));
            }
            Value::Object(m)
        };
        if let Some(v) = &self.node_edges {
            doc.insert("node_curvature_edges".into(), node_map(v));
        }
        if let Some(v) = &self.node_neighborhood {
            doc.insert("node_curvature_neighborhood".into(), node_map(v));
        }
        Value::Object(doc)
    }

    /// Flat table with columns `family,a,b,value`. Edges are keyed by index
    /// in `a`, directional pairs by both node labels, node curvatures by the
    /// label in `a`. Undefined values are left empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut row = |fields: [&str; 4]| w.write_record(fields).expect("writing to memory");
        row(["family", "a", "b", "value"]);
        if let Some(edges) = &self.edge_curvatures {
            for (e, v) in edges.iter().enumerate() {
                row(["edge", &e.to_string(), "", &fmt(*v)]);
            }
        }
        if let Some(dir) = &self.directional {
            for &(i, j, v) in dir {
                row(["directional", &self.node_labels[i], &self.node_labels[j], &fmt(Some(v))]);
            }
        }
        for (family, values) in [("node_edges", &self.node_edges), ("node_neighborhood", &self.node_neighborhood)] {
            if let Some(values) = values {
                for (label, v) in self.node_labels.iter().zip(values) {
                    row([family, label, "", &fmt(*v)]);
                }
            }
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("utf-8 fields")
    }

    /// Inverse of [`CurvatureResult::to_json`]. Node labels are recovered
    /// from whichever node map is present.
    pub fn from_json(doc: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Shape(format!("curvature document: {what}"));
        let config: CurvatureConfig =
            serde_json::from_value(doc.get("config").cloned().ok_or_else(|| bad("missing config"))?)
                .map_err(|e| bad(&e.to_string()))?;
        let edge_curvatures = match doc.get("edge_curvature") {
            Some(v) => Some(serde_json::from_value(v.clone()).map_err(|e| bad(&e.to_string()))?),
            None => None,
        };
        let directional = match doc.get("directional") {
            Some(v) => Some(serde_json::from_value(v.clone()).map_err(|e| bad(&e.to_string()))?),
            None => None,
        };
        let mut node_labels = Vec::new();
        let mut read_map = |key: &str| -> Result<Option<Vec<Option<f64>>>> {
            let Some(obj) = doc.get(key) else {
                return Ok(None);
            };
            let obj = obj.as_object().ok_or_else(|| bad("node map is not an object"))?;
            if node_labels.is_empty() {
                node_labels = obj.keys().cloned().collect();
            }
            let values = obj.values().map(Value::as_f64).collect();
            Ok(Some(values))
        };
        let node_edges = read_map("node_curvature_edges")?;
        let node_neighborhood = read_map("node_curvature_neighborhood")?;
        Ok(Self {
            config,
            node_labels,
            edge_curvatures,
            directional,
            node_edges,
            node_neighborhood,
        })
    }
}

/// Analytic sandwich around an edge curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Curvature evaluator bound to one hypergraph and configuration. Pairwise
/// `W1` values are memoised, so mixing edge, node and directional queries
/// solves each node pair once.
pub struct Curvature<'h> {
    h: &'h Hypergraph,
    cfg: CurvatureConfig,
    opts: CurvatureOptions,
    measures: MeasureMatrix,
    memo: Mutex<HashMap<(usize, usize), f64>>,
    diameter: OnceLock<Option<usize>>,
}

impl<'h> Curvature<'h> {
    pub fn new(h: &'h Hypergraph, cfg: CurvatureConfig) -> Result<Self> {
        Self::with_options(h, cfg, CurvatureOptions::default())
    }

    pub fn with_options(h: &'h Hypergraph, cfg: CurvatureConfig, opts: CurvatureOptions) -> Result<Self> {
        let measures = measure_matrix(h, cfg.measure, cfg.alpha)?;
        Ok(Self {
            h,
            cfg,
            opts,
            measures,
            memo: Mutex::new(HashMap::new()),
            diameter: OnceLock::new(),
        })
    }

    pub fn config(&self) -> CurvatureConfig {
        self.cfg
    }

    pub fn measures(&self) -> &MeasureMatrix {
        &self.measures
    }

    pub fn measure(&self, i: usize) -> Result<&SparseMeasure> {
        self.measures.row(i)
    }

    /// `W1(μ_i, μ_j)`, memoised by unordered pair.
    pub fn pair_distance(&self, i: usize, j: usize) -> Result<f64> {
        let key = (i.min(j), i.max(j));
        if let Some(&w) = self.memo.lock().unwrap().get(&key) {
            return Ok(w);
        }
        let w = self.solve_pair(key.0, key.1)?;
        self.memo.lock().unwrap().insert(key, w);
        Ok(w)
    }

    fn solve_pair(&self, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Ok(0.0);
        }
        let (mi, mj) = (self.measures.row(i)?, self.measures.row(j)?);
        Ok(wasserstein1(self.h, mi, mj)?.cost)
    }

    /// Solves sorted within-edge pairs grouped by their first node, which
    /// shares one distance table across the group.
    fn solve_pairs(&self, pairs: &[(usize, usize)]) -> Result<Vec<f64>> {
        let mut groups: Vec<&[(usize, usize)]> = pairs.chunk_by(|a, b| a.0 == b.0).collect();
        // hubs first so the slowest groups start early
        groups.sort_by_key(|g| std::cmp::Reverse(g.len()));
        let mut solved: Vec<(usize, usize, f64)> = groups
            .par_iter()
            .map(|group| -> Result<Vec<(usize, usize, f64)>> {
                let i = group[0].0;
                let mi = self.measures.row(i)?;
                let table = if group.len() > 1 {
                    LocalDistances::new(self.h, i, LOCAL_TABLE_LIMIT)?
                } else {
                    None
                };
                group
                    .iter()
                    .map(|&(_, j)| {
                        let mj = self.measures.row(j)?;
                        let w = match &table {
                            Some(t) => transport::wasserstein1_local(self.h, t, mi, mj)?.cost,
                            None => wasserstein1(self.h, mi, mj)?.cost,
                        };
                        Ok((i, j, w))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        solved.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        Ok(solved.into_iter().map(|t| t.2).collect())
    }

    pub fn directional(&self, i: usize, j: usize) -> Result<f64> {
        self.h.check_node(i)?;
        self.h.check_node(j)?;
        if i == j {
            return Err(Error::Unsupported("directional curvature needs two distinct nodes".into()));
        }
        let d = self.h.distance(i, j).ok_or(Error::InfiniteDistance(i, j))?;
        Ok(1.0 - self.pair_distance(i, j)? / d as f64)
    }

    /// Aggregated transport cost over a node set with at least two members.
    fn aggregate(&self, nodes: &[usize]) -> Result<f64> {
        match self.cfg.aggregator {
            Aggregator::Mean | Aggregator::Max => {
                let mut values = Vec::with_capacity(nodes.len() * (nodes.len() - 1) / 2);
                for (a, &i) in nodes.iter().enumerate() {
                    for &j in &nodes[a + 1..] {
                        values.push(self.pair_distance(i, j)?);
                    }
                }
                Ok(aggregate_pairs(self.cfg.aggregator, &values))
            }
            Aggregator::Barycenter => {
                let inputs: Vec<SparseMeasure> = nodes
                    .iter()
                    .map(|&i| self.measures.row(i).cloned())
                    .collect::<Result<_>>()?;
                if nodes.len() > BARYCENTER_EDGE_WARN
                    || transport::candidate_support(self.h, &inputs, self.opts.barycenter_support).len() > BARYCENTER_BALL_WARN
                {
                    log::warn!(
                        "barycenter over {} nodes exceeds desk scale; expect slow solves",
                        nodes.len()
                    );
                }
                let bary = transport::wasserstein_barycenter(self.h, &inputs, self.opts.barycenter_support)?;
                let n = nodes.len() as f64;
                Ok(bary.mean_distance * n / (n - 1.0))
            }
        }
    }

    /// κ(e), or `None` for a singleton edge.
    pub fn edge(&self, e: usize) -> Result<Option<f64>> {
        self.h.check_edge(e)?;
        let nodes = self.h.edge(e);
        if nodes.len() < 2 {
            return Ok(None);
        }
        Ok(Some(1.0 - self.aggregate(nodes)?))
    }

    /// Mean curvature of the non-singleton edges containing `i`; `None` when
    /// there are none.
    pub fn node_edges(&self, i: usize) -> Result<Option<f64>> {
        self.h.check_node(i)?;
        let mut sum = 0.0;
        let mut count = 0usize;
        for &e in self.h.incident_edges(i) {
            if let Some(k) = self.edge(e)? {
                sum += k;
                count += 1;
            }
        }
        Ok(node_edge_mean(sum, count, self.h.degree(i), self.opts.strict_degree_denominator))
    }

    /// Mean directional curvature towards each neighbor; `None` for nodes
    /// without neighbors.
    pub fn node_neighborhood(&self, i: usize) -> Result<Option<f64>> {
        self.h.check_node(i)?;
        let nb = self.h.neighbors(i);
        if nb.is_empty() {
            return Ok(None);
        }
        let mut sum = 0.0;
        for &j in nb {
            sum += 1.0 - self.pair_distance(i, j)?;
        }
        Ok(Some(sum / nb.len() as f64))
    }

    /// `κ(s) = 1 - Agg(s) / dist(s)` where `dist(s)` is the largest hop
    /// distance inside `s`.
    pub fn subset(&self, s: &[usize]) -> Result<f64> {
        let mut nodes = s.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        for &v in &nodes {
            self.h.check_node(v)?;
        }
        if nodes.len() < 2 {
            return Err(Error::Unsupported("subset curvature needs at least two nodes".into()));
        }
        let mut extent = 0;
        for (a, &i) in nodes.iter().enumerate() {
            let dist = self.h.bfs(i, None);
            for &j in &nodes[a + 1..] {
                extent = extent.max(dist[j].ok_or(Error::InfiniteDistance(i, j))?);
            }
        }
        Ok(1.0 - self.aggregate(&nodes)? / extent as f64)
    }

    fn diameter(&self) -> Option<usize> {
        *self.diameter.get_or_init(|| {
            if self.h.component_count() == 1 {
                self.h.diameter()
            } else {
                None
            }
        })
    }

    /// Total-variation sandwich for Mean and Max edge curvatures:
    /// `d_min · TV ≤ W1 ≤ diam · TV` applied to every pair of `e`.
    pub fn bounds(&self, e: usize) -> Result<CurvatureBounds> {
        self.h.check_edge(e)?;
        if self.cfg.aggregator == Aggregator::Barycenter {
            return Err(Error::Unsupported("no curvature bounds for the barycenter aggregator".into()));
        }
        let nodes = self.h.edge(e);
        if nodes.len() < 2 {
            return Err(Error::Unsupported("singleton edges have no curvature".into()));
        }
        let diam = self.diameter().ok_or(Error::DiameterUnavailable)? as f64;
        // an edge with two nodes puts the smallest nonzero distance at 1
        let d_min = 1.0;
        let mut tvs = Vec::new();
        for (a, &i) in nodes.iter().enumerate() {
            for &j in &nodes[a + 1..] {
                tvs.push(self.measures.row(i)?.total_variation(self.measures.row(j)?));
            }
        }
        let spread = aggregate_pairs(self.cfg.aggregator, &tvs);
        Ok(CurvatureBounds {
            lower: 1.0 - diam * spread,
            upper: 1.0 - d_min * spread,
        })
    }

    /// Batch evaluation of the selected families. Pairwise distances are
    /// solved once each, in parallel, and assembled in index order.
    pub fn all(&self, which: Selection) -> Result<CurvatureResult> {
        let h = self.h;
        let needs_pairs = which.directional
            || which.node_neighborhood
            || ((which.edges || which.node_edges) && self.cfg.aggregator != Aggregator::Barycenter);
        let pairs = if needs_pairs { within_edge_pairs(h) } else { Vec::new() };
        let solved = self.solve_pairs(&pairs)?;
        {
            let mut memo = self.memo.lock().unwrap();
            memo.extend(pairs.iter().copied().zip(solved.iter().copied()));
        }

        let edge_values: Option<Vec<Option<f64>>> = if which.edges || which.node_edges {
            Some(
                (0..h.edge_count())
                    .into_par_iter()
                    .map(|e| self.edge(e))
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };

        let node_edges = if which.node_edges {
            let ev = edge_values.as_ref().unwrap();
            Some(
                (0..h.node_count())
                    .map(|i| {
                        let (sum, count) = h
                            .incident_edges(i)
                            .iter()
                            .filter_map(|&e| ev[e])
                            .fold((0.0, 0usize), |(s, c), k| (s + k, c + 1));
                        node_edge_mean(sum, count, h.degree(i), self.opts.strict_degree_denominator)
                    })
                    .collect(),
            )
        } else {
            None
        };

        let node_neighborhood = if which.node_neighborhood {
            Some(
                (0..h.node_count())
                    .map(|i| self.node_neighborhood(i))
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };

        let directional = which.directional.then(|| {
            pairs
                .iter()
                .zip(&solved)
                .map(|(&(i, j), &w)| (i, j, 1.0 - w))
                .collect()
        });

        Ok(CurvatureResult {
            config: self.cfg,
            node_labels: h.labels().to_vec(),
            edge_curvatures: if which.edges { edge_values } else { None },
            directional,
            node_edges,
            node_neighborhood,
        })
    }
}

fn aggregate_pairs(agg: Aggregator, values: &[f64]) -> f64 {
    match agg {
        Aggregator::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        _ => values.iter().sum::<f64>() / values.len() as f64,
    }
}

fn node_edge_mean(sum: f64, count: usize, degree: usize, strict: bool) -> Option<f64> {
    if count == 0 {
        return None;
    }
    let denom = if strict { degree } else { count };
    Some(sum / denom as f64)
}

/// Every unordered pair of distinct nodes sharing an edge, sorted.
pub fn within_edge_pairs(h: &Hypergraph) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..h.node_count())
        .flat_map(|i| {
            h.neighbors(i)
                .iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (i, j))
        })
        .collect();
    pairs.sort_unstable();
    pairs
}

pub fn directional_curvature(h: &Hypergraph, i: usize, j: usize, cfg: CurvatureConfig) -> Result<f64> {
    Curvature::new(h, cfg)?.directional(i, j)
}

pub fn edge_curvature(h: &Hypergraph, e: usize, cfg: CurvatureConfig) -> Result<Option<f64>> {
    Curvature::new(h, cfg)?.edge(e)
}

pub fn node_curvature_edges(h: &Hypergraph, i: usize, cfg: CurvatureConfig) -> Result<Option<f64>> {
    Curvature::new(h, cfg)?.node_edges(i)
}

pub fn node_curvature_neighborhood(h: &Hypergraph, i: usize, cfg: CurvatureConfig) -> Result<Option<f64>> {
    Curvature::new(h, cfg)?.node_neighborhood(i)
}

pub fn subset_curvature(h: &Hypergraph, s: &[usize], cfg: CurvatureConfig) -> Result<f64> {
    Curvature::new(h, cfg)?.subset(s)
}

pub fn curvature_bounds(h: &Hypergraph, e: usize, cfg: CurvatureConfig) -> Result<CurvatureBounds> {
    Curvature::new(h, cfg)?.bounds(e)
}

pub fn all_curvatures(h: &Hypergraph, cfg: CurvatureConfig, which: Selection) -> Result<CurvatureResult> {
    Curvature::new(h, cfg)?.all(which)
}
