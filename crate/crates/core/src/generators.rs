//! Random hypergraph models and the reference constructions used as
//! curvature fixtures.
//!
//! Every random model draws from [`ChaCha8Rng`] seeded with the caller's
//! seed. Models that fill an incidence matrix give each edge (column) its
//! own stream, `set_stream(e)`, so output never depends on evaluation order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

fn spec_err(msg: impl Into<String>) -> Error {
    Error::Spec(msg.into())
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(spec_err(format!("{what} {p} is not a probability")))
    }
}

/// Output of the configuration model with the number of discarded
/// duplicate (node, edge) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationSample {
    pub hypergraph: Hypergraph,
    pub discarded: usize,
}

/// Pairs node stubs with edge slots uniformly at random. Repeated
/// (node, edge) pairs are discarded, so realized degrees never exceed the
/// requested ones; edges left empty are dropped.
pub fn gen_configuration(degrees: &[usize], cardinalities: &[usize], seed: u64) -> Result<Hypergraph> {
    gen_configuration_counted(degrees, cardinalities, seed).map(|s| s.hypergraph)
}

pub fn gen_configuration_counted(
    degrees: &[usize],
    cardinalities: &[usize],
    seed: u64,
) -> Result<ConfigurationSample> {
    let total: usize = degrees.iter().sum();
    let slots: usize = cardinalities.iter().sum();
    if total != slots {
        return Err(spec_err(format!(
            "degree sum {total} differs from cardinality sum {slots}"
        )));
    }
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    stubs.shuffle(&mut rng);

    let mut edges = Vec::with_capacity(cardinalities.len());
    let mut discarded = 0;
    let mut start = 0;
    for &c in cardinalities {
        let mut e = stubs[start..start + c].to_vec();
        start += c;
        e.sort_unstable();
        e.dedup();
        discarded += c - e.len();
        if !e.is_empty() {
            edges.push(e);
        }
    }
    Ok(ConfigurationSample {
        hypergraph: Hypergraph::from_edges(degrees.len(), edges)?,
        discarded,
    })
}

/// Fills each of the `n·m` incidence cells independently with probability
/// `p`, then drops empty edges.
pub fn gen_erdos_renyi(n: usize, m: usize, p: f64, seed: u64) -> Result<Hypergraph> {
    if n == 0 || m == 0 {
        return Err(spec_err("n and m must be positive"));
    }
    check_probability(p, "p")?;
    let edges = (0..m)
        .map(|e| {
            let mut rng = edge_rng(seed, e);
            (0..n).filter(|_| rng.random_bool(p)).collect::<Vec<_>>()
        })
        .filter(|e| !e.is_empty())
        .collect();
    Hypergraph::from_edges(n, edges)
}

fn edge_rng(seed: u64, e: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(e as u64);
    rng
}

/// HSBM sample with the planted community of every node and of every
/// retained edge.
#[derive(Debug, Clone, PartialEq)]
pub struct HsbmSample {
    pub hypergraph: Hypergraph,
    pub node_communities: Vec<usize>,
    pub edge_communities: Vec<usize>,
}

/// Nodes and edges are laid out community by community; cell `(i, e)` is
/// filled with probability `affinity[comm(i)][comm(e)]`.
pub fn gen_hsbm(
    node_sizes: &[usize],
    edge_sizes: &[usize],
    affinity: &[Vec<f64>],
    seed: u64,
) -> Result<HsbmSample> {
    if affinity.len() != node_sizes.len() || affinity.iter().any(|row| row.len() != edge_sizes.len()) {
        return Err(spec_err(format!(
            "affinity must be {} x {}",
            node_sizes.len(),
            edge_sizes.len()
        )));
    }
    for row in affinity {
        for &p in row {
            check_probability(p, "affinity entry")?;
        }
    }
    let node_comm: Vec<usize> = expand_sizes(node_sizes);
    let edge_comm: Vec<usize> = expand_sizes(edge_sizes);
    if node_comm.is_empty() {
        return Err(spec_err("no nodes"));
    }
    let mut edges = Vec::new();
    let mut kept = Vec::new();
    for (e, &ce) in edge_comm.iter().enumerate() {
        let mut rng = edge_rng(seed, e);
        let members: Vec<usize> = node_comm
            .iter()
            .enumerate()
            .filter(|&(_, &ci)| rng.random_bool(affinity[ci][ce]))
            .map(|(i, _)| i)
            .collect();
        if !members.is_empty() {
            edges.push(members);
            kept.push(ce);
        }
    }
    Ok(HsbmSample {
        hypergraph: Hypergraph::from_edges(node_comm.len(), edges)?,
        node_communities: node_comm,
        edge_communities: kept,
    })
}

fn expand_sizes(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect()
}

/// All `r`-subsets of `n` nodes in lexicographic order.
pub fn make_hyperclique(n: usize, r: usize) -> Result<Hypergraph> {
    if r == 0 || r > n {
        return Err(spec_err(format!("hyperclique needs 1 <= r <= n (r={r}, n={n})")));
    }
    let mut edges = Vec::new();
    let mut comb: Vec<usize> = (0..r).collect();
    loop {
        edges.push(comb.clone());
        let Some(pos) = (0..r).rev().find(|&p| comb[p] < n - r + p) else {
            break;
        };
        comb[pos] += 1;
        for q in pos + 1..r {
            comb[q] = comb[q - 1] + 1;
        }
    }
    Hypergraph::from_edges(n, edges)
}

/// Windows of `r` consecutive nodes on a cycle of `cycle_len` nodes; edge
/// `i` starts at node `i`.
pub fn make_hypergrid(cycle_len: usize, r: usize) -> Result<Hypergraph> {
    if r < 2 || cycle_len <= 2 * r {
        return Err(spec_err(format!(
            "hypergrid needs r >= 2 and cycle_len > 2r (r={r}, cycle_len={cycle_len})"
        )));
    }
    let edges = (0..cycle_len)
        .map(|i| (0..r).map(|o| (i + o) % cycle_len).collect())
        .collect();
    Hypergraph::from_edges(cycle_len, edges)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypertree {
    pub hypergraph: Hypergraph,
    pub central_edge: usize,
}

/// r-uniform hypertree grown from a central edge (index 0): every node
/// lies in `k` edges unless it sits on the last of `depth` edge layers.
/// Edges meet in at most one node.
pub fn make_hypertree(r: usize, k: usize, depth: usize) -> Result<Hypertree> {
    if r < 2 || k < 1 || depth < 3 {
        return Err(spec_err(format!(
            "hypertree needs r >= 2, k >= 1, depth >= 3 (r={r}, k={k}, depth={depth})"
        )));
    }
    let mut edges: Vec<Vec<usize>> = vec![(0..r).collect()];
    // nodes introduced by the previous layer, each still owed k - 1 edges
    let mut frontier: Vec<usize> = (0..r).collect();
    let mut next_node = r;
    for _ in 1..depth {
        let mut grown = Vec::new();
        for &v in &frontier {
            for _ in 1..k {
                let mut e = vec![v];
                e.extend(next_node..next_node + r - 1);
                grown.extend(next_node..next_node + r - 1);
                next_node += r - 1;
                edges.push(e);
            }
        }
        frontier = grown;
    }
    Ok(Hypertree {
        hypergraph: Hypergraph::from_edges(next_node, edges)?,
        central_edge: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Hcm {
        degrees: Vec<usize>,
        cardinalities: Vec<usize>,
    },
    Er {
        n: usize,
        m: usize,
        p: f64,
    },
    Hsbm {
        node_sizes: Vec<usize>,
        edge_sizes: Vec<usize>,
        affinity: Vec<Vec<f64>>,
    },
}

/// A random model with its parameters and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub model: Model,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Hypergraph> {
        match &self.model {
            Model::Hcm {
                degrees,
                cardinalities,
            } => gen_configuration(degrees, cardinalities, self.seed),
            Model::Er { n, m, p } => gen_erdos_renyi(*n, *m, *p, self.seed),
            Model::Hsbm {
                node_sizes,
                edge_sizes,
                affinity,
            } => gen_hsbm(node_sizes, edge_sizes, affinity, self.seed).map(|s| s.hypergraph),
        }
    }
}

/// Generates a collection, one instance per spec, in parallel. Output
/// order follows `specs`.
pub fn generate_collection(specs: &[GeneratorSpec]) -> Result<Vec<Hypergraph>> {
    specs.par_iter().map(GeneratorSpec::generate).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_forced_matching() {
        let h = gen_configuration(&[1; 5], &[1; 5], 3).unwrap();
        assert_eq!(h.edge_count(), 5);
        let mut seen: Vec<usize> = h.edges().iter().map(|e| e[0]).collect();
        seen.sort_unstable();
        assert_eq!(seen, [0, 1, 2, 3, 4]);
    }

    #[test]
    fn configuration_sum_mismatch() {
        assert!(matches!(gen_configuration(&[2, 2], &[3], 0), Err(Error::Spec(_))));
    }

    #[test]
    fn configuration_degrees_bounded() {
        let degrees = vec![5; 200];
        let cards = vec![10; 100];
        let s = gen_configuration_counted(&degrees, &cards, 11).unwrap();
        assert_eq!(s.hypergraph.incidence_count() + s.discarded, 1000);
        for v in 0..200 {
            assert!(s.hypergraph.degree(v) <= 5);
        }
        assert_eq!(s, gen_configuration_counted(&degrees, &cards, 11).unwrap());
    }

    #[test]
    fn erdos_renyi_extremes() {
        let full = gen_erdos_renyi(4, 3, 1.0, 9).unwrap();
        assert!(full.edges().iter().all(|e| e == &[0, 1, 2, 3]));
        assert_eq!(full.edge_count(), 3);
        assert_eq!(gen_erdos_renyi(4, 3, 0.0, 9).unwrap().edge_count(), 0);
        assert!(gen_erdos_renyi(4, 3, 1.5, 9).is_err());
        assert_eq!(
            gen_erdos_renyi(30, 40, 0.1, 5).unwrap(),
            gen_erdos_renyi(30, 40, 0.1, 5).unwrap()
        );
    }

    #[test]
    fn hsbm_block_diagonal() {
        let aff = vec![vec![0.5, 0.0], vec![0.0, 0.5]];
        let s = gen_hsbm(&[10, 10], &[20, 20], &aff, 1).unwrap();
        for (e, nodes) in s.hypergraph.edges().iter().enumerate() {
            let c = s.edge_communities[e];
            assert!(nodes.iter().all(|&v| s.node_communities[v] == c));
        }
        assert!(matches!(gen_hsbm(&[1], &[1, 1], &[vec![0.1]], 0), Err(Error::Spec(_))));
    }

    #[test]
    fn hsbm_complete() {
        let s = gen_hsbm(&[2, 3], &[1, 2], &[vec![1.0, 1.0], vec![1.0, 1.0]], 4).unwrap();
        assert_eq!(s.hypergraph.incidence_count(), 15);
    }

    #[test]
    fn hyperclique_counts() {
        let h = make_hyperclique(4, 2).unwrap();
        assert_eq!(h.edge_count(), 6);
        assert_eq!(h.edge(0), &[0, 1]);
        assert_eq!(h.edge(5), &[2, 3]);
        assert_eq!(make_hyperclique(7, 3).unwrap().edge_count(), 35);
        assert!(make_hyperclique(3, 4).is_err());
    }

    #[test]
    fn hypergrid_windows() {
        let h = make_hypergrid(10, 3).unwrap();
        assert!((0..10).all(|v| h.degree(v) == 3));
        assert!(h.edges().iter().all(|e| e.len() == 3));
        assert!(make_hypergrid(6, 3).is_err());
    }

    #[test]
    fn hypertree_shape() {
        let t = make_hypertree(3, 2, 3).unwrap();
        let h = &t.hypergraph;
        assert_eq!(h.edge(t.central_edge), &[0, 1, 2]);
        // 1 + 3 + 6 edges over 3 layers
        assert_eq!(h.edge_count(), 10);
        for v in 0..h.node_count() {
            assert!(h.degree(v) == 2 || h.degree(v) == 1);
        }
        for a in 0..h.edge_count() {
            for b in a + 1..h.edge_count() {
                let shared = h.edge(a).iter().filter(|v| h.edge(b).contains(v)).count();
                assert!(shared <= 1);
            }
        }
        assert_eq!(h.component_count(), 1);
        assert!(make_hypertree(3, 2, 2).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec = GeneratorSpec {
            model: Model::Er { n: 5, m: 4, p: 0.5 },
            seed: 7,
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"model":"er","n":5,"m":4,"p":0.5,"seed":7}"#);
        let back: GeneratorSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.generate().unwrap(), spec.generate().unwrap());
        let batch = generate_collection(&[spec.clone(), spec]).unwrap();
        assert_eq!(batch[0], batch[1]);
    }
}
