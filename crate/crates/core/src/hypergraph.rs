//! Multi-hypergraph storage, the edge-list text format, expansions and
//! shortest-path distances.
//!
//! A [`Hypergraph`] is immutable once built. Nodes are dense indices
//! `0..n` that map back to the string tokens they were parsed from; edges
//! are kept in input order and identical edges may repeat.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    labels: Vec<String>,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
    incidence_count: usize,
}

impl Hypergraph {
    /// Builds a hypergraph on `node_count` nodes labelled `"0"`, `"1"`, ...
    ///
    /// Duplicate nodes inside an edge are merged. Empty edges and
    /// out-of-range indices are rejected.
    pub fn from_edges(node_count: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    pub fn with_labels(labels: Vec<String>, edges: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        let mut clean = Vec::with_capacity(edges.len());
        for (idx, mut e) in edges.into_iter().enumerate() {
            e.sort_unstable();
            e.dedup();
            if e.is_empty() {
                return Err(Error::InvalidEdge(idx));
            }
            if let Some(&bad) = e.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidNode(bad));
            }
            clean.push(e);
        }

        let mut incidence = vec![Vec::new(); n];
        for (idx, e) in clean.iter().enumerate() {
            for &v in e {
                incidence[v].push(idx);
            }
        }
        let neighbors = (0..n)
            .map(|i| {
                let mut nb: Vec<usize> = incidence[i]
                    .iter()
                    .flat_map(|&e| clean[e].iter().copied())
                    .filter(|&j| j != i)
                    .collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect();
        let incidence_count = clean.iter().map(Vec::len).sum();

        Ok(Self {
            labels,
            edges: clean,
            incidence,
            neighbors,
            incidence_count,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of filled cells in the node-to-edge incidence matrix.
    pub fn incidence_count(&self) -> usize {
        self.incidence_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Sorted node indices of edge `e`.
    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    /// Indices of the edges containing node `i`, ascending.
    pub fn incident_edges(&self, i: usize) -> &[usize] {
        &self.incidence[i]
    }

    /// Number of edges containing `i`, counting repeated edges.
    pub fn degree(&self, i: usize) -> usize {
        self.incidence[i].len()
    }

    /// Sorted nodes sharing at least one edge with `i`, excluding `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.neighbors[i].binary_search(&j).is_ok()
    }

    /// Edges intersecting `e`, excluding `e` itself.
    pub fn edge_neighborhood(&self, e: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges[e]
            .iter()
            .flat_map(|&v| self.incidence[v].iter().copied())
            .filter(|&f| f != e)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of edges containing both `i` and `j`.
    pub fn cooccurrence(&self, i: usize, j: usize) -> usize {
        self.incidence[i]
            .iter()
            .filter(|&&e| self.edges[e].binary_search(&j).is_ok())
            .count()
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode(i))
        }
    }

    pub fn check_edge(&self, e: usize) -> Result<()> {
        if e < self.edge_count() {
            Ok(())
        } else {
            Err(Error::InvalidEdge(e))
        }
    }

    /// Breadth-first hop distances from `source`. Entries beyond `cap` and
    /// unreachable nodes are `None`.
    pub fn bfs(&self, source: usize, cap: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if cap.is_some_and(|c| du >= c) {
                continue;
            }
            for &v in &self.neighbors[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Distances from `source` to every reachable node within `cap` hops.
    pub fn distances_from(&self, source: usize, cap: Option<usize>) -> Result<BTreeMap<usize, usize>> {
        self.check_node(source)?;
        Ok(self
            .bfs(source, cap)
            .into_iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|d| (v, d)))
            .collect())
    }

    pub fn distance(&self, i: usize, j: usize) -> Option<usize> {
        if i == j {
            return Some(0);
        }
        if self.is_adjacent(i, j) {
            return Some(1);
        }
        self.bfs(i, None)[j]
    }

    /// Component index per node, numbered in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.neighbors[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    /// Exact diameter by all-pairs BFS, `None` when disconnected or empty.
    pub fn diameter(&self) -> Option<usize> {
        let n = self.node_count();
        if n == 0 {
            return None;
        }
        let mut best = 0;
        for s in 0..n {
            for d in self.bfs(s, None) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    pub fn clique_expansion(&self, weighted: bool) -> Graph {
        let mut counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for e in &self.edges {
            for (a, &u) in e.iter().enumerate() {
                for &v in &e[a + 1..] {
                    *counts.entry((u, v)).or_default() += 1;
                }
            }
        }
        let edges = counts.keys().copied().collect();
        let weights = weighted.then(|| counts.values().copied().collect());
        Graph {
            node_count: self.node_count(),
            edges,
            weights,
        }
    }

    /// Bipartite graph on `n + m` nodes; edge `e` becomes node `n + e`.
    pub fn star_expansion(&self) -> Graph {
        let n = self.node_count();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(idx, e)| e.iter().map(move |&v| (v, n + idx)))
            .collect();
        Graph {
            node_count: n + self.edge_count(),
            edges,
            weights: None,
        }
    }

    pub fn structural_profile(&self, exact_diameter: bool) -> StructuralProfile {
        let sizes: Vec<usize> = self.edges.iter().map(Vec::len).collect();
        let uniform_r = constant(sizes.iter().copied());
        let regular_k = constant((0..self.node_count()).map(|i| self.degree(i)));

        let mut intersections = Vec::new();
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for (e, members) in self.edges.iter().enumerate() {
            counts.clear();
            for &v in members {
                for &f in &self.incidence[v] {
                    if f > e {
                        *counts.entry(f).or_default() += 1;
                    }
                }
            }
            intersections.extend(counts.values().copied());
        }
        let intersecting_s = constant(intersections.into_iter());

        let mut cooc = Vec::new();
        for i in 0..self.node_count() {
            let mut local: HashMap<usize, usize> = HashMap::new();
            for &e in &self.incidence[i] {
                for &j in &self.edges[e] {
                    if j > i {
                        *local.entry(j).or_default() += 1;
                    }
                }
            }
            cooc.extend(local.into_values());
        }
        let cooccurrent_c = constant(cooc.into_iter());

        let components = self.component_count();
        let diameter = if exact_diameter && components == 1 {
            self.diameter()
        } else {
            None
        };
        let d_min = sizes.iter().any(|&s| s >= 2).then_some(1);
        let n = self.node_count();
        let m = self.edge_count();
        let density = if n > 0 && m > 0 {
            self.incidence_count as f64 / (n as f64 * m as f64)
        } else {
            0.0
        };

        StructuralProfile {
            n,
            m,
            c: self.incidence_count,
            density,
            uniform_r,
            regular_k,
            intersecting_s,
            cooccurrent_c,
            diameter,
            d_min,
            components,
        }
    }

    /// Writes one edge per line, node labels separated by single spaces.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let mut first = true;
            for &v in e {
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push_str(&self.labels[v]);
            }
            out.push('\n');
        }
        out
    }
}

fn constant(mut values: impl Iterator<Item = usize>) -> Option<usize> {
    let first = values.next()?;
    values.all(|v| v == first).then_some(first)
}

/// Parses the edge-list format: one edge per nonempty line, node tokens
/// separated by commas and/or whitespace. Lines starting with `#` are
/// comments.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut edge = Vec::new();
        for token in trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let id = *index.entry(token).or_insert_with(|| {
                labels.push(token.to_string());
                labels.len() - 1
            });
            if !edge.contains(&id) {
                edge.push(id);
            }
        }
        if edge.is_empty() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "edge has no nodes".into(),
            });
        }
        edges.push(edge);
    }
    Hypergraph::with_labels(labels, edges)
}

/// A simple graph, optionally weighted by cooccurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub weights: Option<Vec<u32>>,
}

impl Graph {
    pub fn weight(&self, idx: usize) -> u32 {
        self.weights.as_ref().map_or(1, |w| w[idx])
    }

    /// Weighted adjacency lists, sorted by neighbor.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u32)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (idx, &(u, v)) in self.edges.iter().enumerate() {
            let w = self.weight(idx);
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Reads a graph as a 2-uniform hypergraph.
    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        Hypergraph::from_edges(
            self.node_count,
            self.edges.iter().map(|&(u, v)| vec![u, v]).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralProfile {
    pub n: usize,
    pub m: usize,
    pub c: usize,
    pub density: f64,
    pub uniform_r: Option<usize>,
    pub regular_k: Option<usize>,
    pub intersecting_s: Option<usize>,
    pub cooccurrent_c: Option<usize>,
    pub diameter: Option<usize>,
    pub d_min: Option<usize>,
    pub components: usize,
}

impl std::fmt::Display for StructuralProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        let mut s = String::new();
        let _ = write!(
            s,
            "n={} m={} c={} density={:.4} r={} k={} s={} c={} diam={} components={}",
            self.n,
            self.m,
            self.c,
            self.density,
            opt(self.uniform_r),
            opt(self.regular_k),
            opt(self.intersecting_s),
            opt(self.cooccurrent_c),
            opt(self.diameter),
            self.components
        );
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels_of(h: &Hypergraph, nodes: &[usize]) -> Vec<String> {
        nodes.iter().map(|&v| h.label(v).to_string()).collect()
    }

    #[test]
    fn parses_whitespace_and_commas() {
        let h = parse_hypergraph("a b\nb c d").unwrap();
        assert_eq!(h.node_count(), 4);
        assert_eq!(h.edges(), &[vec![0, 1], vec![1, 2, 3]]);
        assert_eq!(h.incidence_count(), 5);

        let h = parse_hypergraph("a,a,b").unwrap();
        assert_eq!(h.edges(), &[vec![0, 1]]);

        let h = parse_hypergraph("x, y  z\n\n# comment\nz").unwrap();
        assert_eq!(h.edges(), &[vec![0, 1, 2], vec![2]]);
    }

    #[test]
    fn keeps_repeated_edges() {
        let h = parse_hypergraph("a b\na b").unwrap();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.degree(0), 2);
        assert_eq!(h.neighbors(0), &[1]);
    }

    #[test]
    fn empty_edge_reports_line() {
        let err = parse_hypergraph("a b\n , ,\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                message: "edge has no nodes".into()
            }
        );
    }

    #[test]
    fn degree_and_neighborhoods() {
        let h = parse_hypergraph("i a\ni b c").unwrap();
        assert_eq!(h.degree(0), 2);
        assert_eq!(labels_of(&h, h.neighbors(0)), ["a", "b", "c"]);
        assert_eq!(h.edge_neighborhood(0), vec![1]);

        let h = parse_hypergraph("i\ni a").unwrap();
        assert_eq!(h.degree(0), 2);
        assert_eq!(h.neighbors(0), &[1]);
    }

    #[test]
    fn distances() {
        let h = parse_hypergraph("a b\nb c").unwrap();
        let d = h.distances_from(0, None).unwrap();
        assert_eq!(d[&2], 2);
        assert_eq!(d[&0], 0);
        let capped = h.distances_from(0, Some(1)).unwrap();
        assert!(!capped.contains_key(&2));

        let h = parse_hypergraph("a b c").unwrap();
        assert_eq!(h.distance(0, 1), Some(1));
        assert_eq!(h.distance(0, 2), Some(1));

        let h = parse_hypergraph("a b\nc d").unwrap();
        assert_eq!(h.distance(0, 3), None);
    }

    #[test]
    fn expansions() {
        let h = parse_hypergraph("a b c").unwrap();
        let g = h.clique_expansion(false);
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert!(g.weights.is_none());

        let h = parse_hypergraph("a b\na b c").unwrap();
        let g = h.clique_expansion(true);
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.weights, Some(vec![2, 1, 1]));

        let h = parse_hypergraph("a b").unwrap();
        let g = h.star_expansion();
        assert_eq!(g.node_count, 3);
        assert_eq!(g.edges, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn profile_of_simple_graph() {
        let h = parse_hypergraph("a b\nb c\nc d\nd a\na c").unwrap();
        let p = h.structural_profile(true);
        assert_eq!(p.uniform_r, Some(2));
        assert_eq!(p.intersecting_s, Some(1));
        assert_eq!(p.cooccurrent_c, Some(1));
        assert_eq!(p.regular_k, None);
        assert_eq!(p.diameter, Some(2));
        assert_eq!(p.d_min, Some(1));
        assert_eq!(p.components, 1);
    }

    #[test]
    fn profile_of_disconnected() {
        let h = parse_hypergraph("a b\nc d").unwrap();
        let p = h.structural_profile(true);
        assert_eq!(p.components, 2);
        assert_eq!(p.diameter, None);
        assert_eq!(p.intersecting_s, None);
    }

    #[test]
    fn profile_json_fields() {
        let h = parse_hypergraph("a b c").unwrap();
        let v = serde_json::to_value(h.structural_profile(true)).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            [
                "n",
                "m",
                "c",
                "density",
                "uniform_r",
                "regular_k",
                "intersecting_s",
                "cooccurrent_c",
                "diameter",
                "d_min",
                "components"
            ]
        );
        assert_eq!(v["density"], 1.0);
    }

    #[test]
    fn serialization_round_trip() {
        let text = "x y\nz x\nq\nx y";
        let h = parse_hypergraph(text).unwrap();
        let again = parse_hypergraph(&h.to_edge_list()).unwrap();
        assert_eq!(h, again);
    }
}
