//! Reference implementations shared by the integration tests. Nothing here
//! calls into the crate's transport or measure code.

#![allow(dead_code)]

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use orchid::hypergraph::Hypergraph;
use orchid::measures::MeasureKind;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const UNREACHABLE: usize = usize::MAX;

/// All-pairs hop distances over an edge family by Floyd–Warshall.
pub fn floyd(n: usize, edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for e in edges {
        for &a in e {
            for &b in e {
                if a != b {
                    d[a][b] = 1;
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                if d[k][j] != UNREACHABLE && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Transport cost by linear programming over all `m·n` cells.
pub fn lp_transport(supply: &[f64], demand: &[f64], cost: &[f64]) -> f64 {
    let (m, n) = (supply.len(), demand.len());
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = cost.iter().map(|&c| lp.add_var(c, (0.0, f64::INFINITY))).collect();
    for (r, &s) in supply.iter().enumerate() {
        let row: Vec<_> = (0..n).map(|c| (vars[r * n + c], 1.0)).collect();
        lp.add_constraint(row.as_slice(), ComparisonOp::Eq, s);
    }
    for (c, &t) in demand.iter().enumerate() {
        let col: Vec<_> = (0..m).map(|r| (vars[r * n + c], 1.0)).collect();
        lp.add_constraint(col.as_slice(), ComparisonOp::Eq, t);
    }
    lp.solve()
        .expect("oracle LP solves")
        .into_solution()
        .expect("oracle LP finishes")
        .objective()
}

/// Transport cost as the cheapest extreme point: every spanning tree of
/// the row/column bipartite graph whose unique flow is nonnegative.
pub fn vertex_transport(supply: &[f64], demand: &[f64], cost: &[f64]) -> f64 {
    let (m, n) = (supply.len(), demand.len());
    let cells = m * n;
    let size = m + n - 1;
    let mut best = f64::INFINITY;
    let mut pick: Vec<usize> = (0..size).collect();
    loop {
        if let Some(c) = tree_cost(supply, demand, cost, &pick) {
            best = best.min(c);
        }
        let Some(pos) = (0..size).rev().find(|&p| pick[p] < cells - size + p) else {
            break;
        };
        pick[pos] += 1;
        for q in pos + 1..size {
            pick[q] = pick[q - 1] + 1;
        }
    }
    best
}

fn tree_cost(supply: &[f64], demand: &[f64], cost: &[f64], pick: &[usize]) -> Option<f64> {
    let (m, n) = (supply.len(), demand.len());
    // union-find over rows 0..m and columns m..m+n
    let mut parent: Vec<usize> = (0..m + n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &c in pick {
        let (a, b) = (find(&mut parent, c / n), find(&mut parent, m + c % n));
        if a == b {
            return None;
        }
        parent[a] = b;
    }
    let mut left: Vec<f64> = supply.iter().chain(demand).copied().collect();
    let mut open: Vec<usize> = pick.to_vec();
    let mut total = 0.0;
    while !open.is_empty() {
        let degree = |v: usize, open: &[usize]| {
            open.iter().filter(|&&c| c / n == v || m + c % n == v).count()
        };
        let leaf = (0..m + n).find(|&v| degree(v, &open) == 1)?;
        let idx = open.iter().position(|&c| c / n == leaf || m + c % n == leaf).unwrap();
        let c = open.swap_remove(idx);
        let (r, col) = (c / n, m + c % n);
        let flow = left[leaf];
        if flow < -1e-12 {
            return None;
        }
        left[r] -= flow;
        left[col] -= flow;
        total += flow * cost[c];
    }
    Some(total)
}

/// Dense α-lazy walk measure built straight from the definitions.
pub fn walk_measure(n: usize, edges: &[Vec<usize>], i: usize, kind: MeasureKind, alpha: f64) -> Vec<f64> {
    let mut mu = vec![0.0; n];
    let incident: Vec<&Vec<usize>> = edges.iter().filter(|e| e.contains(&i)).collect();
    match kind {
        MeasureKind::EqualNodes => {
            let mut nb: Vec<usize> = incident.iter().flat_map(|e| e.iter().copied()).filter(|&j| j != i).collect();
            nb.sort_unstable();
            nb.dedup();
            for &j in &nb {
                mu[j] += 1.0 / nb.len() as f64;
            }
        }
        MeasureKind::EqualEdges => {
            let proper: Vec<_> = incident.iter().filter(|e| e.len() > 1).collect();
            for e in &proper {
                for &j in e.iter().filter(|&&j| j != i) {
                    mu[j] += 1.0 / (proper.len() * (e.len() - 1)) as f64;
                }
            }
        }
        MeasureKind::WeightedEdges => {
            let total: usize = incident.iter().map(|e| e.len() - 1).sum();
            for e in &incident {
                for &j in e.iter().filter(|&&j| j != i) {
                    mu[j] += 1.0 / total as f64;
                }
            }
        }
    }
    for v in mu.iter_mut() {
        *v *= 1.0 - alpha;
    }
    mu[i] += alpha;
    mu
}

/// W1 between dense measures under a distance table, by LP.
pub fn oracle_w1(dist: &[Vec<usize>], mu: &[f64], nu: &[f64]) -> f64 {
    let rows: Vec<usize> = (0..mu.len()).filter(|&k| mu[k] > 0.0).collect();
    let cols: Vec<usize> = (0..nu.len()).filter(|&k| nu[k] > 0.0).collect();
    let supply: Vec<f64> = rows.iter().map(|&k| mu[k]).collect();
    let demand: Vec<f64> = cols.iter().map(|&k| nu[k]).collect();
    let cost: Vec<f64> = rows
        .iter()
        .flat_map(|&k| cols.iter().map(move |&l| dist[k][l] as f64))
        .collect();
    if rows.len() <= 4 && cols.len() <= 4 {
        vertex_transport(&supply, &demand, &cost)
    } else {
        lp_transport(&supply, &demand, &cost)
    }
}

/// Graph Ollivier–Ricci curvature of an edge `i ~ j` with α-lazy uniform
/// walks, on a simple graph given by its edge pairs.
pub fn graph_orc(n: usize, pairs: &[(usize, usize)], alpha: f64, i: usize, j: usize) -> f64 {
    let edges: Vec<Vec<usize>> = pairs.iter().map(|&(a, b)| vec![a, b]).collect();
    let dist = floyd(n, &edges);
    let lazy = |x: usize| {
        let nb: Vec<usize> = pairs
            .iter()
            .filter_map(|&(a, b)| if a == x { Some(b) } else if b == x { Some(a) } else { None })
            .collect();
        let mut mu = vec![0.0; n];
        mu[x] = alpha;
        for &y in &nb {
            mu[y] += (1.0 - alpha) / nb.len() as f64;
        }
        mu
    };
    1.0 - oracle_w1(&dist, &lazy(i), &lazy(j)) / dist[i][j] as f64
}

/// Distinct node pairs sharing an edge, `a < b`, sorted.
pub fn expansion_pairs(edges: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for e in edges {
        for &a in e {
            for &b in e {
                if a < b {
                    out.push((a, b));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Connected simple graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for t in 1..n {
        let (a, b) = (order[t], order[rng.random_range(0..t)]);
        pairs.push((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(extra) {
                pairs.push((a, b));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Connected hypergraph: every node after the first joins an edge with an
/// earlier node, then `extra` random edges are added. Cardinalities run
/// from 1 to `max_card`.
pub fn random_connected_hypergraph(rng: &mut ChaCha8Rng, n: usize, extra: usize, max_card: usize) -> Hypergraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    let mut t = 1;
    while t < n {
        let take = rng.random_range(1..max_card.max(2)).min(n - t);
        let mut e: Vec<usize> = order[t..t + take].to_vec();
        e.push(order[rng.random_range(0..t)]);
        edges.push(e);
        t += take;
    }
    edges.extend(random_edges(rng, n, extra, max_card));
    Hypergraph::from_edges(n, edges).unwrap()
}

/// `count` edges of uniformly random cardinality in `1..=max_card`.
pub fn random_edges(rng: &mut ChaCha8Rng, n: usize, count: usize, max_card: usize) -> Vec<Vec<usize>> {
    let nodes: Vec<usize> = (0..n).collect();
    (0..count)
        .map(|_| {
            let c = rng.random_range(1..=max_card.min(n));
            nodes.choose_multiple(rng, c).copied().collect()
        })
        .collect()
}

pub fn random_kind(rng: &mut ChaCha8Rng) -> MeasureKind {
    MeasureKind::ALL[rng.random_range(0..3)]
}

/// Prints the criterion line and returns whether it passed.
pub fn report(id: usize, name: &str, ok: bool, detail: &str) -> bool {
    println!("{} {id:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}
