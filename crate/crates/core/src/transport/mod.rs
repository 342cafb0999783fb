//! Wasserstein-1 distances over the hop metric of a hypergraph.
//!
//! Every solve first cancels the mass two measures share at the same node
//! (that mass never needs to move), then builds the cost matrix between the
//! remaining supports and hands it to the exact transportation simplex.
//!
//! When both measures are one-step walk measures of adjacent base nodes,
//! every support-to-support distance is at most 3 (`k ~ i ~ j ~ l`), so the
//! cost matrix only needs two-hop balls; anything not reached within two
//! hops is confirmed to be at distance exactly 3.

mod barycenter;
mod empirical;
pub mod simplex;

use std::cell::RefCell;

pub use barycenter::{candidate_support, wasserstein_barycenter, Barycenter, SupportMode};
pub use empirical::w1_empirical_1d;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::measures::SparseMeasure;

/// Largest distance between supports of walk measures at adjacent nodes.
pub const ADJACENT_DISTANCE_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingResult {
    pub cost: f64,
    /// `(source node, target node, mass)`; only filled on request.
    pub plan: Option<Vec<(usize, usize, f64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub plan: bool,
    pub reduce: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            plan: false,
            reduce: true,
        }
    }
}

/// Atoms left after cancelling shared mass.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReducedPair {
    pub left: Vec<(usize, f64)>,
    pub right: Vec<(usize, f64)>,
    /// Mass kept in place, `(node, mass)`.
    pub shared: Vec<(usize, f64)>,
}

impl ReducedPair {
    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn moving_mass(&self) -> f64 {
        self.left.iter().map(|a| a.1).sum()
    }
}

const ATOM_EPS: f64 = 1e-15;

/// Cancels `min(mu(k), nu(k))` at every node. The leftover sub-measures
/// have equal total mass and no node carries mass on both sides.
pub fn reduce_instance(mu: &SparseMeasure, nu: &SparseMeasure) -> ReducedPair {
    let mut out = ReducedPair::default();
    let (mut a, mut b) = (0, 0);
    while a < mu.support.len() || b < nu.support.len() {
        let ka = mu.support.get(a).copied().unwrap_or(usize::MAX);
        let kb = nu.support.get(b).copied().unwrap_or(usize::MAX);
        if ka == kb {
            let (x, y) = (mu.masses[a], nu.masses[b]);
            let common = x.min(y);
            if common > 0.0 {
                out.shared.push((ka, common));
            }
            if x - common > ATOM_EPS {
                out.left.push((ka, x - common));
            }
            if y - common > ATOM_EPS {
                out.right.push((kb, y - common));
            }
            a += 1;
            b += 1;
        } else if ka < kb {
            if mu.masses[a] > ATOM_EPS {
                out.left.push((ka, mu.masses[a]));
            }
            a += 1;
        } else {
            if nu.masses[b] > ATOM_EPS {
                out.right.push((kb, nu.masses[b]));
            }
            b += 1;
        }
    }
    out
}

pub fn wasserstein1(h: &Hypergraph, mu: &SparseMeasure, nu: &SparseMeasure) -> Result<CouplingResult> {
    wasserstein1_with(h, mu, nu, SolveOptions::default())
}

pub fn wasserstein1_with(
    h: &Hypergraph,
    mu: &SparseMeasure,
    nu: &SparseMeasure,
    opts: SolveOptions,
) -> Result<CouplingResult> {
    for &v in mu.support.iter().chain(&nu.support) {
        h.check_node(v)?;
    }
    let adjacent = is_adjacent_walk_pair(h, mu, nu);
    solve_with_costs(mu, nu, opts, |sources, targets| {
        if adjacent {
            truncated_costs(h, sources, targets)
        } else {
            full_costs(h, sources, targets)
        }
    })
}

/// `W1` between walk measures at adjacent nodes, with costs read from a
/// table built at `mu`'s base. Falls back to [`wasserstein1`] when the
/// pair is not of that shape.
pub fn wasserstein1_local(
    h: &Hypergraph,
    table: &LocalDistances,
    mu: &SparseMeasure,
    nu: &SparseMeasure,
) -> Result<CouplingResult> {
    if mu.base != table.base || !is_adjacent_walk_pair(h, mu, nu) {
        return wasserstein1(h, mu, nu);
    }
    solve_with_costs(mu, nu, SolveOptions::default(), |sources, targets| {
        table.costs(sources, targets)
    })
}

fn solve_with_costs(
    mu: &SparseMeasure,
    nu: &SparseMeasure,
    opts: SolveOptions,
    costs: impl FnOnce(&[usize], &[usize]) -> Result<Vec<f64>>,
) -> Result<CouplingResult> {
    let pair = if opts.reduce {
        reduce_instance(mu, nu)
    } else {
        ReducedPair {
            left: mu.iter().collect(),
            right: nu.iter().collect(),
            shared: Vec::new(),
        }
    };
    if pair.is_empty() {
        return Ok(CouplingResult {
            cost: 0.0,
            plan: opts.plan.then(|| pair.shared.iter().map(|&(k, m)| (k, k, m)).collect()),
        });
    }

    let sources: Vec<usize> = pair.left.iter().map(|a| a.0).collect();
    let targets: Vec<usize> = pair.right.iter().map(|a| a.0).collect();
    let cost = costs(&sources, &targets)?;
    let supply: Vec<f64> = pair.left.iter().map(|a| a.1).collect();
    let demand: Vec<f64> = pair.right.iter().map(|a| a.1).collect();
    let solution = simplex::solve_transport(&supply, &demand, &cost)?;

    let plan = opts.plan.then(|| {
        let mut plan: Vec<(usize, usize, f64)> = pair.shared.iter().map(|&(k, m)| (k, k, m)).collect();
        plan.extend(
            solution
                .flows
                .iter()
                .map(|&(r, c, f)| (sources[r], targets[c], f)),
        );
        plan.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        plan
    });
    Ok(CouplingResult {
        cost: solution.cost,
        plan,
    })
}

/// Hop distances from the closed neighborhood of `base` to its 2-ball,
/// shared by every transport problem between `base` and a neighbor. Pairs
/// beyond distance 2 are at distance [`ADJACENT_DISTANCE_CAP`], since both
/// endpoints sit next to adjacent base nodes.
#[derive(Debug, Clone)]
pub struct LocalDistances {
    base: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    table: Vec<u8>,
}

impl LocalDistances {
    /// Returns `None` when the table would exceed `max_entries`.
    pub fn new(h: &Hypergraph, base: usize, max_entries: usize) -> Result<Option<Self>> {
        h.check_node(base)?;
        let mut rows: Vec<usize> = h.neighbors(base).to_vec();
        rows.push(base);
        rows.sort_unstable();
        SCRATCH.with(|cell| {
            let scratch = &mut *cell.borrow_mut();
            let g = scratch.prepare(h.node_count());
            let mut cols = Vec::new();
            for &x in &rows {
                for &y in std::iter::once(&x).chain(h.neighbors(x)) {
                    if scratch.stamp[y] != g {
                        scratch.stamp[y] = g;
                        cols.push(y);
                    }
                }
            }
            if rows.len().saturating_mul(cols.len()) > max_entries {
                return Ok(None);
            }
            cols.sort_unstable();
            // dist doubles as the column index of every node in the ball
            for (idx, &y) in cols.iter().enumerate() {
                scratch.dist[y] = idx as u32;
            }
            let width = cols.len();
            let mut table = vec![ADJACENT_DISTANCE_CAP as u8; rows.len() * width];
            for (r, &k) in rows.iter().enumerate() {
                let row = &mut table[r * width..(r + 1) * width];
                for &x in h.neighbors(k) {
                    for &y in h.neighbors(x) {
                        if scratch.stamp[y] == g {
                            let c = scratch.dist[y] as usize;
                            row[c] = row[c].min(2);
                        }
                    }
                }
                for &x in h.neighbors(k) {
                    row[scratch.dist[x] as usize] = 1;
                }
                row[scratch.dist[k] as usize] = 0;
            }
            Ok(Some(Self {
                base,
                rows,
                cols,
                table,
            }))
        })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// `d(k, l)` for `k` in the closed neighborhood of the base and `l` in
    /// the closed neighborhood of one of its neighbors.
    pub fn distance(&self, k: usize, l: usize) -> Option<usize> {
        let r = self.rows.binary_search(&k).ok()?;
        let c = self.cols.binary_search(&l).ok();
        Some(c.map_or(ADJACENT_DISTANCE_CAP, |c| self.table[r * self.cols.len() + c] as usize))
    }

    fn costs(&self, sources: &[usize], targets: &[usize]) -> Result<Vec<f64>> {
        let width = self.cols.len();
        let cols: Vec<Option<usize>> = targets.iter().map(|l| self.cols.binary_search(l).ok()).collect();
        let mut out = Vec::with_capacity(sources.len() * targets.len());
        for &k in sources {
            let r = self
                .rows
                .binary_search(&k)
                .map_err(|_| Error::Numerical(format!("node {k} is not next to base {}", self.base)))?;
            let row = &self.table[r * width..(r + 1) * width];
            out.extend(
                cols.iter()
                    .map(|c| c.map_or(ADJACENT_DISTANCE_CAP, |c| row[c] as usize) as f64),
            );
        }
        Ok(out)
    }
}

/// Both measures live on the closed neighborhoods of adjacent base nodes.
pub fn is_adjacent_walk_pair(h: &Hypergraph, mu: &SparseMeasure, nu: &SparseMeasure) -> bool {
    let within = |m: &SparseMeasure| {
        m.support
            .iter()
            .all(|&k| k == m.base || h.is_adjacent(m.base, k))
    };
    h.is_adjacent(mu.base, nu.base) && within(mu) && within(nu)
}

/// `W1(δ_base, mu)`: the expected hop distance travelled from the base.
pub fn jump(h: &Hypergraph, mu: &SparseMeasure) -> Result<f64> {
    h.check_node(mu.base)?;
    let local = mu
        .support
        .iter()
        .all(|&k| k == mu.base || h.is_adjacent(mu.base, k));
    if local {
        return Ok(mu
            .iter()
            .filter(|&(k, _)| k != mu.base)
            .map(|(_, m)| m)
            .sum());
    }
    let dist = h.bfs(mu.base, None);
    mu.iter().try_fold(0.0, |acc, (k, m)| {
        let d = dist[k].ok_or(Error::InfiniteCost)?;
        Ok(acc + m * d as f64)
    })
}

struct Scratch {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    generation: u32,
    queue: Vec<usize>,
}

impl Scratch {
    fn prepare(&mut self, n: usize) -> u32 {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
            self.dist.resize(n, 0);
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        self.generation
    }
}

thread_local! {
    static SCRATCH: RefCell<Scratch> = const { RefCell::new(Scratch {
        stamp: Vec::new(),
        dist: Vec::new(),
        generation: 0,
        queue: Vec::new(),
    }) };
}

/// Row-major hop distances for supports of adjacent walk measures.
fn truncated_costs(h: &Hypergraph, sources: &[usize], targets: &[usize]) -> Result<Vec<f64>> {
    SCRATCH.with(|cell| {
        let scratch = &mut *cell.borrow_mut();
        let mut out = Vec::with_capacity(sources.len() * targets.len());
        for &k in sources {
            let g = scratch.prepare(h.node_count());
            scratch.stamp[k] = g;
            scratch.dist[k] = 0;
            for &x in h.neighbors(k) {
                scratch.stamp[x] = g;
                scratch.dist[x] = 1;
            }
            for &x in h.neighbors(k) {
                for &y in h.neighbors(x) {
                    if scratch.stamp[y] != g {
                        scratch.stamp[y] = g;
                        scratch.dist[y] = 2;
                    }
                }
            }
            for &l in targets {
                let d = if scratch.stamp[l] == g {
                    scratch.dist[l] as usize
                } else {
                    let confirmed = h.neighbors(l).iter().any(|&y| scratch.stamp[y] == g);
                    if !confirmed {
                        return Err(Error::Numerical(format!(
                            "support nodes {k} and {l} exceed the distance cap of {ADJACENT_DISTANCE_CAP}"
                        )));
                    }
                    ADJACENT_DISTANCE_CAP
                };
                out.push(d as f64);
            }
        }
        Ok(out)
    })
}

/// Row-major hop distances by BFS from each source, stopping once every
/// target is found.
pub(crate) fn full_costs(h: &Hypergraph, sources: &[usize], targets: &[usize]) -> Result<Vec<f64>> {
    SCRATCH.with(|cell| {
        let scratch = &mut *cell.borrow_mut();
        let mut out = Vec::with_capacity(sources.len() * targets.len());
        for &k in sources {
            let g = scratch.prepare(h.node_count());
            let mut remaining = targets.iter().filter(|&&t| t != k).count();
            scratch.queue.clear();
            scratch.queue.push(k);
            scratch.stamp[k] = g;
            scratch.dist[k] = 0;
            let mut head = 0;
            while head < scratch.queue.len() && remaining > 0 {
                let u = scratch.queue[head];
                head += 1;
                let du = scratch.dist[u];
                for &v in h.neighbors(u) {
                    if scratch.stamp[v] != g {
                        scratch.stamp[v] = g;
                        scratch.dist[v] = du + 1;
                        scratch.queue.push(v);
                        if targets.contains(&v) {
                            remaining -= targets.iter().filter(|&&t| t == v).count();
                        }
                    }
                }
            }
            for &l in targets {
                if scratch.stamp[l] != g {
                    return Err(Error::InfiniteCost);
                }
                out.push(scratch.dist[l] as f64);
            }
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::parse_hypergraph;
    use crate::measures::{build_measure, MeasureKind};

    fn atoms(base: usize, a: &[(usize, f64)]) -> SparseMeasure {
        SparseMeasure::from_atoms(base, a.to_vec())
    }

    #[test]
    fn reduction_examples() {
        let mu = atoms(0, &[(0, 0.5), (1, 0.5)]);
        let same = reduce_instance(&mu, &mu);
        assert!(same.is_empty());

        let nu = atoms(0, &[(0, 0.5), (2, 0.5)]);
        let r = reduce_instance(&mu, &nu);
        assert_eq!(r.left, vec![(1, 0.5)]);
        assert_eq!(r.right, vec![(2, 0.5)]);
        assert_eq!(r.shared, vec![(0, 0.5)]);
    }

    #[test]
    fn dirac_pairs() {
        let h = parse_hypergraph("a b\nb c\nc d").unwrap();
        let w = wasserstein1(&h, &SparseMeasure::dirac(0), &SparseMeasure::dirac(3)).unwrap();
        assert_eq!(w.cost, 3.0);
        let w = wasserstein1(&h, &SparseMeasure::dirac(0), &SparseMeasure::dirac(1)).unwrap();
        assert_eq!(w.cost, 1.0);
        let w = wasserstein1(&h, &SparseMeasure::dirac(2), &SparseMeasure::dirac(2)).unwrap();
        assert_eq!(w.cost, 0.0);
    }

    #[test]
    fn path_endpoint_walks() {
        // mu_a = δ_b and mu_b = {a: 1/2, c: 1/2}: every unit travels one hop
        let h = parse_hypergraph("a b\nb c").unwrap();
        let ma = build_measure(&h, 0, MeasureKind::EqualNodes, 0.0).unwrap();
        let mb = build_measure(&h, 1, MeasureKind::EqualNodes, 0.0).unwrap();
        let w = wasserstein1(&h, &ma, &mb).unwrap();
        assert!((w.cost - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_half() {
        let h = parse_hypergraph("a b\nb c\nc a").unwrap();
        let m0 = build_measure(&h, 0, MeasureKind::EqualNodes, 0.0).unwrap();
        let m1 = build_measure(&h, 1, MeasureKind::EqualNodes, 0.0).unwrap();
        let w = wasserstein1_with(&h, &m0, &m1, SolveOptions { plan: true, reduce: true }).unwrap();
        assert!((w.cost - 0.5).abs() < 1e-12);
        let plan = w.plan.unwrap();
        let moved: f64 = plan.iter().map(|p| p.2).sum();
        assert!((moved - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unreachable_supports() {
        let h = parse_hypergraph("a b\nc d").unwrap();
        let err = wasserstein1(&h, &SparseMeasure::dirac(0), &SparseMeasure::dirac(2)).unwrap_err();
        assert_eq!(err, Error::InfiniteCost);
    }

    #[test]
    fn jump_values() {
        let h = parse_hypergraph("a b\nb c\nc a\nc d").unwrap();
        for alpha in [0.0, 0.2, 0.7] {
            let m = build_measure(&h, 2, MeasureKind::EqualNodes, alpha).unwrap();
            assert!((jump(&h, &m).unwrap() - (1.0 - alpha)).abs() < 1e-12);
        }
        let m = build_measure(&h, 2, MeasureKind::WeightedEdges, 1.0).unwrap();
        assert_eq!(jump(&h, &m).unwrap(), 0.0);
        assert_eq!(jump(&h, &SparseMeasure::dirac(3)).unwrap(), 0.0);
        let far = atoms(0, &[(3, 1.0)]);
        assert_eq!(jump(&h, &far).unwrap(), 2.0);
    }

    #[test]
    fn plan_reproduces_marginals() {
        let h = parse_hypergraph("a b c\nc d\nd e\ne a\nb e").unwrap();
        let mu = build_measure(&h, 0, MeasureKind::EqualEdges, 0.2).unwrap();
        let nu = build_measure(&h, 4, MeasureKind::EqualEdges, 0.2).unwrap();
        let w = wasserstein1_with(&h, &mu, &nu, SolveOptions { plan: true, reduce: true }).unwrap();
        let plan = w.plan.unwrap();
        let mut cost = 0.0;
        for k in 0..h.node_count() {
            let out: f64 = plan.iter().filter(|p| p.0 == k).map(|p| p.2).sum();
            let inn: f64 = plan.iter().filter(|p| p.1 == k).map(|p| p.2).sum();
            assert!((out - mu.mass_at(k)).abs() < 1e-9);
            assert!((inn - nu.mass_at(k)).abs() < 1e-9);
        }
        for &(s, t, m) in &plan {
            cost += m * h.distance(s, t).unwrap() as f64;
        }
        assert!((cost - w.cost).abs() < 1e-9);
    }

    #[test]
    fn local_table_matches_bfs() {
        let h = parse_hypergraph("a b c\nc d\nd e f\nf g a\nb h\nh i\ne i j\nj k").unwrap();
        for base in 0..h.node_count() {
            let t = LocalDistances::new(&h, base, usize::MAX).unwrap().unwrap();
            for &j in h.neighbors(base) {
                for &k in h.neighbors(base).iter().chain([&base]) {
                    for &l in h.neighbors(j).iter().chain([&j]) {
                        assert_eq!(t.distance(k, l), h.distance(k, l), "base {base} k {k} l {l}");
                    }
                }
            }
            assert!(LocalDistances::new(&h, base, 0).unwrap().is_none());
        }
        for kind in MeasureKind::ALL {
            let mu = build_measure(&h, 2, kind, 0.2).unwrap();
            let nu = build_measure(&h, 3, kind, 0.2).unwrap();
            let t = LocalDistances::new(&h, 2, usize::MAX).unwrap().unwrap();
            let a = wasserstein1_local(&h, &t, &mu, &nu).unwrap().cost;
            assert!((a - wasserstein1(&h, &mu, &nu).unwrap().cost).abs() < 1e-12);
        }
    }
}
