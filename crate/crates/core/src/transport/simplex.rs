//! Exact solver for the balanced transportation problem.
//!
//! Primal transportation simplex: a least-cost greedy start completed to a
//! spanning tree of the row/column bipartite graph, then potential-based
//! pivots (most negative reduced cost). After a run of degenerate pivots the
//! solver switches to Bland's smallest-index rule, which cannot cycle.

use crate::error::{Error, Result};

const MASS_EPS: f64 = 1e-14;
const COST_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution {
    pub cost: f64,
    /// `(row, column, mass)` for every cell carrying positive mass.
    pub flows: Vec<(usize, usize, f64)>,
}

struct Tree {
    rows: usize,
    cols: usize,
    /// Basic cells as `(row, col, flow)`.
    cells: Vec<(usize, usize, f64)>,
}

/// Minimum-cost transport of `supply` onto `demand` with row-major `cost`
/// (`supply.len()` rows by `demand.len()` columns). Totals must agree to
/// within `1e-9`.
pub fn solve_transport(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<TransportSolution> {
    let (m, n) = (supply.len(), demand.len());
    if cost.len() != m * n {
        return Err(Error::Shape(format!(
            "cost has {} entries, expected {}x{}",
            cost.len(),
            m,
            n
        )));
    }
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if (total_s - total_d).abs() > 1e-9 * total_s.max(1.0) {
        return Err(Error::Numerical(format!(
            "unbalanced transport: supply {total_s} vs demand {total_d}"
        )));
    }
    if supply.iter().chain(demand).any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::Numerical("negative or non-finite mass".into()));
    }
    if m == 0 || n == 0 {
        return Ok(TransportSolution {
            cost: 0.0,
            flows: Vec::new(),
        });
    }
    if cost.iter().any(|c| !c.is_finite()) {
        return Err(Error::InfiniteCost);
    }

    let mut tree = initial_tree(supply, demand, cost);
    pivot_to_optimum(&mut tree, cost)?;

    let mut flows: Vec<(usize, usize, f64)> = tree
        .cells
        .iter()
        .filter(|c| c.2 > MASS_EPS)
        .copied()
        .collect();
    flows.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let total = flows.iter().map(|&(r, c, f)| f * cost[r * n + c]).sum();
    Ok(TransportSolution { cost: total, flows })
}

fn initial_tree(supply: &[f64], demand: &[f64], cost: &[f64]) -> Tree {
    let (m, n) = (supply.len(), demand.len());
    let mut s = supply.to_vec();
    let mut d = demand.to_vec();
    // absorb rounding drift so both sides exhaust together
    let diff: f64 = s.iter().sum::<f64>() - d.iter().sum::<f64>();
    if let Some(last) = d.iter_mut().rev().find(|x| **x > 0.0) {
        *last = (*last + diff).max(0.0);
    }

    let order = cells_by_cost(cost);

    let mut uf = UnionFind::new(m + n);
    let mut cells = Vec::with_capacity(m + n - 1);
    let mut row_done = vec![false; m];
    let mut col_done = vec![false; n];
    for &idx in &order {
        let (r, c) = (idx / n, idx % n);
        if row_done[r] || col_done[c] || s[r] <= MASS_EPS || d[c] <= MASS_EPS {
            continue;
        }
        let x = s[r].min(d[c]);
        s[r] -= x;
        d[c] -= x;
        if s[r] <= MASS_EPS {
            row_done[r] = true;
        } else {
            col_done[c] = true;
        }
        if d[c] <= MASS_EPS {
            col_done[c] = true;
        }
        uf.union(r, m + c);
        cells.push((r, c, x));
    }
    // leftover rounding drift joins the row's first allocation
    for (r, &left) in s.iter().enumerate() {
        if left > MASS_EPS {
            if let Some(cell) = cells.iter_mut().find(|cell| cell.0 == r) {
                cell.2 += left;
            }
        }
    }
    // complete the forest to a spanning tree with zero-flow cells
    for &idx in &order {
        if cells.len() == m + n - 1 {
            break;
        }
        let (r, c) = (idx / n, idx % n);
        if uf.union(r, m + c) {
            cells.push((r, c, 0.0));
        }
    }
    Tree { rows: m, cols: n, cells }
}

/// Reusable per-solve buffers. Tree nodes are rows first, then columns;
/// adjacency entries are `(neighbor node, cell index)`.
struct Workspace {
    adj: Vec<Vec<(usize, usize)>>,
    pot: Vec<f64>,
    stack: Vec<usize>,
    parent: Vec<(usize, usize)>,
    seen: Vec<u32>,
    stamp: u32,
    path: Vec<usize>,
}

impl Workspace {
    fn new(tree: &Tree) -> Self {
        let count = tree.rows + tree.cols;
        let mut adj = vec![Vec::new(); count];
        for (idx, &(r, c, _)) in tree.cells.iter().enumerate() {
            adj[r].push((tree.rows + c, idx));
            adj[tree.rows + c].push((r, idx));
        }
        Self {
            adj,
            pot: vec![0.0; count],
            stack: Vec::with_capacity(count),
            parent: vec![(0, 0); count],
            seen: vec![0; count],
            stamp: 0,
            path: Vec::with_capacity(count),
        }
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp += 1;
        self.stamp
    }

    /// `u_r + v_c = cost` on every basic cell, anchored at `u_0 = 0`.
    fn potentials(&mut self, tree: &Tree, cost: &[f64]) {
        let n = tree.cols;
        let g = self.next_stamp();
        self.pot[0] = 0.0;
        self.seen[0] = g;
        self.stack.clear();
        self.stack.push(0);
        while let Some(x) = self.stack.pop() {
            for &(y, cell) in &self.adj[x] {
                if self.seen[y] != g {
                    self.seen[y] = g;
                    let (r, c, _) = tree.cells[cell];
                    self.pot[y] = cost[r * n + c] - self.pot[x];
                    self.stack.push(y);
                }
            }
        }
    }

    /// Cell indices on the unique tree path from `from` to `to`, in order.
    fn tree_path(&mut self, from: usize, to: usize) {
        let g = self.next_stamp();
        self.seen[from] = g;
        self.stack.clear();
        self.stack.push(from);
        while let Some(x) = self.stack.pop() {
            if x == to {
                break;
            }
            for &(y, cell) in &self.adj[x] {
                if self.seen[y] != g {
                    self.seen[y] = g;
                    self.parent[y] = (x, cell);
                    self.stack.push(y);
                }
            }
        }
        self.path.clear();
        let mut cur = to;
        while cur != from {
            let (prev, cell) = self.parent[cur];
            self.path.push(cell);
            cur = prev;
        }
        self.path.reverse();
    }

    fn replace_cell(&mut self, tree: &mut Tree, idx: usize, cell: (usize, usize, f64)) {
        let m = tree.rows;
        let (r, c, _) = tree.cells[idx];
        self.adj[r].retain(|e| e.1 != idx);
        self.adj[m + c].retain(|e| e.1 != idx);
        tree.cells[idx] = cell;
        self.adj[cell.0].push((m + cell.1, idx));
        self.adj[m + cell.1].push((cell.0, idx));
    }
}

/// Cell indices sorted by cost, ties by index. Small integer costs (hop
/// distances) take a counting sort.
fn cells_by_cost(cost: &[f64]) -> Vec<usize> {
    const SMALL: usize = 64;
    if cost.iter().all(|&c| c >= 0.0 && c < SMALL as f64 && c.fract() == 0.0) {
        let mut starts = [0usize; SMALL + 1];
        for &c in cost {
            starts[c as usize + 1] += 1;
        }
        for b in 0..SMALL {
            starts[b + 1] += starts[b];
        }
        let mut order = vec![0; cost.len()];
        for (idx, &c) in cost.iter().enumerate() {
            order[starts[c as usize]] = idx;
            starts[c as usize] += 1;
        }
        return order;
    }
    let mut order: Vec<usize> = (0..cost.len()).collect();
    order.sort_by(|&a, &b| cost[a].total_cmp(&cost[b]).then(a.cmp(&b)));
    order
}

fn pivot_to_optimum(tree: &mut Tree, cost: &[f64]) -> Result<()> {
    let (m, n) = (tree.rows, tree.cols);
    let mut degenerate_run = 0usize;
    let mut bland = false;
    let max_iter = 50 * (m + n) * (m + n) + 1000;
    let mut ws = Workspace::new(tree);

    for _ in 0..max_iter {
        ws.potentials(tree, cost);
        let (u, v) = ws.pot.split_at(m);

        // basic cells price at zero, so they never enter
        let mut entering = None;
        let mut best = -COST_EPS;
        'scan: for r in 0..m {
            let row = &cost[r * n..(r + 1) * n];
            for c in 0..n {
                let reduced = row[c] - u[r] - v[c];
                if reduced < best {
                    entering = Some((r, c));
                    if bland {
                        break 'scan;
                    }
                    best = reduced;
                }
            }
        }
        let Some((er, ec)) = entering else {
            return Ok(());
        };

        // tree path from column node back to the row node closes the cycle;
        // cells along it alternate -, +, -, ... starting at the column
        ws.tree_path(m + ec, er);
        let mut theta = f64::INFINITY;
        let mut leaving: Option<usize> = None;
        for &cell in ws.path.iter().step_by(2) {
            let f = tree.cells[cell].2;
            let better = match leaving {
                None => true,
                Some(cur) => {
                    f < theta - MASS_EPS
                        || (f <= theta + MASS_EPS && cell_key(&tree.cells[cell], n) < cell_key(&tree.cells[cur], n))
                }
            };
            if better {
                theta = theta.min(f);
                leaving = Some(cell);
            }
        }
        let leaving = leaving.expect("cycle has a decreasing cell");
        let theta = theta.max(0.0);
        for (pos, &cell) in ws.path.iter().enumerate() {
            if pos % 2 == 0 {
                tree.cells[cell].2 = (tree.cells[cell].2 - theta).max(0.0);
            } else {
                tree.cells[cell].2 += theta;
            }
        }
        ws.replace_cell(tree, leaving, (er, ec, theta));

        if theta <= MASS_EPS {
            degenerate_run += 1;
            if degenerate_run > m + n {
                bland = true;
            }
        } else {
            degenerate_run = 0;
        }
    }
    Err(Error::Numerical("transport simplex did not converge".into()))
}

fn cell_key(cell: &(usize, usize, f64), n: usize) -> usize {
    cell.0 * n + cell.1
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell() {
        let s = solve_transport(&[1.0], &[1.0], &[2.5]).unwrap();
        assert_eq!(s.cost, 2.5);
        assert_eq!(s.flows, vec![(0, 0, 1.0)]);
    }

    #[test]
    fn textbook_instance() {
        // optimum 775 from an independent LP solve (scipy linprog)
        let supply = [20.0, 30.0, 25.0];
        let demand = [10.0, 25.0, 40.0];
        let cost = [8.0, 6.0, 10.0, 9.0, 12.0, 13.0, 14.0, 9.0, 16.0];
        let s = solve_transport(&supply, &demand, &cost).unwrap();
        assert!((s.cost - 775.0).abs() < 1e-9, "{}", s.cost);
    }

    #[test]
    fn marginals_hold() {
        let supply = [0.1, 0.2, 0.3, 0.4];
        let demand = [0.25, 0.25, 0.5];
        let cost = [1.0, 2.0, 3.0, 2.0, 1.0, 2.0, 3.0, 2.0, 1.0, 1.0, 1.0, 1.0];
        let s = solve_transport(&supply, &demand, &cost).unwrap();
        let mut rows = [0.0; 4];
        let mut cols = [0.0; 3];
        for &(r, c, f) in &s.flows {
            rows[r] += f;
            cols[c] += f;
        }
        for (a, b) in rows.iter().zip(supply) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in cols.iter().zip(demand) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unbalanced() {
        assert!(solve_transport(&[1.0], &[0.5], &[1.0]).is_err());
        assert!(solve_transport(&[1.0], &[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn degenerate_ties_terminate() {
        // uniform masses with many equal costs force degenerate pivots
        let n = 12;
        let supply = vec![1.0 / n as f64; n];
        let cost: Vec<f64> = (0..n * n)
            .map(|idx| {
                let (r, c) = (idx / n, idx % n);
                ((r as i64 - c as i64).abs() % 3) as f64
            })
            .collect();
        let s = solve_transport(&supply, &supply, &cost).unwrap();
        assert!(s.cost.abs() < 1e-12);
    }
}
