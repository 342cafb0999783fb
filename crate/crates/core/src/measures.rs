//! The three α-lazy random-walk measures attached to each node.
//!
//! Every measure keeps mass `alpha` at its base node and spreads the
//! remaining `1 - alpha` over the base node's neighbors:
//!
//! * [`MeasureKind::EqualNodes`]: uniformly over neighbors (a walk on the
//!   unweighted clique expansion).
//! * [`MeasureKind::EqualEdges`]: pick a non-singleton incident edge
//!   uniformly, then a node of it other than the base uniformly.
//! * [`MeasureKind::WeightedEdges`]: pick an incident edge with
//!   probability proportional to `|e| - 1`, then a node of it uniformly
//!   (a walk on the weighted clique expansion).

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "en")]
    EqualNodes,
    #[serde(rename = "ee")]
    EqualEdges,
    #[serde(rename = "we")]
    WeightedEdges,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [Self::EqualNodes, Self::EqualEdges, Self::WeightedEdges];

    pub fn short_name(self) -> &'static str {
        match self {
            Self::EqualNodes => "en",
            Self::EqualEdges => "ee",
            Self::WeightedEdges => "we",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MeasureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "en" | "equal-nodes" => Ok(Self::EqualNodes),
            "ee" | "equal-edges" => Ok(Self::EqualEdges),
            "we" | "weighted-edges" => Ok(Self::WeightedEdges),
            other => Err(format!("unknown measure '{other}' (expected en, ee or we)")),
        }
    }
}

/// A finitely supported probability measure attached to a base node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparseMeasure {
    #[serde(rename = "node")]
    pub base: usize,
    pub support: Vec<usize>,
    #[serde(rename = "mass")]
    pub masses: Vec<f64>,
}

impl SparseMeasure {
    pub fn dirac(node: usize) -> Self {
        Self {
            base: node,
            support: vec![node],
            masses: vec![1.0],
        }
    }

    /// Builds a measure from unsorted `(node, mass)` atoms, merging repeats
    /// and dropping zero masses.
    pub fn from_atoms(base: usize, mut atoms: Vec<(usize, f64)>) -> Self {
        atoms.sort_unstable_by_key(|a| a.0);
        let mut support = Vec::with_capacity(atoms.len());
        let mut masses: Vec<f64> = Vec::with_capacity(atoms.len());
        for (v, m) in atoms {
            if support.last() == Some(&v) {
                *masses.last_mut().unwrap() += m;
            } else {
                support.push(v);
                masses.push(m);
            }
        }
        let keep: Vec<bool> = masses.iter().map(|&m| m > 0.0).collect();
        let mut k = keep.iter();
        support.retain(|_| *k.next().unwrap());
        masses.retain(|&m| m > 0.0);
        Self {
            base,
            support,
            masses,
        }
    }

    pub fn mass_at(&self, node: usize) -> f64 {
        self.support
            .binary_search(&node)
            .map_or(0.0, |idx| self.masses[idx])
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.support.iter().copied().zip(self.masses.iter().copied())
    }

    /// L1 distance between two measures.
    pub fn l1_distance(&self, other: &SparseMeasure) -> f64 {
        let (mut a, mut b) = (0, 0);
        let mut total = 0.0;
        while a < self.support.len() || b < other.support.len() {
            let na = self.support.get(a).copied().unwrap_or(usize::MAX);
            let nb = other.support.get(b).copied().unwrap_or(usize::MAX);
            if na == nb {
                total += (self.masses[a] - other.masses[b]).abs();
                a += 1;
                b += 1;
            } else if na < nb {
                total += self.masses[a];
                a += 1;
            } else {
                total += other.masses[b];
                b += 1;
            }
        }
        total
    }

    pub fn total_variation(&self, other: &SparseMeasure) -> f64 {
        0.5 * self.l1_distance(other)
    }
}

/// Arithmetic the measure formulas need; implemented for `f64` and exact
/// rationals.
pub trait Mass:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + PartialEq
{
    fn from_count(n: usize) -> Self;
}

impl Mass for f64 {
    fn from_count(n: usize) -> Self {
        n as f64
    }
}

impl Mass for Ratio<i64> {
    fn from_count(n: usize) -> Self {
        Ratio::from_integer(n as i64)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// Distribution of the moving mass of node `i` over its neighbors, summing
/// to one. `None` when `i` has nowhere to move.
fn moving_weights<T: Mass>(h: &Hypergraph, i: usize, kind: MeasureKind) -> Option<Vec<(usize, T)>> {
    let neighbors = h.neighbors(i);
    if neighbors.is_empty() {
        return None;
    }
    let zero = T::from_count(0);
    let one = T::from_count(1);
    let mut weights = vec![zero; neighbors.len()];
    let slot = |j: usize| neighbors.binary_search(&j).expect("edge member is a neighbor");

    match kind {
        MeasureKind::EqualNodes => {
            let share = one / T::from_count(neighbors.len());
            weights.iter_mut().for_each(|w| *w = share);
        }
        MeasureKind::EqualEdges => {
            let proper = h
                .incident_edges(i)
                .iter()
                .filter(|&&e| h.edge(e).len() >= 2)
                .count();
            let pick_edge = one / T::from_count(proper);
            for &e in h.incident_edges(i) {
                let members = h.edge(e);
                if members.len() < 2 {
                    continue;
                }
                let pick_node = pick_edge / T::from_count(members.len() - 1);
                for &j in members.iter().filter(|&&j| j != i) {
                    let k = slot(j);
                    weights[k] = weights[k] + pick_node;
                }
            }
        }
        MeasureKind::WeightedEdges => {
            let total: usize = h
                .incident_edges(i)
                .iter()
                .map(|&e| h.edge(e).len() - 1)
                .sum();
            let unit = one / T::from_count(total);
            for &e in h.incident_edges(i) {
                for &j in h.edge(e).iter().filter(|&&j| j != i) {
                    let k = slot(j);
                    weights[k] = weights[k] + unit;
                }
            }
        }
    }
    Some(neighbors.iter().copied().zip(weights).collect())
}

/// Builds the α-lazy measure of `kind` at node `i`.
pub fn build_measure(h: &Hypergraph, i: usize, kind: MeasureKind, alpha: f64) -> Result<SparseMeasure> {
    h.check_node(i)?;
    check_alpha(alpha)?;
    if alpha == 1.0 {
        return Ok(SparseMeasure::dirac(i));
    }
    let moving = moving_weights::<f64>(h, i, kind).ok_or(Error::IsolatedNode(i))?;
    let mut atoms: Vec<(usize, f64)> = moving
        .into_iter()
        .map(|(j, w)| (j, (1.0 - alpha) * w))
        .collect();
    if alpha > 0.0 {
        atoms.push((i, alpha));
    }
    Ok(SparseMeasure::from_atoms(i, atoms))
}

/// Exact-rational counterpart of [`build_measure`], sorted by node.
pub fn build_measure_exact(
    h: &Hypergraph,
    i: usize,
    kind: MeasureKind,
    alpha: Ratio<i64>,
) -> Result<Vec<(usize, Ratio<i64>)>> {
    h.check_node(i)?;
    let zero = Ratio::from_integer(0);
    let one = Ratio::from_integer(1);
    if alpha < zero || alpha > one {
        return Err(Error::InvalidAlpha(*alpha.numer() as f64 / *alpha.denom() as f64));
    }
    if alpha == one {
        return Ok(vec![(i, one)]);
    }
    let moving = moving_weights::<Ratio<i64>>(h, i, kind).ok_or(Error::IsolatedNode(i))?;
    let mut atoms: Vec<(usize, Ratio<i64>)> = moving
        .into_iter()
        .map(|(j, w)| (j, (one - alpha) * w))
        .collect();
    if alpha > zero {
        atoms.push((i, alpha));
    }
    atoms.sort_unstable_by_key(|a| a.0);
    Ok(atoms)
}

/// One measure per node; `None` rows mark isolated nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureMatrix {
    pub kind: MeasureKind,
    pub alpha: f64,
    pub rows: Vec<Option<SparseMeasure>>,
}

impl MeasureMatrix {
    pub fn row(&self, i: usize) -> Result<&SparseMeasure> {
        self.rows
            .get(i)
            .ok_or(Error::InvalidNode(i))?
            .as_ref()
            .ok_or(Error::IsolatedNode(i))
    }

    pub fn isolated(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_none())
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn measure_matrix(h: &Hypergraph, kind: MeasureKind, alpha: f64) -> Result<MeasureMatrix> {
    check_alpha(alpha)?;
    let rows = (0..h.node_count())
        .into_par_iter()
        .map(|i| match build_measure(h, i, kind, alpha) {
            Ok(m) => Ok(Some(m)),
            Err(Error::IsolatedNode(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureMatrix { kind, alpha, rows })
}
