//! Partially directed networks with a binary node status.
//!
//! A [`Network`] holds a set of one-way edges and a set of reciprocated
//! (undirected) edges over dense node ids `0..n`. The adjacency entry
//! `y_ij` is 1 when `(i, j)` is a directed edge or `{i, j}` is an undirected
//! edge. Networks are always kept in canonical form: no loops, no duplicates,
//! and no pair of nodes carrying more than one edge. Anti-parallel directed
//! pairs are represented as a single undirected edge.

mod io;
mod stats;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use stats::{
    activity_ratio, attractiveness_ratio, block_edge_counts, edge_ratio_in, homophily,
    network_stats, EdgeBlockCounts, InRatios, NetworkStats,
};

/// Infection status of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Status {
    Uninfected = 0,
    Infected = 1,
}

impl Status {
    pub const BOTH: [Status; 2] = [Status::Uninfected, Status::Infected];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_bit(infected: bool) -> Self {
        if infected {
            Status::Infected
        } else {
            Status::Uninfected
        }
    }

    #[inline]
    pub fn is_infected(self) -> bool {
        self == Status::Infected
    }
}

impl From<Status> for u8 {
    fn from(s: Status) -> u8 {
        s as u8
    }
}

impl TryFrom<u8> for Status {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Status::Uninfected),
            1 => Ok(Status::Infected),
            other => Err(format!("status must be 0 or 1, got {other}")),
        }
    }
}

/// Counts of the rewrites applied while bringing an arbitrary edge
/// collection into canonical form.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalReport {
    pub loops: u64,
    pub duplicate_directed: u64,
    pub duplicate_undirected: u64,
    /// Pairs `(i, j)`, `(j, i)` both present as directed, merged into one undirected edge.
    pub antiparallel: u64,
    /// Directed entries dropped because the pair already carries an undirected edge.
    pub mixed: u64,
}

impl CanonicalReport {
    pub fn is_empty(&self) -> bool {
        *self == CanonicalReport::default()
    }
}

/// Immutable partially directed network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    status: Vec<Status>,
    directed: Vec<(usize, usize)>,
    undirected: Vec<(usize, usize)>,
    out_directed: Vec<Vec<usize>>,
    in_directed: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
}

impl Network {
    /// Builds a network from edge lists that must already be canonical.
    ///
    /// Undirected pairs may be given in either orientation. Anything that
    /// would need rewriting (loops, duplicates, anti-parallel or mixed pairs)
    /// is rejected.
    pub fn new(
        status: Vec<Status>,
        directed: Vec<(usize, usize)>,
        undirected: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = status.len();
        let check = |&(i, j): &(usize, usize)| -> Result<()> {
            for id in [i, j] {
                if id >= n {
                    return Err(Error::NodeOutOfRange { id, n });
                }
            }
            if i == j {
                return Err(Error::NotCanonical(format!("self-loop on node {i}")));
            }
            Ok(())
        };
        let mut und: BTreeSet<(usize, usize)> = BTreeSet::new();
        for e in &undirected {
            check(e)?;
            let key = (e.0.min(e.1), e.0.max(e.1));
            if !und.insert(key) {
                return Err(Error::NotCanonical(format!(
                    "duplicate undirected edge {{{}, {}}}",
                    key.0, key.1
                )));
            }
        }
        let mut dir: BTreeSet<(usize, usize)> = BTreeSet::new();
        for e in &directed {
            check(e)?;
            if !dir.insert(*e) {
                return Err(Error::NotCanonical(format!(
                    "duplicate directed edge ({}, {})",
                    e.0, e.1
                )));
            }
        }
        for &(i, j) in &dir {
            if dir.contains(&(j, i)) {
                return Err(Error::NotCanonical(format!(
                    "anti-parallel directed pair ({i}, {j}) and ({j}, {i})"
                )));
            }
            if und.contains(&(i.min(j), i.max(j))) {
                return Err(Error::NotCanonical(format!(
                    "pair ({i}, {j}) is both directed and undirected"
                )));
            }
        }
        Ok(Self::from_sorted(
            status,
            dir.into_iter().collect(),
            und.into_iter().collect(),
        ))
    }

    /// Builds a network from arbitrary edge lists, rewriting them into
    /// canonical form and reporting what was changed.
    pub fn canonicalize<D, U>(status: Vec<Status>, directed: D, undirected: U) -> Result<(Self, CanonicalReport)>
    where
        D: IntoIterator<Item = (usize, usize)>,
        U: IntoIterator<Item = (usize, usize)>,
    {
        let n = status.len();
        let mut report = CanonicalReport::default();
        let in_range = |i: usize| -> Result<()> {
            if i >= n {
                Err(Error::NodeOutOfRange { id: i, n })
            } else {
                Ok(())
            }
        };

        let mut und: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (i, j) in undirected {
            in_range(i)?;
            in_range(j)?;
            if i == j {
                report.loops += 1;
            } else if !und.insert((i.min(j), i.max(j))) {
                report.duplicate_undirected += 1;
            }
        }

        let mut dir: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (i, j) in directed {
            in_range(i)?;
            in_range(j)?;
            if i == j {
                report.loops += 1;
            } else if !dir.insert((i, j)) {
                report.duplicate_directed += 1;
            }
        }

        // Group directed entries by unordered pair.
        let mut by_pair: BTreeMap<(usize, usize), u8> = BTreeMap::new();
        for &(i, j) in &dir {
            *by_pair.entry((i.min(j), i.max(j))).or_default() += 1;
        }
        let mut kept = Vec::with_capacity(dir.len());
        let mut promoted = Vec::new();
        for (&pair, &count) in &by_pair {
            if und.contains(&pair) {
                report.mixed += u64::from(count);
            } else if count == 2 {
                report.antiparallel += 1;
                promoted.push(pair);
            }
        }
        for &(i, j) in &dir {
            let pair = (i.min(j), i.max(j));
            if !und.contains(&pair) && by_pair[&pair] == 1 {
                kept.push((i, j));
            }
        }
        und.extend(promoted);

        Ok((Self::from_sorted(status, kept, und.into_iter().collect()), report))
    }

    /// `directed` and `undirected` must be sorted, canonical and in range.
    fn from_sorted(
        status: Vec<Status>,
        directed: Vec<(usize, usize)>,
        undirected: Vec<(usize, usize)>,
    ) -> Self {
        let n = status.len();
        let mut out_directed = vec![Vec::new(); n];
        let mut in_directed = vec![Vec::new(); n];
        let mut neighbors = vec![Vec::new(); n];
        for &(i, j) in &directed {
            out_directed[i].push(j);
            in_directed[j].push(i);
        }
        for &(i, j) in &undirected {
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        for list in in_directed.iter_mut().chain(neighbors.iter_mut()) {
            list.sort_unstable();
        }
        Network {
            status,
            directed,
            undirected,
            out_directed,
            in_directed,
            neighbors,
        }
    }

    /// Network with `n` nodes of the given statuses and no edges.
    pub fn empty(status: Vec<Status>) -> Self {
        Self::from_sorted(status, Vec::new(), Vec::new())
    }

    /// Same edges, new statuses.
    pub fn with_status(&self, status: Vec<Status>) -> Result<Self> {
        if status.len() != self.n() {
            return Err(Error::Input(format!(
                "status vector has length {} but network has {} nodes",
                status.len(),
                self.n()
            )));
        }
        Ok(Self::from_sorted(
            status,
            self.directed.clone(),
            self.undirected.clone(),
        ))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.status.len()
    }

    #[inline]
    pub fn status(&self, i: usize) -> Status {
        self.status[i]
    }

    pub fn statuses(&self) -> &[Status] {
        &self.status
    }

    /// Number of nodes with the given status.
    pub fn count_status(&self, k: Status) -> usize {
        self.status.iter().filter(|&&s| s == k).count()
    }

    /// Sorted directed edges `(from, to)`.
    pub fn directed(&self) -> &[(usize, usize)] {
        &self.directed
    }

    /// Sorted undirected edges `(i, j)` with `i < j`.
    pub fn undirected(&self) -> &[(usize, usize)] {
        &self.undirected
    }

    /// Number of non-zero adjacency entries, counting each undirected edge twice.
    pub fn adjacency_entries(&self) -> usize {
        self.directed.len() + 2 * self.undirected.len()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { id: i, n: self.n() })
        }
    }

    pub fn in_degree(&self, i: usize) -> Result<usize> {
        self.check(i)?;
        Ok(self.in_directed[i].len() + self.neighbors[i].len())
    }

    pub fn out_degree(&self, i: usize) -> Result<usize> {
        self.check(i)?;
        Ok(self.out_directed[i].len() + self.neighbors[i].len())
    }

    /// Incoming plus undirected connections of `i` whose other end has status `k`.
    pub fn partial_in_degree(&self, i: usize, k: Status) -> Result<usize> {
        self.check(i)?;
        Ok(self.partial_in_unchecked(i, k))
    }

    fn partial_in_unchecked(&self, i: usize, k: Status) -> usize {
        self.in_directed[i]
            .iter()
            .chain(&self.neighbors[i])
            .filter(|&&j| self.status[j] == k)
            .count()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        (0..self.n())
            .map(|i| self.in_directed[i].len() + self.neighbors[i].len())
            .collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.n())
            .map(|i| self.out_directed[i].len() + self.neighbors[i].len())
            .collect()
    }

    /// Partial in-degrees of every node from status `k`.
    pub fn partial_in_degrees(&self, k: Status) -> Vec<usize> {
        (0..self.n()).map(|i| self.partial_in_unchecked(i, k)).collect()
    }

    /// Directed successors of `i`.
    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_directed[i]
    }

    /// Directed predecessors of `i`.
    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_directed[i]
    }

    /// Undirected neighbors of `i`.
    pub fn undirected_neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Nodes `i` can reach in one step: directed successors and undirected neighbors.
    pub fn contacts(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_directed[i]
            .iter()
            .chain(&self.neighbors[i])
            .copied()
    }

    /// `y_ij` of the implied adjacency matrix.
    pub fn has_entry(&self, i: usize, j: usize) -> bool {
        self.out_directed[i].binary_search(&j).is_ok()
            || self.neighbors[i].binary_search(&j).is_ok()
    }
}
