//! Loading directed edge lists in the SNAP text format, and the block
//! triangle thinning used to derive networks with other degree ratios.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CanonicalReport, Network, Status};
use crate::seed::rng_from_seed;

/// Directed pairs as read, with external ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawEdgeList {
    pub pairs: Vec<(u64, u64)>,
    pub comment_lines: usize,
}

pub fn read_snap_edgelist(path: impl AsRef<Path>) -> Result<RawEdgeList> {
    parse_snap_edgelist(BufReader::new(File::open(path)?))
}

/// Lines starting with `#` and blank lines are skipped; every other line
/// holds two whitespace-separated non-negative integers.
pub fn parse_snap_edgelist(reader: impl BufRead) -> Result<RawEdgeList> {
    let mut raw = RawEdgeList::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            raw.comment_lines += 1;
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let mut fields = trimmed.split_whitespace();
        let mut id = |what: &str| -> Result<u64> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("missing {what} node id"),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("invalid {what} node id `{tok}`"),
            })
        };
        let pair = (id("source")?, id("target")?);
        if let Some(extra) = fields.next() {
            return Err(Error::Parse { line: lineno, msg: format!("unexpected field `{extra}`") });
        }
        raw.pairs.push(pair);
    }
    Ok(raw)
}

/// Result of [`canonicalize`]: internal node `i` is external id `external_ids[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub network: Network,
    /// Ascending.
    pub external_ids: Vec<u64>,
    pub report: IngestReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub nodes: usize,
    pub input_pairs: usize,
    pub directed: usize,
    pub undirected: usize,
    pub self_loops: u64,
    pub duplicate_pairs: u64,
    /// Reciprocal pairs merged into one undirected edge.
    pub reciprocal_pairs: u64,
}

/// Maps external ids to `0..n` in ascending order (every id that appears
/// becomes a node, including ids seen only in self-loops) and rewrites
/// the pairs into canonical form. All nodes start uninfected.
pub fn canonicalize(raw: &RawEdgeList) -> Result<Ingested> {
    let mut ids: Vec<u64> = raw.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let internal = |x: u64| ids.binary_search(&x).expect("id collected above");
    let directed: Vec<(usize, usize)> = raw.pairs.iter().map(|&(a, b)| (internal(a), internal(b))).collect();
    let (network, rewrites): (Network, CanonicalReport) =
        Network::canonicalize(vec![Status::Uninfected; ids.len()], directed, std::iter::empty())?;
    let report = IngestReport {
        nodes: network.n(),
        input_pairs: raw.pairs.len(),
        directed: network.directed().len(),
        undirected: network.undirected().len(),
        self_loops: rewrites.loops,
        duplicate_pairs: rewrites.duplicate_directed,
        reciprocal_pairs: rewrites.antiparallel,
    };
    Ok(Ingested { network, external_ids: ids, report })
}

/// Status vector infecting the `k` nodes with the smallest external ids,
/// which after [`canonicalize`] are internal nodes `0..k`.
pub fn assign_status_prefix(net: &Network, k: usize) -> Result<Vec<Status>> {
    if k == 0 || k >= net.n() {
        return Err(Error::Input(format!(
            "number of infected nodes must lie in 1..{}, got {k}",
            net.n()
        )));
    }
    Ok((0..net.n()).map(|i| Status::from_bit(i < k)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Triangle {
    /// Entries `y_ij` with `i < j`.
    Upper,
    /// Entries `y_ij` with `i > j`.
    Lower,
}

impl Triangle {
    fn contains(self, i: usize, j: usize) -> bool {
        match self {
            Triangle::Upper => i < j,
            Triangle::Lower => i > j,
        }
    }
}

/// Removal of a share of the adjacency entries `y_ij` with
/// `(z_i, z_j) = (from, to)` lying in one triangle of the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thinning {
    pub from: Status,
    pub to: Status,
    pub triangle: Triangle,
    pub fraction: f64,
}

impl fmt::Display for Thinning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.triangle {
            Triangle::Upper => "upper",
            Triangle::Lower => "lower",
        };
        write!(f, "{},{},{t},{}", u8::from(self.from), u8::from(self.to), self.fraction)
    }
}

/// Parses `from,to,triangle,fraction`, e.g. `1,0,upper,0.9`.
impl FromStr for Thinning {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("thinning `{s}` must look like `1,0,upper,0.9`"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [from, to, triangle, fraction] = parts[..] else {
            return Err(bad());
        };
        let status = |x: &str| match x {
            "0" => Ok(Status::Uninfected),
            "1" => Ok(Status::Infected),
            _ => Err(bad()),
        };
        let triangle = match triangle.to_ascii_lowercase().as_str() {
            "upper" => Triangle::Upper,
            "lower" => Triangle::Lower,
            _ => return Err(bad()),
        };
        let t = Thinning {
            from: status(from)?,
            to: status(to)?,
            triangle,
            fraction: fraction.parse().map_err(|_| bad())?,
        };
        t.validate()?;
        Ok(t)
    }
}

impl Thinning {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.fraction) {
            return Err(Error::Input(format!(
                "thinning fraction must lie in [0, 1], got {}",
                self.fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinReport {
    /// Matching entries before removal.
    pub eligible: usize,
    pub removed: usize,
    /// Undirected edges that lost one orientation.
    pub demoted: usize,
}

/// Removes `round(fraction * count)` of the matching entries uniformly at
/// random. An undirected edge that loses one orientation survives as a
/// directed edge in the other.
pub fn thin_block_triangle(net: &Network, spec: &Thinning, seed: u64) -> Result<(Network, ThinReport)> {
    spec.validate()?;
    let matches =
        |i: usize, j: usize| spec.triangle.contains(i, j) && net.status(i) == spec.from && net.status(j) == spec.to;

    // (entry, position of the undirected edge it belongs to, if any)
    let mut eligible: Vec<((usize, usize), Option<usize>)> = Vec::new();
    for &(i, j) in net.directed() {
        if matches(i, j) {
            eligible.push(((i, j), None));
        }
    }
    for (pos, &(i, j)) in net.undirected().iter().enumerate() {
        for (a, b) in [(i, j), (j, i)] {
            if matches(a, b) {
                eligible.push(((a, b), Some(pos)));
            }
        }
    }

    let count = eligible.len();
    let remove = ((spec.fraction * count as f64).round_ties_even() as usize).min(count);
    let mut rng = rng_from_seed(seed);
    let mut drop_directed = std::collections::HashSet::new();
    let mut demote = vec![None; net.undirected().len()];
    for k in index::sample(&mut rng, count, remove) {
        match eligible[k] {
            (entry, None) => {
                drop_directed.insert(entry);
            }
            ((a, b), Some(pos)) => demote[pos] = Some((b, a)),
        }
    }

    let mut directed: Vec<(usize, usize)> =
        net.directed().iter().copied().filter(|e| !drop_directed.contains(e)).collect();
    let mut undirected = Vec::with_capacity(net.undirected().len());
    let mut demoted = 0;
    for (&edge, survivor) in net.undirected().iter().zip(&demote) {
        match survivor {
            Some(d) => {
                directed.push(*d);
                demoted += 1;
            }
            None => undirected.push(edge),
        }
    }
    let (thinned, rewrites) = Network::canonicalize(net.statuses().to_vec(), directed, undirected)?;
    debug_assert!(rewrites.is_empty());
    Ok((thinned, ThinReport { eligible: count, removed: remove, demoted }))
}
