//! Attributed configuration model (ACM) for partially directed networks.
//!
//! Each node carries six stub counts, split by direction (incoming,
//! outgoing, undirected) and by the status of the node at the other end.
//! Generation draws the stub counts, pairs compatible stubs uniformly at
//! random, and simplifies the resulting multigraph.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CanonicalReport, Network, Status};

/// Stub counts of one node. `in_k` counts incoming stubs from status-`k`
/// nodes, `out_k` outgoing stubs toward status `k`, `und_k` undirected
/// stubs shared with status `k`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DegreeVector {
    pub in1: u32,
    pub in0: u32,
    pub out1: u32,
    pub out0: u32,
    pub und1: u32,
    pub und0: u32,
}

impl DegreeVector {
    pub fn new(components: [u32; 6]) -> Self {
        let [in1, in0, out1, out0, und1, und0] = components;
        DegreeVector { in1, in0, out1, out0, und1, und0 }
    }

    pub fn components(&self) -> [u32; 6] {
        [self.in1, self.in0, self.out1, self.out0, self.und1, self.und0]
    }

    pub fn incoming(&self, from: Status) -> u32 {
        match from {
            Status::Infected => self.in1,
            Status::Uninfected => self.in0,
        }
    }

    pub fn outgoing(&self, to: Status) -> u32 {
        match to {
            Status::Infected => self.out1,
            Status::Uninfected => self.out0,
        }
    }

    pub fn undirected(&self, with: Status) -> u32 {
        match with {
            Status::Infected => self.und1,
            Status::Uninfected => self.und0,
        }
    }

    fn incoming_mut(&mut self, from: Status) -> &mut u32 {
        match from {
            Status::Infected => &mut self.in1,
            Status::Uninfected => &mut self.in0,
        }
    }

    fn outgoing_mut(&mut self, to: Status) -> &mut u32 {
        match to {
            Status::Infected => &mut self.out1,
            Status::Uninfected => &mut self.out0,
        }
    }

    fn undirected_mut(&mut self, with: Status) -> &mut u32 {
        match with {
            Status::Infected => &mut self.und1,
            Status::Uninfected => &mut self.und0,
        }
    }

    pub fn total(&self) -> u64 {
        self.components().iter().map(|&c| u64::from(c)).sum()
    }
}

/// Expected stub counts for one status, same component order as [`DegreeVector`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanVector {
    pub in1: f64,
    pub in0: f64,
    pub out1: f64,
    pub out0: f64,
    pub und1: f64,
    pub und0: f64,
}

impl MeanVector {
    pub fn new(components: [f64; 6]) -> Self {
        let [in1, in0, out1, out0, und1, und0] = components;
        MeanVector { in1, in0, out1, out0, und1, und0 }
    }

    pub fn components(&self) -> [f64; 6] {
        [self.in1, self.in0, self.out1, self.out0, self.und1, self.und0]
    }
}

/// Joint law of the stub counts, per status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DegreeDistributionSpec {
    /// Six independent Poisson counts per status.
    Poisson {
        infected: MeanVector,
        uninfected: MeanVector,
    },
}

impl DegreeDistributionSpec {
    pub fn poisson(infected: [f64; 6], uninfected: [f64; 6]) -> Self {
        DegreeDistributionSpec::Poisson {
            infected: MeanVector::new(infected),
            uninfected: MeanVector::new(uninfected),
        }
    }

    pub fn means(&self, status: Status) -> MeanVector {
        match self {
            DegreeDistributionSpec::Poisson { infected, uninfected } => match status {
                Status::Infected => *infected,
                Status::Uninfected => *uninfected,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        for s in Status::BOTH {
            if let Some(bad) = self
                .means(s)
                .components()
                .into_iter()
                .find(|m| !m.is_finite() || *m < 0.0)
            {
                return Err(Error::Input(format!(
                    "degree means must be finite and non-negative, got {bad} for status {}",
                    s as u8
                )));
            }
        }
        Ok(())
    }

    /// Probability of the stub vector `d` for a node of status `status`.
    pub fn pmf(&self, status: Status, d: &DegreeVector) -> f64 {
        match self {
            DegreeDistributionSpec::Poisson { .. } => self
                .means(status)
                .components()
                .iter()
                .zip(d.components())
                .map(|(&mean, k)| poisson_pmf(mean, k))
                .product(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, status: Status, rng: &mut R) -> DegreeVector {
        match self {
            DegreeDistributionSpec::Poisson { .. } => {
                let means = self.means(status).components();
                let mut out = [0u32; 6];
                for (slot, mean) in out.iter_mut().zip(means) {
                    *slot = if mean > 0.0 {
                        Poisson::new(mean).expect("validated mean").sample(rng) as u32
                    } else {
                        0
                    };
                }
                DegreeVector::new(out)
            }
        }
    }
}

fn poisson_pmf(mean: f64, k: u32) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let ln_fact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
    (k as f64 * mean.ln() - mean - ln_fact).exp()
}

/// One violated mean-balance condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub condition: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

/// Checks the mean-balance conditions under which the empirical degree
/// distribution of the ACM converges to the target law, for a fixed ratio
/// `phi = N1 / N0`. Returns every violated equality; empty means pass.
pub fn check_mean_compatibility(
    spec: &DegreeDistributionSpec,
    phi: f64,
    tol: f64,
) -> Result<Vec<Violation>> {
    spec.validate()?;
    if !(phi.is_finite() && phi > 0.0) {
        return Err(Error::Input(format!("phi must be positive, got {phi}")));
    }
    let one = spec.means(Status::Infected);
    let zero = spec.means(Status::Uninfected);
    let conditions = [
        ("delta(1->1) = delta(1<-1)", one.out1, one.in1),
        ("delta(0->0) = delta(0<-0)", zero.out0, zero.in0),
        ("delta(0->1) = phi * delta(1<-0)", zero.out1, phi * one.in0),
        ("delta(0<-1) = phi * delta(1->0)", zero.in1, phi * one.out0),
        ("delta(0<->1) = phi * delta(1<->0)", zero.und1, phi * one.und0),
    ];
    Ok(conditions
        .into_iter()
        .filter(|&(_, lhs, rhs)| (lhs - rhs).abs() > tol * lhs.abs().max(rhs.abs()))
        .map(|(condition, lhs, rhs)| Violation { condition, lhs, rhs })
        .collect())
}

/// Draws every node's stub vector independently from its status law.
pub fn draw_degrees<R: Rng + ?Sized>(
    spec: &DegreeDistributionSpec,
    statuses: &[Status],
    rng: &mut R,
) -> Vec<DegreeVector> {
    statuses.iter().map(|&s| spec.sample(s, rng)).collect()
}

/// Multigraph produced by stub pairing, before simplification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StubMultigraph {
    pub status: Vec<Status>,
    pub directed: Vec<(usize, usize)>,
    pub undirected: Vec<(usize, usize)>,
    /// Unpaired stubs, summed per node status.
    pub leftover: [DegreeVector; 2],
}

impl From<&Network> for StubMultigraph {
    fn from(net: &Network) -> Self {
        StubMultigraph {
            status: net.statuses().to_vec(),
            directed: net.directed().to_vec(),
            undirected: net.undirected().to_vec(),
            leftover: [DegreeVector::default(); 2],
        }
    }
}

impl StubMultigraph {
    pub fn leftover_total(&self) -> u64 {
        self.leftover.iter().map(DegreeVector::total).sum()
    }
}

/// Draws a stub uniformly from whichever of `pools` are still connectable.
/// Returns (pool index, node owning the stub).
fn take_uniform<R: Rng + ?Sized>(pools: &mut [Vec<usize>], eligible: &[usize], rng: &mut R) -> Option<(usize, usize)> {
    let total: usize = eligible.iter().map(|&p| pools[p].len()).sum();
    if total == 0 {
        return None;
    }
    let mut r = rng.random_range(0..total);
    for &p in eligible {
        let len = pools[p].len();
        if r < len {
            return Some((p, pools[p].swap_remove(r)));
        }
        r -= len;
    }
    unreachable!("index within total")
}

fn take_from<R: Rng + ?Sized>(pool: &mut Vec<usize>, rng: &mut R) -> usize {
    let idx = rng.random_range(0..pool.len());
    pool.swap_remove(idx)
}

/// Pairs stubs into a multigraph.
///
/// Undirected stubs of status-`s` nodes toward status `t` pair with
/// undirected stubs of status-`t` nodes toward `s`. Incoming stubs of
/// status-`s` nodes from `t` pair with outgoing stubs of status-`t` nodes
/// toward `s`. At each step an undirected (resp. incoming) stub is chosen
/// uniformly among those that still have a partner available, then a
/// partner is chosen uniformly. Unpairable stubs are left over.
pub fn pair_stubs<R: Rng + ?Sized>(
    degrees: &[DegreeVector],
    statuses: &[Status],
    rng: &mut R,
) -> Result<StubMultigraph> {
    if degrees.len() != statuses.len() {
        return Err(Error::Input(format!(
            "{} degree vectors for {} nodes",
            degrees.len(),
            statuses.len()
        )));
    }
    // Pool index: 2 * node status + other-end status.
    let pool = |s: Status, t: Status| 2 * s.index() + t.index();
    let mut und: Vec<Vec<usize>> = vec![Vec::new(); 4];
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); 4];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); 4];
    for (i, (d, &s)) in degrees.iter().zip(statuses).enumerate() {
        for t in Status::BOTH {
            und[pool(s, t)].extend(std::iter::repeat_n(i, d.undirected(t) as usize));
            inc[pool(s, t)].extend(std::iter::repeat_n(i, d.incoming(t) as usize));
            out[pool(s, t)].extend(std::iter::repeat_n(i, d.outgoing(t) as usize));
        }
    }
    // Pool p = 2s + t pairs with pool 2t + s.
    let partner = |p: usize| 2 * (p % 2) + p / 2;

    let mut undirected = Vec::new();
    loop {
        let eligible: Vec<usize> = (0..4)
            .filter(|&p| {
                let q = partner(p);
                if p == q {
                    und[p].len() >= 2
                } else {
                    !und[p].is_empty() && !und[q].is_empty()
                }
            })
            .collect();
        let Some((p, a)) = take_uniform(&mut und, &eligible, rng) else {
            break;
        };
        let b = take_from(&mut und[partner(p)], rng);
        undirected.push((a, b));
    }

    let mut directed = Vec::new();
    loop {
        let eligible: Vec<usize> = (0..4)
            .filter(|&p| !inc[p].is_empty() && !out[partner(p)].is_empty())
            .collect();
        let Some((p, target)) = take_uniform(&mut inc, &eligible, rng) else {
            break;
        };
        let source = take_from(&mut out[partner(p)], rng);
        directed.push((source, target));
    }

    let mut leftover = [DegreeVector::default(); 2];
    for s in Status::BOTH {
        for t in Status::BOTH {
            let lo = &mut leftover[s.index()];
            *lo.undirected_mut(t) = und[pool(s, t)].len() as u32;
            *lo.incoming_mut(t) = inc[pool(s, t)].len() as u32;
            *lo.outgoing_mut(t) = out[pool(s, t)].len() as u32;
        }
    }

    Ok(StubMultigraph {
        status: statuses.to_vec(),
        directed,
        undirected,
        leftover,
    })
}

/// What simplification removed or rewrote.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplificationReport {
    #[serde(flatten)]
    pub edges: CanonicalReport,
    pub leftover_stubs: u64,
}

impl SimplificationReport {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.leftover_stubs == 0
    }
}

/// Removes loops, collapses parallel edges, and turns anti-parallel or
/// mixed directed/undirected pairs into single undirected edges.
pub fn simplify(g: &StubMultigraph) -> (Network, SimplificationReport) {
    let (net, edges) = Network::canonicalize(
        g.status.clone(),
        g.directed.iter().copied(),
        g.undirected.iter().copied(),
    )
    .expect("stub pairing only produces in-range node ids");
    (
        net,
        SimplificationReport {
            edges,
            leftover_stubs: g.leftover_total(),
        },
    )
}

/// Output of [`generate_acm`].
#[derive(Debug, Clone)]
pub struct AcmNetwork {
    pub network: Network,
    pub report: SimplificationReport,
    /// Stub vectors as drawn, before pairing.
    pub drawn: Vec<DegreeVector>,
}

/// Generates an ACM network: the first `n1` nodes are infected, the rest
/// uninfected; stub counts are drawn, paired and simplified.
pub fn generate_acm<R: Rng + ?Sized>(
    spec: &DegreeDistributionSpec,
    n: usize,
    n1: usize,
    rng: &mut R,
) -> Result<AcmNetwork> {
    spec.validate()?;
    if n1 == 0 || n1 >= n {
        return Err(Error::Input(format!("need 0 < n1 < n, got n1 = {n1}, n = {n}")));
    }
    let statuses: Vec<Status> = (0..n).map(|i| Status::from_bit(i < n1)).collect();
    let drawn = draw_degrees(spec, &statuses, rng);
    let multigraph = pair_stubs(&drawn, &statuses, rng)?;
    let (network, report) = simplify(&multigraph);
    Ok(AcmNetwork { network, report, drawn })
}

/// Realized six-component degree of every node of a simple network.
pub fn realized_degrees(net: &Network) -> Vec<DegreeVector> {
    let mut out = vec![DegreeVector::default(); net.n()];
    for &(i, j) in net.directed() {
        *out[i].outgoing_mut(net.status(j)) += 1;
        *out[j].incoming_mut(net.status(i)) += 1;
    }
    for &(i, j) in net.undirected() {
        *out[i].undirected_mut(net.status(j)) += 1;
        *out[j].undirected_mut(net.status(i)) += 1;
    }
    out
}

/// Share of status-`status` nodes having each realized degree vector.
pub fn empirical_degree_distribution(
    net: &Network,
    status: Status,
) -> Result<BTreeMap<DegreeVector, f64>> {
    let degrees = realized_degrees(net);
    let mut counts: BTreeMap<DegreeVector, usize> = BTreeMap::new();
    let mut group = 0usize;
    for (i, d) in degrees.into_iter().enumerate() {
        if net.status(i) == status {
            *counts.entry(d).or_default() += 1;
            group += 1;
        }
    }
    if group == 0 {
        return Err(Error::StatsUndefined("empirical degree distribution of an empty status group"));
    }
    Ok(counts
        .into_iter()
        .map(|(d, c)| (d, c as f64 / group as f64))
        .collect())
}

/// Total-variation distance between an empirical distribution and the
/// target law of `status` nodes, using the exact target probabilities.
pub fn total_variation(
    empirical: &BTreeMap<DegreeVector, f64>,
    spec: &DegreeDistributionSpec,
    status: Status,
) -> f64 {
    let mut covered = 0.0;
    let mut diff = 0.0;
    for (d, &p_hat) in empirical {
        let p = spec.pmf(status, d);
        covered += p;
        diff += (p_hat - p).abs();
    }
    0.5 * (diff + (1.0 - covered).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::three_node;
    use crate::seed::rng_from_seed;
    use proptest::prelude::*;
    use Status::{Infected as I, Uninfected as U};

    fn compatible() -> DegreeDistributionSpec {
        DegreeDistributionSpec::poisson([1.0, 2.0, 1.0, 2.0, 1.0, 2.0], [0.5, 1.0, 0.5, 1.0, 0.5, 1.0])
    }

    #[test]
    fn compatibility_examples() {
        // delta(0->1) = 1, delta(1<-0) = 4, everything else balanced.
        let spec = DegreeDistributionSpec::poisson([1.0, 4.0, 1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        assert!(check_mean_compatibility(&spec, 0.25, 1e-9).unwrap().is_empty());

        let spec = DegreeDistributionSpec::poisson([1.0, 1.0, 1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        let v = check_mean_compatibility(&spec, 0.25, 1e-9).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].condition, "delta(0->1) = phi * delta(1<-0)");
        assert_eq!((v[0].lhs, v[0].rhs), (1.0, 0.25));

        let zeros = DegreeDistributionSpec::poisson([0.0; 6], [0.0; 6]);
        assert!(check_mean_compatibility(&zeros, 0.25, 1e-9).unwrap().is_empty());
        assert!(check_mean_compatibility(&compatible(), 0.25, 1e-12).unwrap().is_empty());

        let bad = DegreeDistributionSpec::poisson([f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0; 6]);
        assert!(matches!(check_mean_compatibility(&bad, 0.25, 1e-9), Err(Error::Input(_))));
    }

    #[test]
    fn draw_degrees_examples() {
        let statuses = [I, U, I, U, I];
        let zeros = DegreeDistributionSpec::poisson([0.0; 6], [0.0; 6]);
        let mut rng = rng_from_seed(1);
        assert!(draw_degrees(&zeros, &statuses, &mut rng)
            .iter()
            .all(|d| *d == DegreeVector::default()));

        let und_only = DegreeDistributionSpec::poisson([0.0, 0.0, 0.0, 0.0, 2.0, 0.0], [0.0; 6]);
        let drawn = draw_degrees(&und_only, &[I; 200], &mut rng);
        assert!(drawn.iter().all(|d| d.components()[..4] == [0; 4] && d.und0 == 0));
        assert!(drawn.iter().any(|d| d.und1 > 0));

        let spec = compatible();
        let a = draw_degrees(&spec, &statuses.repeat(2), &mut rng_from_seed(9));
        let b = draw_degrees(&spec, &statuses.repeat(2), &mut rng_from_seed(9));
        assert_eq!(a, b);
    }

    #[test]
    fn forced_undirected_pairing() {
        let d = DegreeVector { und1: 1, ..Default::default() };
        let g = pair_stubs(&[d, d], &[I, I], &mut rng_from_seed(3)).unwrap();
        assert_eq!(g.undirected.len(), 1);
        let (a, b) = g.undirected[0];
        assert_eq!((a.min(b), a.max(b)), (0, 1));
        assert_eq!(g.leftover_total(), 0);
    }

    #[test]
    fn lone_node_forms_a_loop() {
        let d = DegreeVector { und1: 2, ..Default::default() };
        let g = pair_stubs(&[d], &[I], &mut rng_from_seed(3)).unwrap();
        assert_eq!(g.undirected, vec![(0, 0)]);
        let (net, rep) = simplify(&g);
        assert_eq!(net.in_degree(0).unwrap(), 0);
        assert_eq!(rep.edges.loops, 1);
    }

    #[test]
    fn directed_pool_exhaustion() {
        // Node 0 (infected) wants 3 incoming stubs from infected nodes; only
        // node 1 offers one outgoing stub toward infected.
        let d0 = DegreeVector { in1: 3, ..Default::default() };
        let d1 = DegreeVector { out1: 1, ..Default::default() };
        let g = pair_stubs(&[d0, d1], &[I, I], &mut rng_from_seed(5)).unwrap();
        assert_eq!(g.directed, vec![(1, 0)]);
        assert_eq!(g.leftover[1].in1, 2);
        assert_eq!(g.leftover_total(), 2);
    }

    #[test]
    fn cross_status_pools_pair_with_each_other() {
        // Infected node 0: undirected toward uninfected, outgoing toward uninfected.
        // Uninfected node 1: undirected toward infected, incoming from infected.
        let d0 = DegreeVector { und0: 1, out0: 1, ..Default::default() };
        let d1 = DegreeVector { und1: 1, in1: 1, ..Default::default() };
        let g = pair_stubs(&[d0, d1], &[I, U], &mut rng_from_seed(5)).unwrap();
        assert_eq!(g.directed, vec![(0, 1)]);
        assert_eq!(g.undirected.len(), 1);
        assert_eq!(g.leftover_total(), 0);
        // Mixed pair collapses to one undirected edge.
        let (net, rep) = simplify(&g);
        assert_eq!(net.undirected(), &[(0, 1)]);
        assert!(net.directed().is_empty());
        assert_eq!(rep.edges.mixed, 1);
    }

    #[test]
    fn simplify_examples() {
        let g = StubMultigraph {
            status: vec![I, U, U],
            directed: vec![(0, 1), (1, 0)],
            undirected: vec![(2, 2)],
            leftover: [DegreeVector::default(); 2],
        };
        let (net, rep) = simplify(&g);
        assert_eq!(net.undirected(), &[(0, 1)]);
        assert!(net.directed().is_empty());
        assert_eq!(rep.edges.antiparallel, 1);
        assert_eq!(rep.edges.loops, 1);

        let simple = three_node();
        let (again, rep) = simplify(&StubMultigraph::from(&simple));
        assert_eq!(again, simple);
        assert!(rep.is_empty());
    }

    #[test]
    fn generate_examples() {
        let zeros = DegreeDistributionSpec::poisson([0.0; 6], [0.0; 6]);
        let out = generate_acm(&zeros, 10, 3, &mut rng_from_seed(1)).unwrap();
        assert_eq!(out.network.adjacency_entries(), 0);
        assert!(generate_acm(&zeros, 10, 0, &mut rng_from_seed(1)).is_err());
        assert!(generate_acm(&zeros, 10, 10, &mut rng_from_seed(1)).is_err());

        let spec = compatible();
        let a = generate_acm(&spec, 1500, 300, &mut rng_from_seed(11)).unwrap();
        let b = generate_acm(&spec, 1500, 300, &mut rng_from_seed(11)).unwrap();
        assert_eq!(a.network.to_json(), b.network.to_json());
        for s in Status::BOTH {
            let means = spec.means(s).components();
            let group: Vec<_> = a
                .drawn
                .iter()
                .zip(a.network.statuses())
                .filter(|(_, &z)| z == s)
                .map(|(d, _)| d.components())
                .collect();
            for (c, &target) in means.iter().enumerate() {
                let mean = group.iter().map(|d| f64::from(d[c])).sum::<f64>() / group.len() as f64;
                assert!((mean - target).abs() <= 0.1 * target, "status {s:?} component {c}: {mean} vs {target}");
            }
        }

        // Incompatible means still generate.
        let skew = DegreeDistributionSpec::poisson([1.0, 5.0, 1.0, 0.1, 0.0, 3.0], [0.1, 1.0, 0.1, 1.0, 0.1, 0.0]);
        assert!(!check_mean_compatibility(&skew, 0.25, 0.01).unwrap().is_empty());
        assert!(generate_acm(&skew, 500, 100, &mut rng_from_seed(2)).is_ok());
    }

    #[test]
    fn empirical_distribution_examples() {
        let empty = Network::empty(vec![I, U, I]);
        let dist = empirical_degree_distribution(&empty, I).unwrap();
        assert_eq!(dist.len(), 1);
        assert_eq!(dist[&DegreeVector::default()], 1.0);

        let dist = empirical_degree_distribution(&three_node(), I).unwrap();
        // Node 0: in from node 2 (uninfected), out to node 1 (infected).
        // Node 1: in from node 0 (infected), undirected with node 2 (uninfected).
        let expected: BTreeMap<_, _> = [
            (DegreeVector::new([0, 1, 1, 0, 0, 0]), 0.5),
            (DegreeVector::new([1, 0, 0, 0, 0, 1]), 0.5),
        ]
        .into_iter()
        .collect();
        assert_eq!(dist, expected);

        assert!(empirical_degree_distribution(&Network::empty(vec![U, U]), I).is_err());
    }

    #[test]
    fn poisson_pmf_sums_to_one() {
        let total: f64 = (0..60).map(|k| poisson_pmf(3.5, k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(poisson_pmf(0.0, 0), 1.0);
        assert_eq!(poisson_pmf(0.0, 2), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn pairing_conservation_and_simplification(
            seed in any::<u64>(),
            n in 2usize..40,
            n1_frac in 0.1f64..0.9,
        ) {
            let n1 = ((n as f64 * n1_frac) as usize).clamp(1, n - 1);
            let spec = compatible();
            let mut rng = rng_from_seed(seed);
            let statuses: Vec<Status> = (0..n).map(|i| Status::from_bit(i < n1)).collect();
            let drawn = draw_degrees(&spec, &statuses, &mut rng);
            let g = pair_stubs(&drawn, &statuses, &mut rng).unwrap();

            // Every stub is either paired or left over.
            let drawn_total: u64 = drawn.iter().map(DegreeVector::total).sum();
            prop_assert_eq!(drawn_total, 2 * (g.directed.len() + g.undirected.len()) as u64 + g.leftover_total());

            // Cross pools: leftovers equal the pool-size difference.
            let sum = |s: Status, f: &dyn Fn(&DegreeVector) -> u32| -> i64 {
                drawn.iter().zip(&statuses).filter(|(_, &z)| z == s).map(|(d, _)| i64::from(f(d))).sum()
            };
            let und10 = sum(I, &|d| d.und0);
            let und01 = sum(U, &|d| d.und1);
            prop_assert_eq!(i64::from(g.leftover[1].und0 + g.leftover[0].und1), (und10 - und01).abs());
            let in1_from0 = sum(I, &|d| d.in0);
            let out0_to1 = sum(U, &|d| d.out1);
            prop_assert_eq!(i64::from(g.leftover[1].in0 + g.leftover[0].out1), (in1_from0 - out0_to1).abs());
            // Within pools leave at most one undirected stub.
            prop_assert!(g.leftover[1].und1 <= 1 && g.leftover[0].und0 <= 1);

            let (net, _) = simplify(&g);
            let (again, rep) = simplify(&StubMultigraph::from(&net));
            prop_assert_eq!(&again, &net);
            prop_assert!(rep.is_empty());

            // Simplification never adds degree. Anti-parallel and mixed
            // pairs move stubs from the directed to the undirected
            // components, so the bound holds on directed components and on
            // total in/out degree.
            for (i, (real, d)) in realized_degrees(&net).iter().zip(&drawn).enumerate() {
                for s in Status::BOTH {
                    prop_assert!(real.incoming(s) <= d.incoming(s), "node {}", i);
                    prop_assert!(real.outgoing(s) <= d.outgoing(s), "node {}", i);
                }
                let d_in = d.in1 + d.in0 + d.und1 + d.und0;
                let d_out = d.out1 + d.out0 + d.und1 + d.und0;
                prop_assert!(net.in_degree(i).unwrap() as u32 <= d_in);
                prop_assert!(net.out_degree(i).unwrap() as u32 <= d_out);
            }
        }
    }
}
