use serde::{Deserialize, Serialize};

use super::{Network, Status};
use crate::error::{Error, Result};

/// Adjacency-entry counts between status blocks.
///
/// `e_kl` counts ordered pairs `(i, j)` with `y_ij = 1`, `z_i = k`, `z_j = l`.
/// An undirected edge contributes one entry in each direction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeBlockCounts {
    pub e11: u64,
    pub e10: u64,
    pub e01: u64,
    pub e00: u64,
}

impl EdgeBlockCounts {
    pub fn get(&self, from: Status, to: Status) -> u64 {
        match (from, to) {
            (Status::Infected, Status::Infected) => self.e11,
            (Status::Infected, Status::Uninfected) => self.e10,
            (Status::Uninfected, Status::Infected) => self.e01,
            (Status::Uninfected, Status::Uninfected) => self.e00,
        }
    }

    fn slot(&mut self, from: Status, to: Status) -> &mut u64 {
        match (from, to) {
            (Status::Infected, Status::Infected) => &mut self.e11,
            (Status::Infected, Status::Uninfected) => &mut self.e10,
            (Status::Uninfected, Status::Infected) => &mut self.e01,
            (Status::Uninfected, Status::Uninfected) => &mut self.e00,
        }
    }

    pub fn total(&self) -> u64 {
        self.e11 + self.e10 + self.e01 + self.e00
    }
}

pub fn block_edge_counts(net: &Network) -> EdgeBlockCounts {
    let mut c = EdgeBlockCounts::default();
    for &(i, j) in net.directed() {
        *c.slot(net.status(i), net.status(j)) += 1;
    }
    for &(i, j) in net.undirected() {
        *c.slot(net.status(i), net.status(j)) += 1;
        *c.slot(net.status(j), net.status(i)) += 1;
    }
    c
}

/// Share of the entries pointing into status `toward` that start at status `from`.
pub fn edge_ratio_in(counts: &EdgeBlockCounts, toward: Status, from: Status) -> Result<f64> {
    let denom = counts.get(Status::Uninfected, toward) + counts.get(Status::Infected, toward);
    if denom == 0 {
        return Err(Error::DegenerateBlock(toward as u8));
    }
    Ok(counts.get(from, toward) as f64 / denom as f64)
}

/// The four incoming-edge ratios, indexed `[toward][from]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InRatios(pub [[f64; 2]; 2]);

impl InRatios {
    pub fn from_counts(counts: &EdgeBlockCounts) -> Result<Self> {
        let mut r = [[0.0; 2]; 2];
        for toward in Status::BOTH {
            for from in Status::BOTH {
                r[toward.index()][from.index()] = edge_ratio_in(counts, toward, from)?;
            }
        }
        Ok(InRatios(r))
    }

    /// Like [`InRatios::from_counts`], but a status that receives no entries
    /// gets an even split instead of an error.
    pub fn from_counts_or_even(counts: &EdgeBlockCounts) -> Self {
        let mut r = [[0.5; 2]; 2];
        for toward in Status::BOTH {
            for from in Status::BOTH {
                if let Ok(v) = edge_ratio_in(counts, toward, from) {
                    r[toward.index()][from.index()] = v;
                }
            }
        }
        InRatios(r)
    }

    #[inline]
    pub fn get(&self, toward: Status, from: Status) -> f64 {
        self.0[toward.index()][from.index()]
    }

    /// Each row must be a probability vector.
    pub fn validate(&self) -> Result<()> {
        for row in &self.0 {
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) || (row[0] + row[1] - 1.0).abs() > 1e-9 {
                return Err(Error::Input(format!(
                    "incoming ratios must be non-negative and sum to 1 per status, got {row:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Summary statistics of a network. Ratios that are undefined for the
/// network (empty status group, zero denominator) are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub h: Option<f64>,
    pub m: Option<f64>,
    pub w: Option<f64>,
    pub alpha: Option<f64>,
    pub lambda: f64,
    pub mu: f64,
}

fn group_sizes(net: &Network) -> (f64, f64) {
    let n1 = net.count_status(Status::Infected);
    (n1 as f64, (net.n() - n1) as f64)
}

/// Within-infected edge density over cross-status edge density.
pub fn homophily(net: &Network) -> Result<f64> {
    let (n1, n0) = group_sizes(net);
    let c = block_edge_counts(net);
    let cross = (c.e10 + c.e01) as f64;
    if n1 < 2.0 || n0 < 1.0 || cross == 0.0 {
        return Err(Error::StatsUndefined("h"));
    }
    let within = c.e11 as f64 / (n1 * (n1 - 1.0));
    Ok(within / (cross / (2.0 * n1 * n0)))
}

fn group_mean_ratio(net: &Network, degrees: &[usize], name: &'static str) -> Result<f64> {
    let mut sum = [0.0f64; 2];
    let mut count = [0.0f64; 2];
    for (i, &d) in degrees.iter().enumerate() {
        let k = net.status(i).index();
        sum[k] += d as f64;
        count[k] += 1.0;
    }
    if count[0] == 0.0 || count[1] == 0.0 || sum[0] == 0.0 {
        return Err(Error::StatsUndefined(name));
    }
    Ok((sum[1] / count[1]) / (sum[0] / count[0]))
}

/// Mean in-degree of infected nodes over that of uninfected nodes.
pub fn attractiveness_ratio(net: &Network) -> Result<f64> {
    group_mean_ratio(net, &net.in_degrees(), "m")
}

/// Mean out-degree of infected nodes over that of uninfected nodes.
pub fn activity_ratio(net: &Network) -> Result<f64> {
    group_mean_ratio(net, &net.out_degrees(), "w")
}

pub fn network_stats(net: &Network) -> NetworkStats {
    let entries = net.adjacency_entries();
    let n = net.n().max(1) as f64;
    NetworkStats {
        h: homophily(net).ok(),
        m: attractiveness_ratio(net).ok(),
        w: activity_ratio(net).ok(),
        alpha: (entries > 0).then(|| net.directed().len() as f64 / entries as f64),
        lambda: entries as f64 / n,
        mu: net.count_status(Status::Infected) as f64 / n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::three_node;
    use proptest::prelude::*;
    use Status::{Infected as I, Uninfected as U};

    #[test]
    fn block_counts_examples() {
        let c = block_edge_counts(&three_node());
        assert_eq!(c, EdgeBlockCounts { e11: 1, e10: 1, e01: 2, e00: 0 });

        let all_inf = Network::new(vec![I, I], vec![], vec![(0, 1)]).unwrap();
        assert_eq!(
            block_edge_counts(&all_inf),
            EdgeBlockCounts { e11: 2, ..Default::default() }
        );
        assert_eq!(block_edge_counts(&Network::empty(vec![I, U])), EdgeBlockCounts::default());
    }

    #[test]
    fn ratio_examples() {
        let c = EdgeBlockCounts { e11: 1, e10: 1, e01: 2, e00: 0 };
        assert!((edge_ratio_in(&c, I, I).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(edge_ratio_in(&c, U, I).unwrap(), 1.0);
        let single = EdgeBlockCounts { e11: 4, ..Default::default() };
        assert_eq!(edge_ratio_in(&single, I, I).unwrap(), 1.0);
        assert!(matches!(edge_ratio_in(&single, U, I), Err(Error::DegenerateBlock(0))));
    }

    #[test]
    fn stats_undefined_and_unit_homophily() {
        // Only within-infected edges: no cross density.
        let net = Network::new(vec![I, I, U], vec![(0, 1)], vec![]).unwrap();
        assert!(matches!(homophily(&net), Err(Error::StatsUndefined("h"))));
        assert!(network_stats(&net).h.is_none());

        // Two infected, two uninfected. Within-infected density 1/2 (1 of 2
        // ordered pairs); cross density 4/8.
        let net = Network::new(vec![I, I, U, U], vec![(0, 1), (0, 2), (3, 0), (1, 2), (3, 1)], vec![])
            .unwrap();
        assert!((homophily(&net).unwrap() - 1.0).abs() < 1e-12);
        let s = network_stats(&net);
        assert_eq!(s.alpha, Some(1.0));
        assert_eq!(s.lambda, 5.0 / 4.0);
        assert_eq!(s.mu, 0.5);
    }

    fn arb_network(max_n: usize) -> impl Strategy<Value = Network> {
        (2..=max_n).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec((0..n, 0..n), 0..3 * n),
                proptest::collection::vec((0..n, 0..n), 0..2 * n),
            )
                .prop_map(|(z, d, u)| {
                    let status = z.into_iter().map(Status::from_bit).collect();
                    Network::canonicalize(status, d, u).unwrap().0
                })
        })
    }

    proptest! {
        #[test]
        fn degree_sums_match_entries(net in arb_network(30)) {
            let total = net.adjacency_entries();
            prop_assert_eq!(net.in_degrees().iter().sum::<usize>(), total);
            prop_assert_eq!(net.out_degrees().iter().sum::<usize>(), total);
            prop_assert_eq!(block_edge_counts(&net).total() as usize, total);
        }

        #[test]
        fn partial_in_degrees_sum_to_in_degree(net in arb_network(30)) {
            for i in 0..net.n() {
                let split = net.partial_in_degree(i, I).unwrap() + net.partial_in_degree(i, U).unwrap();
                prop_assert_eq!(split, net.in_degree(i).unwrap());
            }
        }

        #[test]
        fn block_counts_match_dense_adjacency(net in arb_network(50)) {
            let n = net.n();
            let mut dense = vec![vec![0u8; n]; n];
            for &(i, j) in net.directed() { dense[i][j] = 1; }
            for &(i, j) in net.undirected() { dense[i][j] = 1; dense[j][i] = 1; }
            let z: Vec<u64> = net.statuses().iter().map(|s| s.index() as u64).collect();
            let mut e = [[0u64; 2]; 2];
            for i in 0..n {
                for j in 0..n {
                    let y = u64::from(dense[i][j]);
                    e[1][1] += y * z[i] * z[j];
                    e[1][0] += y * z[i] * (1 - z[j]);
                    e[0][1] += y * (1 - z[i]) * z[j];
                    e[0][0] += y * (1 - z[i]) * (1 - z[j]);
                }
            }
            let c = block_edge_counts(&net);
            prop_assert_eq!([c.e11, c.e10, c.e01, c.e00], [e[1][1], e[1][0], e[0][1], e[0][0]]);
        }

        #[test]
        fn stub_sums_balance(net in arb_network(30)) {
            // Read stub counts off the edges and check the group balance identities.
            let z = |i: usize| net.status(i).index();
            let mut out_stubs = [[0u64; 2]; 2]; // [node status][target status]
            let mut in_stubs = [[0u64; 2]; 2]; // [node status][origin status]
            let mut und_stubs = [[0u64; 2]; 2]; // [node status][neighbor status]
            for &(i, j) in net.directed() {
                out_stubs[z(i)][z(j)] += 1;
                in_stubs[z(j)][z(i)] += 1;
            }
            for &(i, j) in net.undirected() {
                und_stubs[z(i)][z(j)] += 1;
                und_stubs[z(j)][z(i)] += 1;
            }
            prop_assert_eq!(und_stubs[0][1], und_stubs[1][0]);
            prop_assert_eq!(und_stubs[0][0] % 2, 0);
            prop_assert_eq!(und_stubs[1][1] % 2, 0);
            for k in 0..2 {
                for l in 0..2 {
                    prop_assert_eq!(out_stubs[k][l], in_stubs[l][k]);
                }
            }
        }

        #[test]
        fn canonical_rejects_antiparallel(n in 2usize..10, i in 0usize..10, j in 0usize..10) {
            prop_assume!(i < n && j < n && i != j);
            let status = vec![U; n];
            prop_assert!(Network::new(status, vec![(i, j), (j, i)], vec![]).is_err());
        }
    }
}
