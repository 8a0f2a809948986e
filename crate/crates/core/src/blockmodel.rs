//! Block-model networks with prescribed homophily, attractiveness and
//! activity ratios.
//!
//! The adjacency matrix is split into four status blocks. Closed-form
//! budgets give the number of adjacency entries in each block for a target
//! mean degree `lambda`, homophily `h`, attractiveness ratio `m` and activity
//! ratio `w`. A share `1 - alpha` of the entries is then turned into
//! undirected edges, and edges are placed uniformly at random so that every
//! block receives exactly its rounded budget.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num};
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Network, Status};
use crate::seed::rng_from_seed;

/// Parameters of one simulated network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub n: usize,
    pub n1: usize,
    pub lambda: f64,
    pub h: f64,
    pub m: f64,
    pub w: f64,
    pub alpha: f64,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        // n1 >= 2 keeps the within-infected block non-empty.
        if self.n1 < 2 || self.n1 >= self.n {
            return Err(Error::Input(format!(
                "need 2 <= n1 < n, got n1 = {}, n = {}",
                self.n1, self.n
            )));
        }
        for (name, v) in [("lambda", self.lambda), ("h", self.h), ("m", self.m), ("w", self.w)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Input(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Input(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        Ok(())
    }

    pub fn n0(&self) -> usize {
        self.n - self.n1
    }

    /// `N1 / N0`.
    pub fn phi(&self) -> f64 {
        self.n1 as f64 / self.n0() as f64
    }

    /// Homophily rescaled by group sizes, `h (N1 - 1) / (2 N0)`.
    pub fn scaled_homophily(&self) -> f64 {
        self.h * (self.n1 as f64 - 1.0) / (2.0 * self.n0() as f64)
    }
}

/// Real-valued target adjacency-entry counts per block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockBudgets {
    pub e11: f64,
    pub e10: f64,
    pub e01: f64,
    pub e00: f64,
}

impl BlockBudgets {
    pub fn total(&self) -> f64 {
        self.e11 + self.e10 + self.e01 + self.e00
    }

    pub fn get(&self, from: Status, to: Status) -> f64 {
        match (from, to) {
            (Status::Infected, Status::Infected) => self.e11,
            (Status::Infected, Status::Uninfected) => self.e10,
            (Status::Uninfected, Status::Infected) => self.e01,
            (Status::Uninfected, Status::Uninfected) => self.e00,
        }
    }
}

/// Budget formulas over any numeric field. Returns `[e11, e10, e01, e00]`.
pub fn block_budgets<T: Clone + Num>(n: T, n1: T, lambda: T, h: T, m: T, w: T) -> [T; 4] {
    let one = T::one();
    let two = one.clone() + one.clone();
    let n0 = n.clone() - n1.clone();
    let phi = n1.clone() / n0.clone();
    let big_h = h * (n1 - one.clone()) / (two.clone() * n0);
    let total = lambda * n;

    let share_in = one.clone() / (one.clone() + phi.clone() * m);
    let share_out = one.clone() / (one.clone() + phi * w);
    let within = one.clone() / (one.clone() + one.clone() / big_h.clone());

    let e00 = (share_in.clone() + share_out.clone() + within.clone() - one.clone())
        * (total.clone() * (big_h.clone() + one.clone()) / (two * big_h + one));
    let e11 = (total.clone() - e00.clone()) * within;
    let e10 = total.clone() * share_in - e00.clone();
    let e01 = total * share_out - e00.clone();
    [e11, e10, e01, e00]
}

/// Budgets in exact rational arithmetic, using the exact binary value of
/// each floating-point parameter.
pub fn exact_block_budgets(cfg: &ScenarioConfig) -> Result<[BigRational; 4]> {
    cfg.validate()?;
    let r = |v: f64| BigRational::from_float(v).expect("validated finite");
    let int = |v: usize| BigRational::from_integer(BigInt::from_usize(v).expect("usize fits"));
    Ok(block_budgets(
        int(cfg.n),
        int(cfg.n1),
        r(cfg.lambda),
        r(cfg.h),
        r(cfg.m),
        r(cfg.w),
    ))
}

/// Target entry counts per block; errors when a block would be negative.
pub fn target_block_edges(cfg: &ScenarioConfig) -> Result<BlockBudgets> {
    cfg.validate()?;
    let [e11, e10, e01, e00] = block_budgets(
        cfg.n as f64,
        cfg.n1 as f64,
        cfg.lambda,
        cfg.h,
        cfg.m,
        cfg.w,
    );
    for (name, v) in [("E11", e11), ("E10", e10), ("E01", e01), ("E00", e00)] {
        if v < 0.0 {
            return Err(Error::Infeasible(format!("block {name} has negative budget {v:.3}")));
        }
    }
    Ok(BlockBudgets { e11, e10, e01, e00 })
}

/// Bernoulli edge probabilities implied by the budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockProbabilities {
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
}

pub fn edge_probabilities(cfg: &ScenarioConfig, budgets: &BlockBudgets) -> Result<BlockProbabilities> {
    cfg.validate()?;
    let n1 = cfg.n1 as f64;
    let n0 = cfg.n0() as f64;
    let probs = BlockProbabilities {
        p11: budgets.e11 / (n1 * (n1 - 1.0)),
        p10: budgets.e10 / (n1 * n0),
        p01: budgets.e01 / (n1 * n0),
        p00: budgets.e00 / (n0 * (n0 - 1.0)),
    };
    for (name, p) in [("p11", probs.p11), ("p10", probs.p10), ("p01", probs.p01), ("p00", probs.p00)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Infeasible(format!("{name} = {p:.6} lies outside [0, 1]")));
        }
    }
    Ok(probs)
}

/// Directed/undirected split of the budgets, in adjacency entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeSplit {
    /// Budgets rounded half-to-even: `[e11, e10, e01, e00]`.
    pub rounded: [u64; 4],
    /// Total entries, the sum of `rounded`.
    pub te: u64,
    /// Requested directed entries, `round(alpha * te)`.
    pub de: u64,
    /// Requested undirected entries, `te - de`.
    pub ue: u64,
    /// Largest number of undirected entries the budgets can hold.
    pub pue: f64,
    /// Undirected entries per block, each even.
    pub ue11: u64,
    pub ue00: u64,
    /// Undirected entries across the two cross blocks (half in each).
    pub ue10: u64,
}

impl EdgeSplit {
    /// Directed entries actually placed once allocations are floored to even.
    pub fn directed_entries(&self) -> u64 {
        self.te - self.undirected_entries()
    }

    pub fn undirected_entries(&self) -> u64 {
        self.ue11 + self.ue00 + self.ue10
    }
}

fn round_half_even(x: f64) -> u64 {
    x.round_ties_even().max(0.0) as u64
}

fn floor_even(x: f64) -> u64 {
    let f = x.max(0.0).floor() as u64;
    f - f % 2
}

/// Splits the budgets into directed and undirected entries.
///
/// Fails with [`Error::InfeasibleAlpha`] when the requested undirected
/// entries do not fit in `e11 + e00 + 2 min(e10, e01)`.
pub fn split_directed_undirected(budgets: &BlockBudgets, alpha: f64) -> Result<EdgeSplit> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Input(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let rounded = [budgets.e11, budgets.e10, budgets.e01, budgets.e00].map(round_half_even);
    let te: u64 = rounded.iter().sum();
    let de = round_half_even(alpha * te as f64).min(te);
    let ue = te - de;
    let cross = 2.0 * budgets.e10.min(budgets.e01);
    let pue = budgets.e11 + budgets.e00 + cross;

    if ue == 0 {
        return Ok(EdgeSplit { rounded, te, de, ue, pue, ue11: 0, ue00: 0, ue10: 0 });
    }
    if pue <= ue as f64 {
        return Err(Error::InfeasibleAlpha {
            alpha,
            undirected: ue,
            possible: pue,
            min_alpha: (1.0 - pue / te as f64).max(0.0),
        });
    }
    let scale = ue as f64 / pue;
    Ok(EdgeSplit {
        rounded,
        te,
        de,
        ue,
        pue,
        ue11: floor_even(scale * budgets.e11),
        ue00: floor_even(scale * budgets.e00),
        ue10: floor_even(scale * cross),
    })
}

/// Full edge plan of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeBudget {
    pub budgets: BlockBudgets,
    pub split: EdgeSplit,
}

pub fn plan_edges(cfg: &ScenarioConfig) -> Result<EdgeBudget> {
    let budgets = target_block_edges(cfg)?;
    edge_probabilities(cfg, &budgets)?;
    let split = split_directed_undirected(&budgets, cfg.alpha)?;
    Ok(EdgeBudget { budgets, split })
}

/// Decodes the `t`-th unordered pair `(a, b)`, `a > b`, of `0..s`.
fn unordered_pair(t: u64) -> (u64, u64) {
    let mut a = ((1.0 + (1.0 + 8.0 * t as f64).sqrt()) / 2.0).floor() as u64;
    while a * (a - 1) / 2 > t {
        a -= 1;
    }
    while (a + 1) * a / 2 <= t {
        a += 1;
    }
    (a, t - a * (a - 1) / 2)
}

fn distinct_indices<R: Rng + ?Sized>(rng: &mut R, length: u64, amount: u64, block: &str) -> Result<Vec<u64>> {
    if amount > length {
        return Err(Error::Infeasible(format!(
            "block {block} needs {amount} node pairs but only {length} exist"
        )));
    }
    let length = usize::try_from(length)
        .map_err(|_| Error::Infeasible(format!("block {block} is too large to index")))?;
    Ok(index::sample(rng, length, amount as usize)
        .into_iter()
        .map(|i| i as u64)
        .collect())
}

/// Places edges within a single-status block whose nodes are `offset..offset + size`.
fn place_within<R: Rng + ?Sized>(
    rng: &mut R,
    offset: usize,
    size: usize,
    undirected_edges: u64,
    directed_entries: u64,
    block: &str,
    directed: &mut Vec<(usize, usize)>,
    undirected: &mut Vec<(usize, usize)>,
) -> Result<()> {
    let pairs = (size as u64) * (size as u64).saturating_sub(1) / 2;
    let picks = distinct_indices(rng, pairs, undirected_edges + directed_entries, block)?;
    for (k, t) in picks.into_iter().enumerate() {
        let (a, b) = unordered_pair(t);
        let (a, b) = (offset + a as usize, offset + b as usize);
        if (k as u64) < undirected_edges {
            undirected.push((b, a));
        } else if rng.random::<bool>() {
            directed.push((a, b));
        } else {
            directed.push((b, a));
        }
    }
    Ok(())
}

/// Generates the block-model network of a scenario. Nodes `0..n1` are
/// infected. Every block receives exactly its rounded budget of adjacency
/// entries; no pair of nodes carries more than one edge.
pub fn generate_block_network(cfg: &ScenarioConfig) -> Result<Network> {
    let plan = plan_edges(cfg)?;
    let split = &plan.split;
    let [r11, r10, r01, r00] = split.rounded;
    let (n1, n0) = (cfg.n1, cfg.n0());
    let mut rng = rng_from_seed(cfg.seed);
    let mut directed = Vec::with_capacity(split.directed_entries() as usize);
    let mut undirected = Vec::with_capacity(split.undirected_entries() as usize / 2);

    place_within(&mut rng, 0, n1, split.ue11 / 2, r11 - split.ue11, "11", &mut directed, &mut undirected)?;
    place_within(&mut rng, n1, n0, split.ue00 / 2, r00 - split.ue00, "00", &mut directed, &mut undirected)?;

    // Cross blocks share the infected-uninfected pairs.
    let und_cross = split.ue10 / 2;
    let d10 = r10 - und_cross;
    let d01 = r01 - und_cross;
    let pairs = (n1 as u64) * (n0 as u64);
    let picks = distinct_indices(&mut rng, pairs, und_cross + d10 + d01, "10/01")?;
    for (k, t) in picks.into_iter().enumerate() {
        let k = k as u64;
        let i = (t / n0 as u64) as usize;
        let j = n1 + (t % n0 as u64) as usize;
        if k < und_cross {
            undirected.push((i, j));
        } else if k < und_cross + d10 {
            directed.push((i, j));
        } else {
            directed.push((j, i));
        }
    }

    let status = (0..cfg.n).map(|i| Status::from_bit(i < n1)).collect();
    Network::new(status, directed, undirected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{block_edge_counts, network_stats};
    use num_traits::ToPrimitive;

    fn base() -> ScenarioConfig {
        ScenarioConfig { n: 1500, n1: 300, lambda: 10.0, h: 1.0, m: 1.0, w: 1.0, alpha: 0.2, seed: 7 }
    }

    /// Direct evaluation of the budget formulas in exact rationals, written
    /// independently of `block_budgets`.
    fn oracle(cfg: &ScenarioConfig) -> [f64; 4] {
        let q = |v: f64| BigRational::from_float(v).unwrap();
        let n = q(cfg.n as f64);
        let n1 = q(cfg.n1 as f64);
        let n0 = &n - &n1;
        let one = q(1.0);
        let phi = &n1 / &n0;
        let hh = q(cfg.h) * (&n1 - &one) / (q(2.0) * &n0);
        let ln = q(cfg.lambda) * &n;
        let a = &one / (&one + &phi * q(cfg.m));
        let b = &one / (&one + &phi * q(cfg.w));
        let c = &hh / (&hh + &one);
        let e00 = (&a + &b + &c - &one) * &ln * (&hh + &one) / (q(2.0) * &hh + &one);
        let e11 = (&ln - &e00) * &hh / (&hh + &one);
        let e10 = &ln * &a - &e00;
        let e01 = &ln * &b - &e00;
        [e11, e10, e01, e00].map(|v| v.to_f64().unwrap())
    }

    #[test]
    fn unit_scenario_budgets() {
        let b = target_block_edges(&base()).unwrap();
        let o = oracle(&base());
        for (got, want) in [b.e11, b.e10, b.e01, b.e00].iter().zip(o) {
            assert!((got - want).abs() < 1e-9 * want, "{got} vs {want}");
        }
        // Exact values: 9598.3989..., 598.3989..., 2401.6010...
        assert!((b.e00 - 9598.3989).abs() < 1e-4, "{}", b.e00);
        assert!((b.e11 - 598.3989).abs() < 1e-4, "{}", b.e11);
        assert!((b.e10 - 2401.6010).abs() < 1e-4, "{}", b.e10);
        assert_eq!(b.e10, b.e01);
        assert!((b.total() - 15000.0).abs() < 1e-9);
    }

    #[test]
    fn budgets_match_oracle_on_asymmetric_cell() {
        let cfg = ScenarioConfig { h: 5.0, m: 2.0, w: 0.8, ..base() };
        let b = target_block_edges(&cfg).unwrap();
        let o = oracle(&cfg);
        for (got, want) in [b.e11, b.e10, b.e01, b.e00].iter().zip(o) {
            assert!((got - want).abs() < 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn exact_identity_and_symmetry() {
        for (m, w) in [(0.8, 2.0), (1.0, 1.0), (2.0, 0.8)] {
            let cfg = ScenarioConfig { m, w, h: 5.0, ..base() };
            let [e11, e10, e01, e00] = exact_block_budgets(&cfg).unwrap();
            let lambda_n = BigRational::from_float(cfg.lambda).unwrap() * BigRational::from_float(1500.0).unwrap();
            assert_eq!(&e11 + &e10 + &e01 + &e00, lambda_n);
            if m == w {
                assert_eq!(e10, e01);
            }
        }
    }

    #[test]
    fn probabilities() {
        let cfg = base();
        let b = target_block_edges(&cfg).unwrap();
        let p = edge_probabilities(&cfg, &b).unwrap();
        assert!((p.p00 - b.e00 / (1200.0 * 1199.0)).abs() < 1e-15);
        let zero = BlockBudgets { e11: 0.0, ..b };
        assert_eq!(edge_probabilities(&cfg, &zero).unwrap().p11, 0.0);
        let over = BlockBudgets { e11: 300.0 * 299.0 + 1.0, ..b };
        assert!(matches!(edge_probabilities(&cfg, &over), Err(Error::Infeasible(_))));
    }

    #[test]
    fn negative_budget_is_infeasible() {
        // Very strong homophily with m > w pushes E10 below zero.
        let cfg = ScenarioConfig { h: 500.0, m: 2.0, w: 0.1, ..base() };
        assert!(matches!(target_block_edges(&cfg), Err(Error::Infeasible(_))));
    }

    #[test]
    fn split_examples() {
        let b = target_block_edges(&base()).unwrap();
        let all_directed = split_directed_undirected(&b, 1.0).unwrap();
        assert_eq!((all_directed.ue, all_directed.undirected_entries()), (0, 0));

        let s = split_directed_undirected(&b, 0.2).unwrap();
        assert_eq!(s.te, 15000);
        assert_eq!(s.ue, 12000);
        assert!((s.pue - 15000.0).abs() < 0.01);
        let scale = 12000.0 / s.pue;
        assert_eq!(s.ue11, floor_even(scale * b.e11));
        assert_eq!(s.ue00, floor_even(scale * b.e00));
        assert_eq!(s.ue10, floor_even(scale * 2.0 * b.e10));
        assert!(s.ue11 % 2 == 0 && s.ue00 % 2 == 0 && s.ue10 % 2 == 0);

        let skew = target_block_edges(&ScenarioConfig { h: 5.0, m: 2.0, w: 0.8, ..base() }).unwrap();
        match split_directed_undirected(&skew, 0.0) {
            Err(Error::InfeasibleAlpha { min_alpha, .. }) => {
                assert!(min_alpha > 0.0);
                // The reported minimum is (just about) feasible.
                assert!(split_directed_undirected(&skew, min_alpha + 1e-3).is_ok());
            }
            other => panic!("expected infeasible alpha, got {other:?}"),
        }
    }

    #[test]
    fn pair_decoding_is_a_bijection() {
        let s = 9u64;
        let mut seen = std::collections::BTreeSet::new();
        for t in 0..s * (s - 1) / 2 {
            let (a, b) = unordered_pair(t);
            assert!(a < s && b < a);
            assert!(seen.insert((a, b)));
        }
        assert_eq!(unordered_pair(1_000_000_000), unordered_pair(1_000_000_000));
        let (a, b) = unordered_pair(1_000_000_000);
        assert_eq!(a * (a - 1) / 2 + b, 1_000_000_000);
    }

    #[test]
    fn realized_counts_match_rounded_budgets() {
        for cfg in [base(), ScenarioConfig { h: 5.0, m: 2.0, w: 0.8, alpha: 0.8, seed: 3, ..base() }] {
            let plan = plan_edges(&cfg).unwrap();
            let net = generate_block_network(&cfg).unwrap();
            let c = block_edge_counts(&net);
            assert_eq!([c.e11, c.e10, c.e01, c.e00], plan.split.rounded);
            assert_eq!(net.adjacency_entries() as u64, plan.split.te);
            assert_eq!(2 * net.undirected().len() as u64, plan.split.undirected_entries());
            let alpha = network_stats(&net).alpha.unwrap();
            assert!((alpha - cfg.alpha).abs() < 1e-3, "{alpha}");
        }
    }

    #[test]
    fn asymmetric_cell_hits_targets() {
        let cfg = ScenarioConfig { h: 5.0, m: 2.0, w: 0.8, ..base() };
        let s = network_stats(&generate_block_network(&cfg).unwrap());
        assert!((s.h.unwrap() - 5.0).abs() <= 0.75);
        assert!((s.m.unwrap() - 2.0).abs() <= 0.2);
        assert!((s.w.unwrap() - 0.8).abs() <= 0.08);
        assert!((s.alpha.unwrap() - 0.2).abs() <= 0.02);
    }

    #[test]
    fn deterministic_and_capacity_checked() {
        let cfg = base();
        assert_eq!(generate_block_network(&cfg).unwrap(), generate_block_network(&cfg).unwrap());
        let other = generate_block_network(&ScenarioConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(other, generate_block_network(&cfg).unwrap());

        // Dense tiny network: budgets exceed the distinct pairs available.
        let dense = ScenarioConfig { n: 6, n1: 2, lambda: 4.5, h: 1.0, m: 1.0, w: 1.0, alpha: 1.0, seed: 1 };
        assert!(matches!(generate_block_network(&dense), Err(Error::Infeasible(_))));
    }

    #[test]
    fn homophily_monotone_over_grid() {
        for m in [0.8, 1.0, 2.0] {
            for w in [0.8, 1.0, 2.0] {
                let lo = target_block_edges(&ScenarioConfig { m, w, h: 1.0, ..base() }).unwrap();
                let hi = target_block_edges(&ScenarioConfig { m, w, h: 5.0, ..base() }).unwrap();
                assert!(hi.e11 > lo.e11);
            }
        }
    }
}
