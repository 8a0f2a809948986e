use std::collections::VecDeque;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Recruiter, SampleRecord, SamplerKind};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::seed::{rng_from_seed, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RdsParams {
    pub seeds: usize,
    pub coupons: usize,
}

impl Default for RdsParams {
    fn default() -> Self {
        RdsParams { seeds: 10, coupons: 2 }
    }
}

impl RdsParams {
    pub fn validate(&self) -> Result<()> {
        if self.seeds == 0 || self.coupons == 0 {
            return Err(Error::Input(format!(
                "RDS needs at least one seed and one coupon, got {} and {}",
                self.seeds, self.coupons
            )));
        }
        Ok(())
    }
}

/// Coupon referral from `n_seeds` uniform seeds. Recruitment is
/// breadth-first; each recruit refers up to `n_coupons` of its unsampled
/// contacts (out-neighbours and undirected neighbours), chosen uniformly.
/// When no referral is possible before `target_n`, a new seed is drawn
/// uniformly among the unsampled nodes.
pub fn rds_sample(
    net: &Network,
    target_n: usize,
    n_seeds: usize,
    n_coupons: usize,
    seed: u64,
) -> Result<SampleRecord> {
    RdsParams { seeds: n_seeds, coupons: n_coupons }.validate()?;
    check_size(net, target_n)?;
    let mut rng = rng_from_seed(seed);
    let seeds: Vec<usize> = index::sample(&mut rng, net.n(), n_seeds.min(target_n)).into_vec();
    recruit(net, target_n, &seeds, n_coupons, seed, rng)
}

/// [`rds_sample`] with fixed seeds.
pub fn rds_sample_from_seeds(
    net: &Network,
    target_n: usize,
    seeds: &[usize],
    n_coupons: usize,
    seed: u64,
) -> Result<SampleRecord> {
    RdsParams { seeds: seeds.len(), coupons: n_coupons }.validate()?;
    check_size(net, target_n)?;
    let mut seen = vec![false; net.n()];
    for &s in seeds {
        if s >= net.n() {
            return Err(Error::NodeOutOfRange { id: s, n: net.n() });
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::Input(format!("seed {s} listed twice")));
        }
    }
    let seeds = &seeds[..seeds.len().min(target_n)];
    recruit(net, target_n, seeds, n_coupons, seed, rng_from_seed(seed))
}

fn check_size(net: &Network, target_n: usize) -> Result<()> {
    if target_n > net.n() {
        return Err(Error::Input(format!(
            "sample size {target_n} exceeds population {}",
            net.n()
        )));
    }
    Ok(())
}

fn recruit(
    net: &Network,
    target_n: usize,
    seeds: &[usize],
    n_coupons: usize,
    seed: u64,
    mut rng: SimRng,
) -> Result<SampleRecord> {
    let mut sampled = vec![false; net.n()];
    let mut nodes = Vec::with_capacity(target_n);
    let mut recruiter = Vec::with_capacity(target_n);
    let mut frontier = VecDeque::new();
    for &s in seeds {
        sampled[s] = true;
        nodes.push(s);
        recruiter.push(Recruiter::Seed);
        frontier.push_back(s);
    }
    let mut restarts = 0;

    while nodes.len() < target_n {
        let Some(v) = frontier.pop_front() else {
            let pool: Vec<usize> = (0..net.n()).filter(|&i| !sampled[i]).collect();
            let s = pool[rng.random_range(0..pool.len())];
            restarts += 1;
            log::debug!("RDS frontier empty after {} recruits; reseeding at node {s}", nodes.len());
            sampled[s] = true;
            nodes.push(s);
            recruiter.push(Recruiter::Seed);
            frontier.push_back(s);
            continue;
        };
        let open: Vec<usize> = net.contacts(v).filter(|&j| !sampled[j]).collect();
        let take = n_coupons.min(open.len()).min(target_n - nodes.len());
        for k in index::sample(&mut rng, open.len(), take) {
            let j = open[k];
            sampled[j] = true;
            nodes.push(j);
            recruiter.push(Recruiter::Node(v));
            frontier.push_back(j);
        }
    }

    Ok(SampleRecord {
        sampler: SamplerKind::Rds,
        seed,
        target_n,
        nodes,
        recruiter: Some(recruiter),
        restarts,
    })
}
