#![allow(dead_code)]

use std::collections::BTreeMap;
use std::io::Write;

use rdslab::estimators::{estimate_inclusion, mare, InclusionEstimate, Mare};
use rdslab::experiment::{cell_seed, draw_replicates};
use rdslab::samplers::{PreparedSampler, SamplerKind, SamplerParams};
use rdslab::Network;

/// One line per criterion, written past the test harness's output capture.
pub fn verdict(id: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let line = format!("[criterion {id:>2}] {tag} {detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
}

pub struct Comparison {
    pub pi: BTreeMap<SamplerKind, InclusionEstimate>,
    pub mare: BTreeMap<SamplerKind, Mare>,
}

/// Inclusion probabilities of every sampler at one size, and each
/// approximation's error against RDS.
pub fn compare(net: &Network, size: usize, rds_reps: usize, reps: usize, base: u64) -> Comparison {
    let params = SamplerParams::default();
    let mut pi = BTreeMap::new();
    for kind in SamplerKind::ALL {
        let sampler = PreparedSampler::new(net, kind, &params).unwrap();
        let r = if kind == SamplerKind::Rds { rds_reps } else { reps };
        let records = draw_replicates(&sampler, size, r, cell_seed(base, 0, kind, size)).unwrap();
        pi.insert(kind, estimate_inclusion(&records, net.n()).unwrap());
    }
    let mare = SamplerKind::APPROXIMATIONS
        .into_iter()
        .map(|k| (k, mare(&pi[&k], &pi[&SamplerKind::Rds]).unwrap()))
        .collect();
    Comparison { pi, mare }
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}
