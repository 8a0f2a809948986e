//! Sampling processes over a fixed network.
//!
//! * [`rds_sample`]: respondent-driven sampling by coupon referral.
//! * [`wrpi_sample`]: independent draws proportional to in-degree.
//! * [`ss_in_sample`], [`ss_pi_sample`], [`ss_pa_sample`]: successive
//!   sampling (without replacement, proportional to size) with unit sizes
//!   equal to the in-degree, the partial in-degree from the previous
//!   recruit's status, or its approximation through edge-block ratios.
//!
//! Every sampler is a pure function of the network, its parameters and a
//! 64-bit seed.

mod fenwick;
mod rds;
mod successive;
mod wrpi;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{InRatios, Network};

pub use rds::{rds_sample, rds_sample_from_seeds, RdsParams};
pub use successive::{
    ss_in_sample, ss_pa_sample, ss_pi_sample, FirstDraw, StepWeights, SuccessiveOptions,
    SuccessiveSampler, UnitSizes,
};
pub use wrpi::{wrpi_sample, WrpiSampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SamplerKind {
    #[serde(rename = "RDS")]
    Rds,
    #[serde(rename = "WRPI")]
    Wrpi,
    #[serde(rename = "SS_IN")]
    SsIn,
    #[serde(rename = "SS_PI")]
    SsPi,
    #[serde(rename = "SS_PA")]
    SsPa,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 5] = [
        SamplerKind::Rds,
        SamplerKind::Wrpi,
        SamplerKind::SsIn,
        SamplerKind::SsPi,
        SamplerKind::SsPa,
    ];

    /// The four approximations of RDS.
    pub const APPROXIMATIONS: [SamplerKind; 4] = [
        SamplerKind::Wrpi,
        SamplerKind::SsIn,
        SamplerKind::SsPi,
        SamplerKind::SsPa,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SamplerKind::Rds => "RDS",
            SamplerKind::Wrpi => "WRPI",
            SamplerKind::SsIn => "SS_IN",
            SamplerKind::SsPi => "SS_PI",
            SamplerKind::SsPa => "SS_PA",
        }
    }

    /// Whether a record of this sampler holds distinct nodes only.
    pub fn without_replacement(self) -> bool {
        self != SamplerKind::Wrpi
    }

    /// Stable position in [`SamplerKind::ALL`], used for seed derivation.
    pub fn index(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "rds" => Ok(SamplerKind::Rds),
            "wrpi" => Ok(SamplerKind::Wrpi),
            "ss-in" => Ok(SamplerKind::SsIn),
            "ss-pi" => Ok(SamplerKind::SsPi),
            "ss-pa" => Ok(SamplerKind::SsPa),
            _ => Err(Error::Input(format!(
                "unknown sampler `{s}` (expected rds, wrpi, ss-in, ss-pi or ss-pa)"
            ))),
        }
    }
}

/// Who recruited a node in an RDS record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recruiter {
    Seed,
    Node(usize),
}

impl Serialize for Recruiter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Recruiter::Seed => s.serialize_str("SEED"),
            Recruiter::Node(id) => s.serialize_u64(*id as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Recruiter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Node(usize),
            Marker(String),
        }
        match Repr::deserialize(d)? {
            Repr::Node(id) => Ok(Recruiter::Node(id)),
            Repr::Marker(m) if m == "SEED" => Ok(Recruiter::Seed),
            Repr::Marker(m) => Err(serde::de::Error::custom(format!("unknown recruiter marker `{m}`"))),
        }
    }
}

/// One sample: the ordered sequence of sampled nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sampler: SamplerKind,
    pub seed: u64,
    pub target_n: usize,
    pub nodes: Vec<usize>,
    /// RDS only: recruiter of each entry of `nodes`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recruiter: Option<Vec<Recruiter>>,
    /// RDS reseeds after the referral chains died out, or successive
    /// sampling restarts after the previous recruit's status had no
    /// remaining mass.
    #[serde(default)]
    pub restarts: usize,
}

impl SampleRecord {
    /// Distinct sampled nodes, in order of first appearance.
    pub fn distinct_nodes(&self) -> Vec<usize> {
        let mut seen = std::collections::HashSet::with_capacity(self.nodes.len());
        self.nodes.iter().copied().filter(|i| seen.insert(*i)).collect()
    }

    /// Checks the structural invariants of a record of its sampler.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.nodes.len() != self.target_n {
            return Err(Error::Input(format!(
                "record has {} nodes but target {}",
                self.nodes.len(),
                self.target_n
            )));
        }
        if let Some(&id) = self.nodes.iter().find(|&&i| i >= n) {
            return Err(Error::NodeOutOfRange { id, n });
        }
        if self.sampler.without_replacement() && self.distinct_nodes().len() != self.nodes.len() {
            return Err(Error::Input(format!("{} record repeats a node", self.sampler)));
        }
        if let Some(rec) = &self.recruiter {
            if rec.len() != self.nodes.len() {
                return Err(Error::Input("recruiter list length differs from nodes".into()));
            }
            for (pos, r) in rec.iter().enumerate() {
                if let Recruiter::Node(parent) = r {
                    if !self.nodes[..pos].contains(parent) {
                        return Err(Error::Input(format!(
                            "node {} recruited by {parent}, which was not sampled before it",
                            self.nodes[pos]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Everything a sampler needs besides the network and the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerParams {
    pub rds: RdsParams,
    pub successive: SuccessiveOptions,
    /// Ratios for SS_pa; computed from the network's edge blocks when `None`.
    pub ratios: Option<InRatios>,
}

impl Default for SamplerParams {
    fn default() -> Self {
        SamplerParams {
            rds: RdsParams::default(),
            successive: SuccessiveOptions::default(),
            ratios: None,
        }
    }
}

/// A sampler bound to a network, reusable across replicates.
pub enum PreparedSampler<'a> {
    Rds(&'a Network, RdsParams),
    Wrpi(WrpiSampler),
    Successive(SuccessiveSampler),
}

impl<'a> PreparedSampler<'a> {
    pub fn new(net: &'a Network, kind: SamplerKind, params: &SamplerParams) -> Result<Self> {
        Ok(match kind {
            SamplerKind::Rds => {
                params.rds.validate()?;
                PreparedSampler::Rds(net, params.rds)
            }
            SamplerKind::Wrpi => PreparedSampler::Wrpi(WrpiSampler::new(net)?),
            SamplerKind::SsIn => PreparedSampler::Successive(SuccessiveSampler::new(
                net,
                UnitSizes::InDegree,
                params.successive,
            )?),
            SamplerKind::SsPi => PreparedSampler::Successive(SuccessiveSampler::new(
                net,
                UnitSizes::PartialInDegree,
                params.successive,
            )?),
            SamplerKind::SsPa => PreparedSampler::Successive(SuccessiveSampler::new(
                net,
                UnitSizes::ApproximatePartialInDegree(params.ratios),
                params.successive,
            )?),
        })
    }

    pub fn kind(&self) -> SamplerKind {
        match self {
            PreparedSampler::Rds(..) => SamplerKind::Rds,
            PreparedSampler::Wrpi(_) => SamplerKind::Wrpi,
            PreparedSampler::Successive(s) => s.kind(),
        }
    }

    pub fn draw(&self, target_n: usize, seed: u64) -> Result<SampleRecord> {
        match self {
            PreparedSampler::Rds(net, p) => rds_sample(net, target_n, p.seeds, p.coupons, seed),
            PreparedSampler::Wrpi(s) => s.draw(target_n, seed),
            PreparedSampler::Successive(s) => s.draw(target_n, seed),
        }
    }
}
