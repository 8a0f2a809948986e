use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use super::{SampleRecord, SamplerKind};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::seed::rng_from_seed;

/// Independent draws proportional to in-degree.
#[derive(Debug, Clone)]
pub struct WrpiSampler {
    dist: WeightedIndex<u64>,
}

impl WrpiSampler {
    pub fn new(net: &Network) -> Result<Self> {
        let weights: Vec<u64> = net.in_degrees().into_iter().map(|d| d as u64).collect();
        let dist = WeightedIndex::new(&weights)
            .map_err(|_| Error::Degenerate("every in-degree is zero".into()))?;
        Ok(WrpiSampler { dist })
    }

    pub fn draw(&self, target_n: usize, seed: u64) -> Result<SampleRecord> {
        let mut rng = rng_from_seed(seed);
        Ok(SampleRecord {
            sampler: SamplerKind::Wrpi,
            seed,
            target_n,
            nodes: (0..target_n).map(|_| self.dist.sample(&mut rng)).collect(),
            recruiter: None,
            restarts: 0,
        })
    }
}

pub fn wrpi_sample(net: &Network, target_n: usize, seed: u64) -> Result<SampleRecord> {
    WrpiSampler::new(net)?.draw(target_n, seed)
}
