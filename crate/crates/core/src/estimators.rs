//! Monte Carlo inclusion probabilities, Hájek prevalence estimates and the
//! comparison metrics between samplers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Status;
use crate::samplers::{SampleRecord, SamplerKind};

/// Per-node share of replicates that contain the node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionEstimate {
    pub sampler: SamplerKind,
    pub pi: Vec<f64>,
    pub n_samp: usize,
}

impl InclusionEstimate {
    pub fn n(&self) -> usize {
        self.pi.len()
    }

    /// Sum of the probabilities; a fixed-size design without replacement
    /// has expectation equal to the sample size.
    pub fn mass(&self) -> f64 {
        self.pi.iter().sum()
    }
}

/// Streaming form of [`estimate_inclusion`].
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionCounter {
    sampler: SamplerKind,
    counts: Vec<u64>,
    n_samp: usize,
    scratch: Vec<bool>,
}

impl InclusionCounter {
    pub fn new(sampler: SamplerKind, n: usize) -> Self {
        InclusionCounter { sampler, counts: vec![0; n], n_samp: 0, scratch: vec![false; n] }
    }

    pub fn add(&mut self, record: &SampleRecord) -> Result<()> {
        if record.sampler != self.sampler {
            return Err(Error::Input(format!(
                "cannot pool {} and {} records",
                self.sampler, record.sampler
            )));
        }
        let n = self.counts.len();
        if let Some(&id) = record.nodes.iter().find(|&&i| i >= n) {
            return Err(Error::NodeOutOfRange { id, n });
        }
        for &i in &record.nodes {
            if !std::mem::replace(&mut self.scratch[i], true) {
                self.counts[i] += 1;
            }
        }
        for &i in &record.nodes {
            self.scratch[i] = false;
        }
        self.n_samp += 1;
        Ok(())
    }

    /// Adds the counts of another counter over the same sampler and nodes.
    pub fn merge(&mut self, other: &InclusionCounter) -> Result<()> {
        if other.sampler != self.sampler || other.counts.len() != self.counts.len() {
            return Err(Error::Input("merging incompatible inclusion counters".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.n_samp += other.n_samp;
        Ok(())
    }

    pub fn finish(&self) -> Result<InclusionEstimate> {
        if self.n_samp == 0 {
            return Err(Error::Input("no sample records to estimate from".into()));
        }
        let reps = self.n_samp as f64;
        Ok(InclusionEstimate {
            sampler: self.sampler,
            pi: self.counts.iter().map(|&c| c as f64 / reps).collect(),
            n_samp: self.n_samp,
        })
    }
}

pub fn estimate_inclusion(records: &[SampleRecord], n: usize) -> Result<InclusionEstimate> {
    let first = records
        .first()
        .ok_or_else(|| Error::Input("no sample records to estimate from".into()))?;
    let mut counter = InclusionCounter::new(first.sampler, n);
    for r in records {
        counter.add(r)?;
    }
    counter.finish()
}

/// Weighted share of infected nodes among the distinct nodes of `record`,
/// with weights `1 / pi_i`.
pub fn hajek(record: &SampleRecord, pi: &InclusionEstimate, z: &[Status]) -> Result<f64> {
    if z.len() != pi.n() {
        return Err(Error::Input(format!(
            "status vector has {} entries but inclusion vector {}",
            z.len(),
            pi.n()
        )));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for i in record.distinct_nodes() {
        let p = *pi.pi.get(i).ok_or(Error::NodeOutOfRange { id: i, n: pi.n() })?;
        if p <= 0.0 {
            return Err(Error::UndefinedWeight(i));
        }
        den += 1.0 / p;
        if z[i].is_infected() {
            num += 1.0 / p;
        }
    }
    if den == 0.0 {
        return Err(Error::Input("cannot estimate prevalence from an empty sample".into()));
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mare {
    pub mare: f64,
    /// Nodes with positive reference probability, over which the mean runs.
    pub n_prime: usize,
}

/// Mean absolute relative error of `app` against the reference `rds`,
/// over nodes the reference ever sampled.
pub fn mare(app: &InclusionEstimate, rds: &InclusionEstimate) -> Result<Mare> {
    if app.n() != rds.n() {
        return Err(Error::Input(format!(
            "inclusion vectors differ in length ({} vs {})",
            app.n(),
            rds.n()
        )));
    }
    let (mut sum, mut n_prime) = (0.0, 0usize);
    for (a, r) in app.pi.iter().zip(&rds.pi) {
        if *r > 0.0 {
            sum += (a - r).abs() / r;
            n_prime += 1;
        }
    }
    if n_prime == 0 {
        return Err(Error::Degenerate("reference never sampled any node".into()));
    }
    Ok(Mare { mare: sum / n_prime as f64, n_prime })
}

pub fn rmse(estimates: &[f64], mu: f64) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::Input("no estimates".into()));
    }
    let ms = estimates.iter().map(|e| (e - mu).powi(2)).sum::<f64>() / estimates.len() as f64;
    Ok(ms.sqrt())
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub bias: f64,
    pub rmse: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Per-replicate prevalence estimates and their summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub mu_true: f64,
    pub estimates: Vec<f64>,
    /// Replicates whose estimate was undefined (a sampled node had a zero
    /// probability).
    pub undefined: usize,
    pub summary: Option<Summary>,
}

impl EstimatorResult {
    pub fn new(estimates: Vec<f64>, undefined: usize, mu_true: f64) -> Self {
        let summary = (!estimates.is_empty()).then(|| {
            let mut sorted = estimates.clone();
            sorted.sort_by(f64::total_cmp);
            let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
            Summary {
                mean,
                bias: mean - mu_true,
                rmse: rmse(&estimates, mu_true).expect("non-empty"),
                min: sorted[0],
                q1: quantile(&sorted, 0.25),
                median: quantile(&sorted, 0.5),
                q3: quantile(&sorted, 0.75),
                max: sorted[sorted.len() - 1],
            }
        });
        EstimatorResult { mu_true, estimates, undefined, summary }
    }

    /// Hájek estimates of every record; undefined ones are counted.
    pub fn from_records(
        records: &[SampleRecord],
        pi: &InclusionEstimate,
        z: &[Status],
        mu_true: f64,
    ) -> Result<Self> {
        let mut estimates = Vec::with_capacity(records.len());
        let mut undefined = 0;
        for r in records {
            match hajek(r, pi, z) {
                Ok(e) => estimates.push(e),
                Err(Error::UndefinedWeight(_)) => undefined += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(EstimatorResult::new(estimates, undefined, mu_true))
    }
}
