use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fenwick::WeightTree;
use super::{SampleRecord, SamplerKind};
use crate::error::{Error, Result};
use crate::graph::{block_edge_counts, InRatios, Network, Status};
use crate::seed::rng_from_seed;

/// Law of the first unit of a successive sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstDraw {
    /// Proportional to in-degree.
    #[default]
    InDegree,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SuccessiveOptions {
    pub first_draw: FirstDraw,
    /// Once no unsampled node has positive in-degree, continue uniformly
    /// over the unsampled nodes instead of failing.
    pub zero_size_fallback: bool,
}

/// Unit size of node `j` when the previous recruit has status `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitSizes {
    /// `d^in_j`, whatever `k` is.
    InDegree,
    /// `d^{in,k}_j`.
    PartialInDegree,
    /// `R^in_{z_j,k} d^in_j`; ratios default to the network's own.
    ApproximatePartialInDegree(Option<InRatios>),
}

/// Unnormalised next-step weights over all nodes; sampled nodes weigh 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StepWeights {
    pub weights: Vec<f64>,
    /// The context weights were all zero and the step falls back to the
    /// in-degree (or uniform) law.
    pub restart: bool,
}

impl StepWeights {
    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }
}

/// Successive sampler with its size tables precomputed.
#[derive(Debug, Clone)]
pub struct SuccessiveSampler {
    kind: SamplerKind,
    options: SuccessiveOptions,
    status: Vec<Status>,
    first: Vec<f64>,
    /// `context[k][j]`: size of `j` after a status-`k` recruit.
    context: [Vec<f64>; 2],
}

impl SuccessiveSampler {
    pub fn new(net: &Network, sizes: UnitSizes, options: SuccessiveOptions) -> Result<Self> {
        let d_in: Vec<f64> = net.in_degrees().into_iter().map(|d| d as f64).collect();
        let (kind, context) = match sizes {
            UnitSizes::InDegree => (SamplerKind::SsIn, [d_in.clone(), d_in.clone()]),
            UnitSizes::PartialInDegree => {
                let table = |k| net.partial_in_degrees(k).into_iter().map(|d| d as f64).collect();
                (SamplerKind::SsPi, [table(Status::Uninfected), table(Status::Infected)])
            }
            UnitSizes::ApproximatePartialInDegree(ratios) => {
                let ratios = match ratios {
                    Some(r) => {
                        r.validate()?;
                        r
                    }
                    None => InRatios::from_counts_or_even(&block_edge_counts(net)),
                };
                let table = |k| {
                    d_in.iter()
                        .zip(net.statuses())
                        .map(|(d, &z)| ratios.get(z, k) * d)
                        .collect()
                };
                (SamplerKind::SsPa, [table(Status::Uninfected), table(Status::Infected)])
            }
        };
        Ok(SuccessiveSampler {
            kind,
            options,
            status: net.statuses().to_vec(),
            first: d_in,
            context,
        })
    }

    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.status.len()
    }

    /// Weights of the next draw after the ordered prefix `sampled`.
    pub fn step_weights(&self, sampled: &[usize]) -> Result<StepWeights> {
        let n = self.n();
        let mut taken = vec![false; n];
        for &i in sampled {
            if i >= n {
                return Err(Error::NodeOutOfRange { id: i, n });
            }
            taken[i] = true;
        }
        let masked = |w: &[f64]| -> Vec<f64> {
            w.iter().zip(&taken).map(|(&w, &t)| if t { 0.0 } else { w }).collect()
        };
        let has_mass = |w: &[f64]| w.iter().any(|&v| v > 0.0);

        let mut restart = false;
        let mut weights = match sampled.last() {
            None if self.options.first_draw == FirstDraw::Uniform => masked(&vec![1.0; n]),
            None => masked(&self.first),
            Some(&prev) => {
                let ctx = masked(&self.context[self.status[prev].index()]);
                if has_mass(&ctx) {
                    ctx
                } else {
                    restart = true;
                    masked(&self.first)
                }
            }
        };
        if !has_mass(&weights) {
            if self.options.zero_size_fallback {
                weights = masked(&vec![1.0; n]);
            }
            if !has_mass(&weights) {
                return Err(Error::Exhausted { drawn: sampled.len(), target: sampled.len() + 1 });
            }
        }
        Ok(StepWeights { weights, restart })
    }

    pub fn draw(&self, target_n: usize, seed: u64) -> Result<SampleRecord> {
        let n = self.n();
        if target_n > n {
            return Err(Error::Input(format!("sample size {target_n} exceeds population {n}")));
        }
        let mut rng = rng_from_seed(seed);
        let mut first = WeightTree::new(&self.first);
        let mut context = [WeightTree::new(&self.context[0]), WeightTree::new(&self.context[1])];
        let mut uniform = WeightTree::new(&vec![1.0; n]);
        let mut nodes: Vec<usize> = Vec::with_capacity(target_n);
        let mut restarts = 0;

        while nodes.len() < target_n {
            let next = match nodes.last() {
                None if self.options.first_draw == FirstDraw::Uniform => Some(uniform.draw(&mut rng)),
                None => draw_if_positive(&first, &mut rng),
                Some(&prev) => {
                    let ctx = &context[self.status[prev].index()];
                    if ctx.positive() > 0 {
                        Some(ctx.draw(&mut rng))
                    } else {
                        restarts += 1;
                        log::debug!(
                            "{} chain stuck after {} draws; restarting by in-degree",
                            self.kind,
                            nodes.len()
                        );
                        draw_if_positive(&first, &mut rng)
                    }
                }
            };
            let next = match next {
                Some(i) => i,
                None if self.options.zero_size_fallback => uniform.draw(&mut rng),
                None => return Err(Error::Exhausted { drawn: nodes.len(), target: target_n }),
            };
            first.remove(next);
            context[0].remove(next);
            context[1].remove(next);
            uniform.remove(next);
            nodes.push(next);
        }

        Ok(SampleRecord {
            sampler: self.kind,
            seed,
            target_n,
            nodes,
            recruiter: None,
            restarts,
        })
    }
}

fn draw_if_positive<R: Rng + ?Sized>(tree: &WeightTree, rng: &mut R) -> Option<usize> {
    (tree.positive() > 0).then(|| tree.draw(rng))
}

pub fn ss_in_sample(net: &Network, target_n: usize, seed: u64) -> Result<SampleRecord> {
    SuccessiveSampler::new(net, UnitSizes::InDegree, SuccessiveOptions::default())?.draw(target_n, seed)
}

pub fn ss_pi_sample(net: &Network, target_n: usize, seed: u64) -> Result<SampleRecord> {
    SuccessiveSampler::new(net, UnitSizes::PartialInDegree, SuccessiveOptions::default())?
        .draw(target_n, seed)
}

pub fn ss_pa_sample(net: &Network, target_n: usize, ratios: InRatios, seed: u64) -> Result<SampleRecord> {
    SuccessiveSampler::new(
        net,
        UnitSizes::ApproximatePartialInDegree(Some(ratios)),
        SuccessiveOptions::default(),
    )?
    .draw(target_n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::three_node;
    use Status::{Infected as I, Uninfected as U};

    fn two_node() -> Network {
        // Only nodes 0 and 1 can be drawn, with in-degrees 1 and 3.
        Network::new(vec![I, U, U, U], vec![(2, 0), (0, 1), (2, 1), (3, 1)], vec![]).unwrap()
    }

    #[test]
    fn ordering_frequencies_of_two_units() {
        let net = two_node();
        assert_eq!(net.in_degrees(), vec![1, 3, 0, 0]);
        let s = SuccessiveSampler::new(&net, UnitSizes::InDegree, SuccessiveOptions::default()).unwrap();
        let reps = 40_000;
        let mut first_is_1 = 0;
        for r in 0..reps {
            let rec = s.draw(2, r).unwrap();
            assert_eq!(rec.nodes.len(), 2);
            if rec.nodes == [1, 0] {
                first_is_1 += 1;
            } else {
                assert_eq!(rec.nodes, vec![0, 1]);
            }
        }
        let p = 0.75;
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        assert!((first_is_1 as f64 / reps as f64 - p).abs() < 4.0 * se);
    }

    #[test]
    fn zero_in_degree_is_never_drawn() {
        let net = two_node();
        let s = SuccessiveSampler::new(&net, UnitSizes::InDegree, SuccessiveOptions::default()).unwrap();
        assert!(matches!(s.draw(3, 1), Err(Error::Exhausted { drawn: 2, target: 3 })));
        let fallback = SuccessiveSampler::new(
            &net,
            UnitSizes::InDegree,
            SuccessiveOptions { zero_size_fallback: true, ..Default::default() },
        )
        .unwrap();
        let rec = fallback.draw(4, 1).unwrap();
        let mut sorted = rec.nodes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
        assert!(rec.nodes[..2].contains(&0) && rec.nodes[..2].contains(&1));
    }

    #[test]
    fn approximate_step_after_infected_recruit() {
        let net = three_node();
        let s = SuccessiveSampler::new(
            &net,
            UnitSizes::ApproximatePartialInDegree(None),
            SuccessiveOptions::default(),
        )
        .unwrap();
        let p = s.step_weights(&[1]).unwrap().probabilities();
        assert!((p[0] - 0.25).abs() < 1e-12);
        assert_eq!(p[1], 0.0);
        assert!((p[2] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn even_ratios_match_in_degree_sizes() {
        let net = three_node();
        let even = InRatios([[0.5; 2]; 2]);
        let pa = SuccessiveSampler::new(
            &net,
            UnitSizes::ApproximatePartialInDegree(Some(even)),
            SuccessiveOptions::default(),
        )
        .unwrap();
        let si = SuccessiveSampler::new(&net, UnitSizes::InDegree, SuccessiveOptions::default()).unwrap();
        for prefix in [&[][..], &[0], &[1], &[2, 0]] {
            let a = pa.step_weights(prefix).unwrap().probabilities();
            let b = si.step_weights(prefix).unwrap().probabilities();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stuck_chain_restarts_by_in_degree() {
        // After node 2 (uninfected) only nodes 0 and 3 remain, and neither
        // receives entries from an uninfected node.
        let net = Network::new(vec![U, I, U, U], vec![(0, 1), (1, 2), (1, 3)], vec![]).unwrap();
        let s = SuccessiveSampler::new(&net, UnitSizes::PartialInDegree, SuccessiveOptions::default()).unwrap();
        let w = s.step_weights(&[1, 2]).unwrap();
        assert!(w.restart);
        assert_eq!(w.weights, vec![0.0, 0.0, 0.0, 1.0]);
        let w = s.step_weights(&[1]).unwrap();
        assert!(!w.restart);
        assert_eq!(w.weights, vec![0.0, 0.0, 1.0, 1.0]);
        let rec = s.draw(3, 9).unwrap();
        assert_eq!(rec.nodes.len(), 3);
    }

    #[test]
    fn uniform_first_draw_reaches_zero_size_nodes() {
        let net = two_node();
        let s = SuccessiveSampler::new(
            &net,
            UnitSizes::InDegree,
            SuccessiveOptions { first_draw: FirstDraw::Uniform, zero_size_fallback: false },
        )
        .unwrap();
        let hit = (0..200).any(|seed| s.draw(1, seed).unwrap().nodes[0] >= 2);
        assert!(hit);
    }

    #[test]
    fn deterministic_per_seed() {
        let net = three_node();
        assert_eq!(ss_pi_sample(&net, 3, 11).unwrap(), ss_pi_sample(&net, 3, 11).unwrap());
        assert!(ss_in_sample(&net, 4, 11).is_err());
    }

    #[test]
    fn bad_ratios_are_rejected() {
        let net = three_node();
        assert!(ss_pa_sample(&net, 1, InRatios([[0.7, 0.7], [0.5, 0.5]]), 0).is_err());
    }
}
