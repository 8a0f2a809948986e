//! Simulation grid: generate each scenario's network once, draw replicate
//! samples per (sampler, size) cell, and tabulate inclusion-probability
//! errors and prevalence estimates.
//!
//! Seeds are derived with [`derive_seed`]: a scenario's network uses
//! `derive_seed(base, [scenario])`, cell `(scenario, sampler, size)` uses
//! `derive_seed(base, [scenario, sampler, size])` and its replicate `r` uses
//! `derive_seed(cell_seed, [r])`. Indices are positions in the plan, and
//! samplers are numbered as in [`SamplerKind::ALL`].
//!
//! Each finished cell is written to `cells/` and recorded in
//! `manifest.json`, so an interrupted run resumes where it stopped.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blockmodel::{generate_block_network, ScenarioConfig};
use crate::error::{Error, Result};
use crate::estimators::{estimate_inclusion, hajek, mare, EstimatorResult, InclusionEstimate, Mare};
use crate::graph::{Network, Status};
use crate::samplers::{PreparedSampler, RdsParams, SampleRecord, SamplerKind, SamplerParams, SuccessiveOptions};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub config: ScenarioConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replicates {
    pub rds: usize,
    pub approximations: usize,
}

impl Replicates {
    pub fn for_sampler(&self, kind: SamplerKind) -> usize {
        if kind == SamplerKind::Rds {
            self.rds
        } else {
            self.approximations
        }
    }
}

/// Which samples the approximations' probabilities weight in the Hájek
/// estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HajekSamples {
    /// The RDS replicates of the same cell size.
    #[default]
    Rds,
    /// The approximation's own replicates.
    Own,
    Both,
}

impl HajekSamples {
    fn includes(self, on: HajekOn) -> bool {
        matches!(
            (self, on),
            (HajekSamples::Both, _) | (HajekSamples::Rds, HajekOn::Rds) | (HajekSamples::Own, HajekOn::Own)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HajekOn {
    Rds,
    Own,
}

impl HajekOn {
    pub fn label(self) -> &'static str {
        match self {
            HajekOn::Rds => "rds",
            HajekOn::Own => "own",
        }
    }
}

fn default_samplers() -> Vec<SamplerKind> {
    SamplerKind::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub scenarios: Vec<Scenario>,
    pub sizes: Vec<usize>,
    /// RDS always runs, as the reference for the others.
    #[serde(default = "default_samplers")]
    pub samplers: Vec<SamplerKind>,
    pub replicates: Replicates,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub rds: RdsParams,
    #[serde(default)]
    pub successive: SuccessiveOptions,
    #[serde(default)]
    pub hajek_samples: HajekSamples,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

pub const DEFAULT_BASE_SEED: u64 = 20_200_601;

/// The full grid: `m, w` in {0.8, 1, 2}, `h` in {1, 5}, `alpha` in {0.2, 0.8},
/// with 1500 nodes, 300 infected and mean degree 10. Replicate counts are
/// 500 per approximation and 1000 for RDS, scaled by `scale` (floored, at
/// least 10).
pub fn build_default_plan(scale: f64) -> Result<ExperimentPlan> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::Input(format!("scale must lie in (0, 1], got {scale}")));
    }
    let scaled = |reps: f64| ((reps * scale).floor() as usize).max(10);
    let mut scenarios = Vec::with_capacity(36);
    for h in [1.0, 5.0] {
        for alpha in [0.2, 0.8] {
            for m in [0.8, 1.0, 2.0] {
                for w in [0.8, 1.0, 2.0] {
                    let idx = scenarios.len() as u64;
                    scenarios.push(Scenario {
                        id: format!("h{h}_a{alpha}_m{m}_w{w}"),
                        config: ScenarioConfig {
                            n: 1500,
                            n1: 300,
                            lambda: 10.0,
                            h,
                            m,
                            w,
                            alpha,
                            seed: derive_seed(DEFAULT_BASE_SEED, &[idx]),
                        },
                    });
                }
            }
        }
    }
    Ok(ExperimentPlan {
        scenarios,
        sizes: vec![200, 500, 750, 1125],
        samplers: default_samplers(),
        replicates: Replicates { rds: scaled(1000.0), approximations: scaled(500.0) },
        base_seed: DEFAULT_BASE_SEED,
        rds: RdsParams::default(),
        successive: SuccessiveOptions::default(),
        hajek_samples: HajekSamples::default(),
        output_dir: None,
    })
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        let mut ids = std::collections::HashSet::new();
        for s in &self.scenarios {
            if s.id.is_empty()
                || !s.id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
            {
                return Err(Error::Input(format!(
                    "scenario id `{}` must be non-empty and use only [A-Za-z0-9_.-]",
                    s.id
                )));
            }
            if !ids.insert(s.id.as_str()) {
                return Err(Error::Input(format!("duplicate scenario id `{}`", s.id)));
            }
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::Input("sample sizes must be a non-empty list of positive sizes".into()));
        }
        if self.replicates.rds == 0 || self.replicates.approximations == 0 {
            return Err(Error::Input("replicate counts must be positive".into()));
        }
        self.rds.validate()
    }

    /// Samplers run per cell: RDS first, then the requested others in
    /// canonical order.
    pub fn cell_samplers(&self) -> Vec<SamplerKind> {
        SamplerKind::ALL
            .into_iter()
            .filter(|k| *k == SamplerKind::Rds || self.samplers.contains(k))
            .collect()
    }

    fn sampler_params(&self) -> SamplerParams {
        SamplerParams { rds: self.rds, successive: self.successive, ratios: None }
    }

    /// Everything that determines results; compared on resume.
    fn fingerprint(&self) -> serde_json::Value {
        let mut plan = self.clone();
        plan.output_dir = None;
        serde_json::to_value(plan).expect("plan serialization cannot fail")
    }
}

pub fn cell_seed(base: u64, scenario: usize, sampler: SamplerKind, size: usize) -> u64 {
    derive_seed(base, &[scenario as u64, sampler.index(), size as u64])
}

pub fn replicate_seed(cell_seed: u64, replicate: usize) -> u64 {
    derive_seed(cell_seed, &[replicate as u64])
}

/// Draws `reps` replicates in parallel; the output order is the replicate order.
pub fn draw_replicates(
    sampler: &PreparedSampler<'_>,
    n: usize,
    reps: usize,
    cell_seed: u64,
) -> Result<Vec<SampleRecord>> {
    (0..reps)
        .into_par_iter()
        .map(|r| sampler.draw(n, replicate_seed(cell_seed, r)))
        .collect()
}

/// Hájek estimate of each record; `None` where a sampled node has zero
/// probability.
pub fn hajek_each(
    records: &[SampleRecord],
    pi: &InclusionEstimate,
    z: &[Status],
) -> Result<Vec<Option<f64>>> {
    records
        .iter()
        .map(|r| match hajek(r, pi, z) {
            Ok(e) => Ok(Some(e)),
            Err(Error::UndefinedWeight(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HajekRun {
    pub on: HajekOn,
    /// Seed of each weighted sample.
    pub seeds: Vec<u64>,
    pub estimates: Vec<Option<f64>>,
    pub result: EstimatorResult,
}

impl HajekRun {
    fn new(on: HajekOn, records: &[SampleRecord], estimates: Vec<Option<f64>>, mu_true: f64) -> Self {
        let defined: Vec<f64> = estimates.iter().flatten().copied().collect();
        let undefined = estimates.len() - defined.len();
        HajekRun {
            on,
            seeds: records.iter().map(|r| r.seed).collect(),
            estimates,
            result: EstimatorResult::new(defined, undefined, mu_true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMetrics {
    pub pi: Vec<f64>,
    /// `sum(pi)`.
    pub mass: f64,
    pub restarts: usize,
    /// Against the RDS probabilities of the same size; absent for RDS.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mare: Option<Mare>,
    pub hajek: Vec<HajekRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub scenario: String,
    pub sampler: SamplerKind,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<CellMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CellResult {
    pub fn key(&self) -> String {
        cell_key(&self.scenario, self.sampler, self.n)
    }

    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

fn cell_key(scenario: &str, sampler: SamplerKind, n: usize) -> String {
    format!("{scenario}/{sampler}/{n}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellState {
    Done,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Manifest {
    plan: serde_json::Value,
    cells: BTreeMap<String, CellState>,
}

/// Output of [`run_plan`]: every cell in plan order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub cells: Vec<CellResult>,
    pub computed: usize,
    pub skipped: usize,
}

impl RunReport {
    pub fn failed(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.failed())
    }

    pub fn cell(&self, scenario: &str, sampler: SamplerKind, n: usize) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.scenario == scenario && c.sampler == sampler && c.n == n)
    }
}

struct Store {
    dir: PathBuf,
    manifest: Mutex<Manifest>,
}

impl Store {
    fn open(dir: &Path, plan: &ExperimentPlan) -> Result<Self> {
        fs::create_dir_all(dir.join("cells"))?;
        let path = dir.join("manifest.json");
        let fingerprint = plan.fingerprint();
        let manifest = if path.exists() {
            let m: Manifest = serde_json::from_str(&fs::read_to_string(&path)?)?;
            if m.plan != fingerprint {
                return Err(Error::Input(format!(
                    "{} holds results of a different plan",
                    dir.display()
                )));
            }
            m
        } else {
            Manifest { plan: fingerprint, cells: BTreeMap::new() }
        };
        Ok(Store { dir: dir.to_path_buf(), manifest: Mutex::new(manifest) })
    }

    fn cell_path(&self, key: &str) -> PathBuf {
        self.dir.join("cells").join(format!("{}.json", key.replace('/', "__")))
    }

    fn is_complete(&self, key: &str) -> bool {
        self.manifest.lock().expect("manifest lock").cells.contains_key(key)
            && self.cell_path(key).exists()
    }

    fn load(&self, key: &str) -> Result<CellResult> {
        Ok(serde_json::from_str(&fs::read_to_string(self.cell_path(key))?)?)
    }

    fn save(&self, cell: &CellResult) -> Result<()> {
        let key = cell.key();
        write_atomic(&self.cell_path(&key), serde_json::to_string(cell)?.as_bytes())?;
        let mut m = self.manifest.lock().expect("manifest lock");
        m.cells.insert(key, if cell.failed() { CellState::Failed } else { CellState::Done });
        write_atomic(&self.dir.join("manifest.json"), serde_json::to_string_pretty(&*m)?.as_bytes())
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(tmp, path)?;
    Ok(())
}

/// Runs every cell of `plan` not already recorded in `out_dir`, then
/// rewrites the CSV tables from all cell files.
pub fn run_plan(plan: &ExperimentPlan, out_dir: &Path) -> Result<RunReport> {
    plan.validate()?;
    let store = Store::open(out_dir, plan)?;
    let counts: Vec<Result<usize>> = plan
        .scenarios
        .par_iter()
        .enumerate()
        .map(|(idx, sc)| run_scenario(plan, idx, sc, &store))
        .collect();
    let mut computed = 0;
    for c in counts {
        computed += c?;
    }

    let mut cells = Vec::new();
    for sc in &plan.scenarios {
        for &n in &plan.sizes {
            for kind in plan.cell_samplers() {
                cells.push(store.load(&cell_key(&sc.id, kind, n))?);
            }
        }
    }
    write_tables(plan, &cells, out_dir)?;
    let skipped = cells.len() - computed;
    log::info!("{} cells: {computed} computed, {skipped} reused", cells.len());
    Ok(RunReport { cells, computed, skipped })
}

fn run_scenario(plan: &ExperimentPlan, idx: usize, sc: &Scenario, store: &Store) -> Result<usize> {
    let samplers = plan.cell_samplers();
    let pending = plan
        .sizes
        .iter()
        .any(|&n| samplers.iter().any(|&k| !store.is_complete(&cell_key(&sc.id, k, n))));
    if !pending {
        return Ok(0);
    }
    let net = match generate_block_network(&sc.config) {
        Ok(net) => net,
        Err(e) => {
            log::warn!("scenario {} failed: {e}", sc.id);
            let mut written = 0;
            for (size_idx, &n) in plan.sizes.iter().enumerate() {
                for &k in &samplers {
                    if !store.is_complete(&cell_key(&sc.id, k, n)) {
                        store.save(&failed_cell(plan, idx, sc, k, size_idx, n, &e))?;
                        written += 1;
                    }
                }
            }
            return Ok(written);
        }
    };
    log::info!("scenario {}: network with {} entries", sc.id, net.adjacency_entries());
    let counts: Vec<Result<usize>> = plan
        .sizes
        .par_iter()
        .enumerate()
        .map(|(size_idx, &n)| run_size(plan, idx, sc, &net, size_idx, n, store))
        .collect();
    counts.into_iter().sum()
}

fn failed_cell(
    plan: &ExperimentPlan,
    idx: usize,
    sc: &Scenario,
    kind: SamplerKind,
    size_idx: usize,
    n: usize,
    err: &Error,
) -> CellResult {
    CellResult {
        scenario: sc.id.clone(),
        sampler: kind,
        n,
        reps: plan.replicates.for_sampler(kind),
        seed: cell_seed(plan.base_seed, idx, kind, size_idx),
        metrics: None,
        error: Some(err.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_size(
    plan: &ExperimentPlan,
    idx: usize,
    sc: &Scenario,
    net: &Network,
    size_idx: usize,
    n: usize,
    store: &Store,
) -> Result<usize> {
    let params = plan.sampler_params();
    let mu_true = net.count_status(Status::Infected) as f64 / net.n() as f64;
    let rds_key = cell_key(&sc.id, SamplerKind::Rds, n);
    let rds_seed = cell_seed(plan.base_seed, idx, SamplerKind::Rds, size_idx);
    let approximations: Vec<SamplerKind> = plan
        .cell_samplers()
        .into_iter()
        .filter(|&k| k != SamplerKind::Rds && !store.is_complete(&cell_key(&sc.id, k, n)))
        .collect();
    let mut computed = 0;

    let rds_done = store.is_complete(&rds_key);
    let need_records =
        !rds_done || (plan.hajek_samples.includes(HajekOn::Rds) && !approximations.is_empty());
    // Kept as a message so that every approximation cell can report it.
    let rds_records: std::result::Result<Vec<SampleRecord>, String> = if need_records {
        PreparedSampler::new(net, SamplerKind::Rds, &params)
            .and_then(|s| draw_replicates(&s, n, plan.replicates.rds, rds_seed))
            .map_err(|e| e.to_string())
    } else {
        Ok(Vec::new())
    };

    let rds_cell = if rds_done {
        store.load(&rds_key)?
    } else {
        let cell = match &rds_records {
            Ok(records) => {
                evaluate_cell(records, None, None, mu_true, net, plan.hajek_samples)
                    .map(|metrics| (metrics, records.len()))
            }
            Err(e) => Err(Error::Degenerate(e.clone())),
        };
        let cell = finish_cell(sc, SamplerKind::Rds, n, plan.replicates.rds, rds_seed, cell);
        store.save(&cell)?;
        computed += 1;
        cell
    };

    let rds_pi = rds_cell.metrics.as_ref().map(|m| InclusionEstimate {
        sampler: SamplerKind::Rds,
        pi: m.pi.clone(),
        n_samp: rds_cell.reps,
    });

    let cells: Vec<Result<CellResult>> = approximations
        .par_iter()
        .map(|&kind| {
            let seed = cell_seed(plan.base_seed, idx, kind, size_idx);
            let reps = plan.replicates.approximations;
            let outcome = (|| {
                let reference = rds_pi.as_ref().ok_or_else(|| {
                    Error::Degenerate(format!(
                        "reference RDS cell failed: {}",
                        rds_cell.error.as_deref().unwrap_or("unknown error")
                    ))
                })?;
                let sampler = PreparedSampler::new(net, kind, &params)?;
                let records = draw_replicates(&sampler, n, reps, seed)?;
                let rds_records = rds_records
                    .as_ref()
                    .map_err(|e| Error::Degenerate(format!("RDS replicates failed: {e}")))?;
                let metrics = evaluate_cell(
                    &records,
                    Some(reference),
                    Some(rds_records),
                    mu_true,
                    net,
                    plan.hajek_samples,
                )?;
                Ok((metrics, reps))
            })();
            let cell = finish_cell(sc, kind, n, reps, seed, outcome);
            store.save(&cell)?;
            Ok(cell)
        })
        .collect();
    for c in cells {
        c?;
        computed += 1;
    }
    Ok(computed)
}

fn finish_cell(
    sc: &Scenario,
    kind: SamplerKind,
    n: usize,
    reps: usize,
    seed: u64,
    outcome: Result<(CellMetrics, usize)>,
) -> CellResult {
    let (metrics, error) = match outcome {
        Ok((m, _)) => (Some(m), None),
        Err(e) => {
            log::warn!("cell {} failed: {e}", cell_key(&sc.id, kind, n));
            (None, Some(e.to_string()))
        }
    };
    CellResult { scenario: sc.id.clone(), sampler: kind, n, reps, seed, metrics, error }
}

/// Metrics of one cell. `reference` and `rds_records` are `None` for the
/// RDS cell itself.
fn evaluate_cell(
    records: &[SampleRecord],
    reference: Option<&InclusionEstimate>,
    rds_records: Option<&[SampleRecord]>,
    mu_true: f64,
    net: &Network,
    mode: HajekSamples,
) -> Result<CellMetrics> {
    let pi = estimate_inclusion(records, net.n())?;
    let z = net.statuses();
    let mut runs = Vec::new();
    match rds_records {
        None => runs.push(HajekRun::new(HajekOn::Rds, records, hajek_each(records, &pi, z)?, mu_true)),
        Some(rds) => {
            if mode.includes(HajekOn::Rds) {
                runs.push(HajekRun::new(HajekOn::Rds, rds, hajek_each(rds, &pi, z)?, mu_true));
            }
            if mode.includes(HajekOn::Own) {
                runs.push(HajekRun::new(HajekOn::Own, records, hajek_each(records, &pi, z)?, mu_true));
            }
        }
    }
    Ok(CellMetrics {
        mass: pi.mass(),
        restarts: records.iter().map(|r| r.restarts).sum(),
        mare: reference.map(|r| mare(&pi, r)).transpose()?,
        hajek: runs,
        pi: pi.pi,
    })
}

#[derive(Serialize)]
struct MareRow<'a> {
    scenario: &'a str,
    n_nodes: usize,
    n1: usize,
    lambda: f64,
    h: f64,
    m: f64,
    w: f64,
    alpha: f64,
    sampler: SamplerKind,
    n: usize,
    reps: usize,
    seed: u64,
    mare: Option<f64>,
    n_prime: Option<usize>,
    mass: Option<f64>,
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct RmseRow<'a> {
    scenario: &'a str,
    n_nodes: usize,
    n1: usize,
    lambda: f64,
    h: f64,
    m: f64,
    w: f64,
    alpha: f64,
    sampler: SamplerKind,
    n: usize,
    hajek_on: &'static str,
    reps: usize,
    seed: u64,
    mu_true: f64,
    defined: usize,
    undefined: usize,
    mean: Option<f64>,
    bias: Option<f64>,
    rmse: Option<f64>,
    min: Option<f64>,
    q1: Option<f64>,
    median: Option<f64>,
    q3: Option<f64>,
    max: Option<f64>,
}

#[derive(Serialize)]
struct EstimateRow<'a> {
    scenario: &'a str,
    sampler: SamplerKind,
    n: usize,
    hajek_on: &'static str,
    replicate: usize,
    seed: u64,
    mu_hat: Option<f64>,
}

fn write_tables(plan: &ExperimentPlan, cells: &[CellResult], dir: &Path) -> Result<()> {
    let configs: BTreeMap<&str, &ScenarioConfig> =
        plan.scenarios.iter().map(|s| (s.id.as_str(), &s.config)).collect();
    let scenario_columns = |cell: &CellResult| {
        let c = configs[cell.scenario.as_str()];
        (c.n, c.n1, c.lambda, c.h, c.m, c.w, c.alpha)
    };

    let mut mare_csv = csv::Writer::from_path(dir.join("mare.csv"))?;
    let mut rmse_csv = csv::Writer::from_path(dir.join("rmse.csv"))?;
    let mut est_csv = csv::Writer::from_path(dir.join("estimates.csv"))?;
    for cell in cells {
        let (n_nodes, n1, lambda, h, m, w, alpha) = scenario_columns(cell);
        if cell.sampler != SamplerKind::Rds {
            let metrics = cell.metrics.as_ref();
            mare_csv.serialize(MareRow {
                scenario: &cell.scenario,
                n_nodes,
                n1,
                lambda,
                h,
                m,
                w,
                alpha,
                sampler: cell.sampler,
                n: cell.n,
                reps: cell.reps,
                seed: cell.seed,
                mare: metrics.and_then(|m| m.mare).map(|m| m.mare),
                n_prime: metrics.and_then(|m| m.mare).map(|m| m.n_prime),
                mass: metrics.map(|m| m.mass),
                error: cell.error.as_deref(),
            })?;
        }
        let Some(metrics) = &cell.metrics else { continue };
        for run in &metrics.hajek {
            let s = run.result.summary;
            rmse_csv.serialize(RmseRow {
                scenario: &cell.scenario,
                n_nodes,
                n1,
                lambda,
                h,
                m,
                w,
                alpha,
                sampler: cell.sampler,
                n: cell.n,
                hajek_on: run.on.label(),
                reps: run.estimates.len(),
                seed: cell.seed,
                mu_true: run.result.mu_true,
                defined: run.result.estimates.len(),
                undefined: run.result.undefined,
                mean: s.map(|s| s.mean),
                bias: s.map(|s| s.bias),
                rmse: s.map(|s| s.rmse),
                min: s.map(|s| s.min),
                q1: s.map(|s| s.q1),
                median: s.map(|s| s.median),
                q3: s.map(|s| s.q3),
                max: s.map(|s| s.max),
            })?;
            for (r, (seed, mu_hat)) in run.seeds.iter().zip(&run.estimates).enumerate() {
                est_csv.serialize(EstimateRow {
                    scenario: &cell.scenario,
                    sampler: cell.sampler,
                    n: cell.n,
                    hajek_on: run.on.label(),
                    replicate: r,
                    seed: *seed,
                    mu_hat: *mu_hat,
                })?;
            }
        }
    }
    mare_csv.flush()?;
    rmse_csv.flush()?;
    est_csv.flush()?;
    Ok(())
}
