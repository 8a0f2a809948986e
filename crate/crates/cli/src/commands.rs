use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use rdslab::acm::{check_mean_compatibility, generate_acm, DegreeDistributionSpec};
use rdslab::blockmodel::{generate_block_network, plan_edges, ScenarioConfig};
use rdslab::estimators::{estimate_inclusion, mare, EstimatorResult};
use rdslab::experiment::{build_default_plan, replicate_seed, run_plan, ExperimentPlan};
use rdslab::graph::{block_edge_counts, network_stats, InRatios};
use rdslab::ingest::{assign_status_prefix, canonicalize, read_snap_edgelist, thin_block_triangle, Thinning};
use rdslab::samplers::{
    FirstDraw, PreparedSampler, RdsParams, SampleRecord, SamplerKind, SamplerParams, SuccessiveOptions,
};
use rdslab::seed::{derive_seed, rng_from_seed};
use rdslab::{Error, Network, Result, Status};

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn stats_json(net: &Network) -> serde_json::Value {
    json!({
        "n": net.n(),
        "infected": net.count_status(Status::Infected),
        "directed_edges": net.directed().len(),
        "undirected_edges": net.undirected().len(),
        "adjacency_entries": net.adjacency_entries(),
        "blocks": block_edge_counts(net),
        "stats": network_stats(net),
    })
}

#[derive(Args)]
pub struct GenAcmArgs {
    /// JSON degree law, e.g. {"family":"poisson","infected":{...},"uninfected":{...}}.
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    #[arg(long)]
    n: usize,
    /// Infected nodes; they take ids 0..n1.
    #[arg(long)]
    n1: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Relative tolerance of the mean-balance check.
    #[arg(long, default_value_t = 1e-9)]
    compat_tol: f64,
    /// Fail instead of warning when the degree means are unbalanced.
    #[arg(long)]
    require_compatible: bool,
}

pub fn gen_acm(a: GenAcmArgs) -> Result<()> {
    let spec: DegreeDistributionSpec = serde_json::from_str(&fs::read_to_string(&a.spec)?)?;
    if a.n1 == 0 || a.n1 >= a.n {
        return Err(Error::Input(format!("need 0 < n1 < n, got n1 = {}, n = {}", a.n1, a.n)));
    }
    let phi = a.n1 as f64 / (a.n - a.n1) as f64;
    let violations = check_mean_compatibility(&spec, phi, a.compat_tol)?;
    for v in &violations {
        log::warn!("unbalanced degree means: {} ({} vs {})", v.condition, v.lhs, v.rhs);
    }
    if a.require_compatible && !violations.is_empty() {
        return Err(Error::Infeasible(format!(
            "{} mean-balance condition(s) violated, first: {}",
            violations.len(),
            violations[0].condition
        )));
    }
    let acm = generate_acm(&spec, a.n, a.n1, &mut rng_from_seed(a.seed))?;
    acm.network.write_json(&a.out)?;
    print_json(&json!({
        "simplification": acm.report,
        "violations": violations,
        "network": stats_json(&acm.network),
    }))
}

#[derive(Args)]
pub struct GenBlockArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    n1: usize,
    /// Mean number of adjacency entries per node.
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    h: f64,
    #[arg(long)]
    m: f64,
    #[arg(long)]
    w: f64,
    /// Share of directed edges among all edges.
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

pub fn gen_block(a: GenBlockArgs) -> Result<()> {
    let cfg = ScenarioConfig {
        n: a.n,
        n1: a.n1,
        lambda: a.lambda,
        h: a.h,
        m: a.m,
        w: a.w,
        alpha: a.alpha,
        seed: a.seed,
    };
    let plan = plan_edges(&cfg)?;
    let net = generate_block_network(&cfg)?;
    net.write_json(&a.out)?;
    print_json(&json!({ "budget": plan, "network": stats_json(&net) }))
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Rds,
    Wrpi,
    SsIn,
    SsPi,
    SsPa,
}

impl From<SamplerArg> for SamplerKind {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Rds => SamplerKind::Rds,
            SamplerArg::Wrpi => SamplerKind::Wrpi,
            SamplerArg::SsIn => SamplerKind::SsIn,
            SamplerArg::SsPi => SamplerKind::SsPi,
            SamplerArg::SsPa => SamplerKind::SsPa,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FirstDrawArg {
    InDegree,
    Uniform,
}

#[derive(Args)]
pub struct SampleArgs {
    #[arg(long, value_name = "FILE")]
    net: PathBuf,
    #[arg(long, value_enum)]
    sampler: SamplerArg,
    /// Sample size.
    #[arg(long)]
    n: usize,
    /// RDS seeds.
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    /// RDS coupons per recruit.
    #[arg(long, default_value_t = 2)]
    coupons: usize,
    /// Base seed; replicate r uses a seed derived from (seed, r).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Successive samplers: law of the first draw.
    #[arg(long, value_enum, default_value = "in-degree")]
    first_draw: FirstDrawArg,
    /// Successive samplers: continue uniformly once no unsampled node has positive in-degree.
    #[arg(long)]
    zero_size_fallback: bool,
    /// SS_PA ratios as R(1<-1),R(1<-0),R(0<-1),R(0<-0); defaults to the network's own.
    #[arg(long, value_name = "R11,R10,R01,R00")]
    ratios: Option<String>,
    /// JSON-lines output; stdout when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn parse_ratios(s: &str) -> Result<InRatios> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Input(format!("ratios `{s}` must be four comma-separated numbers")))?;
    let [r11, r10, r01, r00] = v[..] else {
        return Err(Error::Input(format!("ratios `{s}` must be four comma-separated numbers")));
    };
    // Indexed [toward][from].
    let ratios = InRatios([[r00, r01], [r10, r11]]);
    ratios.validate()?;
    Ok(ratios)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn sample(a: SampleArgs) -> Result<()> {
    let net = Network::read_json(&a.net)?;
    if a.n > net.n() {
        return Err(Error::Input(format!("sample size {} exceeds population {}", a.n, net.n())));
    }
    let params = SamplerParams {
        rds: RdsParams { seeds: a.seeds, coupons: a.coupons },
        successive: SuccessiveOptions {
            first_draw: match a.first_draw {
                FirstDrawArg::InDegree => FirstDraw::InDegree,
                FirstDrawArg::Uniform => FirstDraw::Uniform,
            },
            zero_size_fallback: a.zero_size_fallback,
        },
        ratios: a.ratios.as_deref().map(parse_ratios).transpose()?,
    };
    let sampler = PreparedSampler::new(&net, a.sampler.into(), &params)?;
    let records: Vec<SampleRecord> = (0..a.reps)
        .into_par_iter()
        .map(|r| sampler.draw(a.n, replicate_seed(a.seed, r)))
        .collect::<Result<_>>()?;
    let mut out = output(a.out.as_deref())?;
    for r in &records {
        serde_json::to_writer(&mut out, r)?;
        writeln!(out)?;
    }
    out.flush()?;
    let restarts: usize = records.iter().map(|r| r.restarts).sum();
    if restarts > 0 {
        log::info!("{restarts} reseeds or restarts across {} records", records.len());
    }
    Ok(())
}

#[derive(Args)]
pub struct EstimateArgs {
    /// JSON-lines sample records of one sampler.
    #[arg(long, value_name = "FILE")]
    records: PathBuf,
    /// Population size; taken from --net when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Network the records came from; enables Hájek prevalence estimates.
    #[arg(long, value_name = "FILE")]
    net: Option<PathBuf>,
    /// RDS records to compare against (MARE).
    #[arg(long, value_name = "FILE")]
    reference: Option<PathBuf>,
    /// CSV of node_id,pi_hat.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

fn read_records(path: &Path) -> Result<Vec<SampleRecord>> {
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(
            serde_json::from_str(&line).map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })?,
        );
    }
    Ok(records)
}

pub fn estimate(a: EstimateArgs) -> Result<()> {
    let net = a.net.as_deref().map(Network::read_json).transpose()?;
    let n = match (a.n, &net) {
        (Some(n), Some(net)) if n != net.n() => {
            return Err(Error::Input(format!("--n {n} disagrees with the network's {} nodes", net.n())))
        }
        (Some(n), _) => n,
        (None, Some(net)) => net.n(),
        (None, None) => return Err(Error::Input("give --n or --net".into())),
    };
    let records = read_records(&a.records)?;
    let pi = estimate_inclusion(&records, n)?;

    let mut csv = BufWriter::new(File::create(&a.out)?);
    writeln!(csv, "node_id,pi_hat")?;
    for (i, p) in pi.pi.iter().enumerate() {
        writeln!(csv, "{i},{p}")?;
    }
    csv.flush()?;

    let mut summary = json!({
        "sampler": pi.sampler,
        "n": n,
        "n_samp": pi.n_samp,
        "mass": pi.mass(),
        "sampled_nodes": pi.pi.iter().filter(|p| **p > 0.0).count(),
    });
    if let Some(path) = &a.reference {
        let reference = estimate_inclusion(&read_records(path)?, n)?;
        summary["mare"] = json!(mare(&pi, &reference)?);
    }
    if let Some(net) = &net {
        let mu = net.count_status(Status::Infected) as f64 / n as f64;
        let result = EstimatorResult::from_records(&records, &pi, net.statuses(), mu)?;
        summary["hajek"] = json!({
            "mu_true": mu,
            "undefined": result.undefined,
            "summary": result.summary,
        });
    }
    print_json(&summary)
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["plan", "default"])))]
pub struct ExperimentArgs {
    /// Plan JSON.
    #[arg(long, value_name = "FILE")]
    plan: Option<PathBuf>,
    /// The full 36-network grid.
    #[arg(long)]
    default: bool,
    /// Replicate scale for --default, in (0, 1].
    #[arg(long, default_value_t = 1.0, requires = "default")]
    scale: f64,
    /// Output directory; overrides the plan's.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

pub fn experiment(a: ExperimentArgs) -> Result<()> {
    let plan: ExperimentPlan = match &a.plan {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
        None => build_default_plan(a.scale)?,
    };
    let dir = a
        .out_dir
        .or_else(|| plan.output_dir.clone())
        .ok_or_else(|| Error::Input("no output directory: pass --out-dir or set output_dir in the plan".into()))?;
    let report = run_plan(&plan, &dir)?;
    let failed: Vec<_> = report
        .failed()
        .map(|c| json!({ "cell": c.key(), "error": c.error }))
        .collect();
    print_json(&json!({
        "out_dir": dir,
        "cells": report.cells.len(),
        "computed": report.computed,
        "skipped": report.skipped,
        "failed": failed,
    }))
}

#[derive(Args)]
pub struct IngestArgs {
    /// SNAP edge list.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Infect the k nodes with the smallest external ids.
    #[arg(long, value_name = "K")]
    infect_first: Option<usize>,
    /// Thinning `from,to,upper|lower,fraction`, applied in order; repeatable.
    #[arg(long, value_name = "SPEC")]
    thin: Vec<Thinning>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

pub fn ingest(a: IngestArgs) -> Result<()> {
    let raw = read_snap_edgelist(&a.input)?;
    let ingested = canonicalize(&raw)?;
    let mut net = ingested.network;
    if let Some(k) = a.infect_first {
        net = net.with_status(assign_status_prefix(&net, k)?)?;
    } else if !a.thin.is_empty() {
        return Err(Error::Input("--thin needs statuses; pass --infect-first".into()));
    }
    let before = stats_json(&net);
    let mut thinning = Vec::new();
    for (k, spec) in a.thin.iter().enumerate() {
        let (thinned, rep) = thin_block_triangle(&net, spec, derive_seed(a.seed, &[k as u64]))?;
        thinning.push(json!({ "spec": spec.to_string(), "report": rep }));
        net = thinned;
    }
    net.write_json(&a.out)?;
    print_json(&json!({
        "comment_lines": raw.comment_lines,
        "canonicalization": ingested.report,
        "first_external_id": ingested.external_ids.first(),
        "last_external_id": ingested.external_ids.last(),
        "before_thinning": before,
        "thinning": thinning,
        "network": stats_json(&net),
    }))
}

#[derive(Args)]
pub struct StatsArgs {
    #[arg(long, value_name = "FILE")]
    net: PathBuf,
}

pub fn stats(a: StatsArgs) -> Result<()> {
    print_json(&stats_json(&Network::read_json(&a.net)?))
}
