use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, ensure, Context};
use netcap::baselines::{nsga2_run_observed, Nsga2Config};
use netcap::engine::{self, EngineConfig, Operators};
use netcap::{Network, ObjectivePoint, Solution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::instance::{Fingerprint, Instance};
use crate::numfmt::g12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    NcMopso,
    Mopsocd,
    MopsocdIn,
    Nsga2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Self::NcMopso, Self::Mopsocd, Self::MopsocdIn, Self::Nsga2];

    pub fn name(self) -> &'static str {
        match self {
            Self::NcMopso => "nc-mopso",
            Self::Mopsocd => "mopsocd",
            Self::MopsocdIn => "mopsocd-in",
            Self::Nsga2 => "nsga2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .with_context(|| format!("unknown algorithm {s:?} (expected nc-mopso, mopsocd, mopsocd-in or nsga2)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Paper,
    Desk,
}

impl FromStr for Preset {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "paper" => Ok(Self::Paper),
            "desk" => Ok(Self::Desk),
            _ => bail!("unknown preset {s:?} (expected paper or desk)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineSettings {
    pub pop: usize,
    pub maxgen: usize,
    pub c1: f64,
    pub c2: f64,
    pub omega: f64,
    pub archive: usize,
    pub hir: f64,
    pub n_ls: usize,
}

impl From<&EngineConfig> for EngineSettings {
    fn from(c: &EngineConfig) -> Self {
        Self {
            pop: c.pop,
            maxgen: c.maxgen,
            c1: c.c1,
            c2: c.c2,
            omega: c.omega,
            archive: c.archive_capacity,
            hir: c.hir,
            n_ls: c.n_ls,
        }
    }
}

impl EngineSettings {
    pub fn config(&self, seed: u64) -> EngineConfig {
        EngineConfig {
            pop: self.pop,
            maxgen: self.maxgen,
            c1: self.c1,
            c2: self.c2,
            omega: self.omega,
            archive_capacity: self.archive,
            hir: self.hir,
            n_ls: self.n_ls,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nsga2Settings {
    pub pop: usize,
    pub maxgen: usize,
    pub p_c: f64,
    /// `None` means one over the edge count.
    pub p_m: Option<f64>,
    pub eta_c: f64,
    pub eta_m: f64,
}

impl From<&Nsga2Config> for Nsga2Settings {
    fn from(c: &Nsga2Config) -> Self {
        Self { pop: c.pop, maxgen: c.maxgen, p_c: c.p_c, p_m: c.p_m, eta_c: c.eta_c, eta_m: c.eta_m }
    }
}

impl Nsga2Settings {
    pub fn config(&self, seed: u64) -> Nsga2Config {
        Nsga2Config {
            pop: self.pop,
            maxgen: self.maxgen,
            p_c: self.p_c,
            p_m: self.p_m,
            eta_c: self.eta_c,
            eta_m: self.eta_m,
            seed,
        }
    }
}

/// Everything needed to reproduce a batch of runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub instance: Instance,
    pub algorithms: Vec<Algorithm>,
    pub engine: EngineSettings,
    pub nsga2: Nsga2Settings,
    pub runs: usize,
    /// Run `i` uses seed `seed_base + i`.
    pub seed_base: u64,
    pub preset: Preset,
}

impl ExperimentSpec {
    pub fn new(instance: Instance, algorithms: Vec<Algorithm>, preset: Preset) -> Self {
        let (engine, nsga2) = match preset {
            Preset::Paper => (EngineConfig::paper(), Nsga2Config::paper()),
            Preset::Desk => (EngineConfig::desk(), Nsga2Config::desk()),
        };
        Self {
            instance,
            algorithms,
            engine: (&engine).into(),
            nsga2: (&nsga2).into(),
            runs: 1,
            seed_base: 0,
            preset,
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(self.runs >= 1, "runs must be at least 1");
        ensure!(!self.algorithms.is_empty(), "at least one algorithm is required");
        let mut sorted = self.algorithms.clone();
        sorted.sort();
        sorted.dedup();
        ensure!(sorted.len() == self.algorithms.len(), "algorithms must not repeat");
        self.engine.config(0).validate()?;
        if self.algorithms.contains(&Algorithm::Nsga2) {
            self.nsga2.config(0).validate()?;
        }
        Ok(())
    }

    pub fn seed(&self, run_id: usize) -> u64 {
        self.seed_base.wrapping_add(run_id as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub nodes: usize,
    pub edges: usize,
    pub average_degree: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub algorithm: Algorithm,
    pub run_id: usize,
    pub seed: u64,
    /// Relative to the manifest's directory.
    pub dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: ExperimentSpec,
    pub network: NetworkSummary,
    pub fingerprint: Fingerprint,
    pub runs: Vec<RunEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl Manifest {
    pub fn load(path: impl AsRef<Path>) -> anyhow::Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub lambda_c: f64,
    pub h_avg: f64,
    /// The capacity is the sentinel for "no node relays traffic".
    pub unbounded: bool,
}

impl From<&ObjectivePoint> for PointRecord {
    fn from(p: &ObjectivePoint) -> Self {
        Self { lambda_c: p.lambda_c, h_avg: p.h_avg, unbounded: p.is_unbounded() }
    }
}

impl PointRecord {
    pub fn objectives(&self) -> ObjectivePoint {
        ObjectivePoint::new(self.lambda_c, self.h_avg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub front_size: usize,
    pub max_lambda_c: f64,
    pub min_h_avg: f64,
}

/// Per-run record with full-precision objectives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub run_id: usize,
    pub algorithm: Algorithm,
    pub instance: Instance,
    pub seed: u64,
    pub wall_time_s: f64,
    pub front: Vec<PointRecord>,
    pub metrics: RunSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsFile {
    pub edges: Vec<(usize, usize)>,
    pub solutions: Vec<WeightedPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub lambda_c: f64,
    pub h_avg: f64,
    pub weights: Vec<f64>,
}

/// A finished run before it is written out.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub algorithm: Algorithm,
    pub run_id: usize,
    pub seed: u64,
    /// Sorted by descending capacity, then ascending hop count.
    pub solutions: Vec<Solution>,
    /// Archive (or first-front) objectives after initialization and each generation.
    pub history: Vec<Vec<ObjectivePoint>>,
    pub wall_time_s: f64,
}

fn order(a: &ObjectivePoint, b: &ObjectivePoint) -> std::cmp::Ordering {
    b.lambda_c.total_cmp(&a.lambda_c).then(a.h_avg.total_cmp(&b.h_avg))
}

/// Runs one algorithm once with seed `spec.seed(run_id)`.
pub fn run_one(net: &Network, spec: &ExperimentSpec, algorithm: Algorithm, run_id: usize) -> anyhow::Result<RunOutput> {
    let seed = spec.seed(run_id);
    let started = Instant::now();
    let mut history: Vec<Vec<ObjectivePoint>> = Vec::new();
    let mut record = |mut pts: Vec<ObjectivePoint>| {
        pts.sort_by(order);
        history.push(pts);
    };
    let mut solutions = if algorithm == Algorithm::Nsga2 {
        nsga2_run_observed(net, &spec.nsga2.config(seed), |_, front| {
            record(front.iter().map(|s| s.objectives).collect())
        })?
    } else {
        let cfg = spec.engine.config(seed);
        let ops = match algorithm {
            Algorithm::NcMopso => Operators::nc_mopso(&cfg),
            Algorithm::Mopsocd => Operators::mopsocd(),
            _ => Operators::mopsocd_in(&cfg),
        };
        engine::run_observed(net, &cfg, ops, |state: &engine::Mopso<'_, f64>| record(state.archive().objectives()))?
            .into_solutions()
    };
    solutions.sort_by(|a, b| order(&a.objectives, &b.objectives));
    Ok(RunOutput { algorithm, run_id, seed, solutions, history, wall_time_s: started.elapsed().as_secs_f64() })
}

pub fn run_dir(algorithm: Algorithm, run_id: usize) -> PathBuf {
    PathBuf::from(algorithm.name()).join(format!("run_{run_id:03}"))
}

/// `lambda_c,h_avg` rows at twelve significant digits.
pub fn front_csv(points: impl IntoIterator<Item = ObjectivePoint>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lambda_c", "h_avg"])?;
    for p in points {
        w.write_record([g12(p.lambda_c), g12(p.h_avg)])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn history_csv(history: &[Vec<ObjectivePoint>]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["generation", "lambda_c", "h_avg"])?;
    for (generation, pts) in history.iter().enumerate() {
        for p in pts {
            w.write_record([generation.to_string(), p.lambda_c.to_string(), p.h_avg.to_string()])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes `front.csv`, `weights.json`, `record.json` and `history.csv` for one run.
pub fn write_run(root: &Path, spec: &ExperimentSpec, net: &Network, out: &RunOutput) -> anyhow::Result<()> {
    let dir = root.join(run_dir(out.algorithm, out.run_id));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let objs: Vec<ObjectivePoint> = out.solutions.iter().map(|s| s.objectives).collect();
    fs::write(dir.join("front.csv"), front_csv(objs.iter().copied())?)?;
    let weights = WeightsFile {
        edges: net.edges().to_vec(),
        solutions: out
            .solutions
            .iter()
            .map(|s| WeightedPoint {
                lambda_c: s.objectives.lambda_c,
                h_avg: s.objectives.h_avg,
                weights: s.weights.as_slice().to_vec(),
            })
            .collect(),
    };
    fs::write(dir.join("weights.json"), serde_json::to_string(&weights)?)?;
    let record = ResultRecord {
        run_id: out.run_id,
        algorithm: out.algorithm,
        instance: spec.instance.clone(),
        seed: out.seed,
        wall_time_s: out.wall_time_s,
        front: objs.iter().map(PointRecord::from).collect(),
        metrics: RunSummary {
            front_size: objs.len(),
            max_lambda_c: objs.iter().map(|p| p.lambda_c).fold(f64::NEG_INFINITY, f64::max),
            min_h_avg: objs.iter().map(|p| p.h_avg).fold(f64::INFINITY, f64::min),
        },
    };
    fs::write(dir.join("record.json"), serde_json::to_string_pretty(&record)?)?;
    fs::write(dir.join("history.csv"), history_csv(&out.history)?)?;
    Ok(())
}

/// Worker pool capped by `NETCAP_THREADS` when set.
pub fn thread_pool() -> anyhow::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("NETCAP_THREADS") {
        let n: usize = v.parse().with_context(|| format!("NETCAP_THREADS={v:?} is not a count"))?;
        ensure!(n >= 1, "NETCAP_THREADS must be at least 1");
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

/// Runs every (algorithm, run) pair of `spec`, writing each run as soon as
/// it finishes and the manifest up front. Returns the manifest.
pub fn optimize(spec: &ExperimentSpec, out_dir: &Path) -> anyhow::Result<Manifest> {
    spec.validate()?;
    let net = spec.instance.build()?;
    let runs: Vec<RunEntry> = spec
        .algorithms
        .iter()
        .flat_map(|&algorithm| {
            (0..spec.runs).map(move |run_id| RunEntry {
                algorithm,
                run_id,
                seed: spec.seed(run_id),
                dir: run_dir(algorithm, run_id),
            })
        })
        .collect();
    let manifest = Manifest {
        spec: spec.clone(),
        network: NetworkSummary {
            nodes: net.node_count(),
            edges: net.edge_count(),
            average_degree: net.average_degree(),
        },
        fingerprint: Fingerprint::of(&net),
        runs,
    };
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    fs::write(out_dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)?)?;

    thread_pool()?.install(|| {
        manifest.runs.par_iter().try_for_each(|entry| -> anyhow::Result<()> {
            let out = run_one(&net, spec, entry.algorithm, entry.run_id)?;
            write_run(out_dir, spec, &net, &out)?;
            log::info!(
                "{} run {} (seed {}): {} points in {:.2}s",
                entry.algorithm,
                entry.run_id,
                entry.seed,
                out.solutions.len(),
                out.wall_time_s
            );
            Ok(())
        })
    })?;
    Ok(manifest)
}
