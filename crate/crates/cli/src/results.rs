use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use netcap::{Front, ObjectivePoint};

use crate::experiment::{Algorithm, Manifest, ResultRecord, RunOutput, MANIFEST_FILE};
use crate::instance::Fingerprint;

#[derive(Debug, Clone)]
pub struct LoadedRun {
    pub algorithm: Algorithm,
    pub run_id: usize,
    pub front: Front,
    pub dir: PathBuf,
}

impl LoadedRun {
    /// Objectives per generation from `history.csv`.
    pub fn history(&self) -> anyhow::Result<Vec<Vec<ObjectivePoint>>> {
        let path = self.dir.join("history.csv");
        let mut reader = csv::Reader::from_path(&path).with_context(|| format!("reading {}", path.display()))?;
        let mut out: Vec<Vec<ObjectivePoint>> = Vec::new();
        for row in reader.deserialize() {
            let (generation, lambda_c, h_avg): (usize, f64, f64) = row?;
            if generation >= out.len() {
                out.resize(generation + 1, Vec::new());
            }
            out[generation].push(ObjectivePoint::new(lambda_c, h_avg));
        }
        Ok(out)
    }
}

/// Every run of one or more result directories, grouped by algorithm.
#[derive(Debug, Clone)]
pub struct ResultSet {
    pub fingerprint: Fingerprint,
    pub instance: String,
    pub runs: Vec<LoadedRun>,
}

impl ResultSet {
    pub fn load(dirs: &[PathBuf]) -> anyhow::Result<Self> {
        if dirs.is_empty() {
            bail!("no result directories given");
        }
        let mut set: Option<ResultSet> = None;
        for dir in dirs {
            let manifest = Manifest::load(dir.join(MANIFEST_FILE))?;
            let runs = manifest
                .runs
                .iter()
                .map(|entry| load_run(dir, &entry.dir))
                .collect::<anyhow::Result<Vec<_>>>()?;
            match &mut set {
                None => {
                    set = Some(ResultSet {
                        fingerprint: manifest.fingerprint.clone(),
                        instance: manifest.spec.instance.to_string(),
                        runs,
                    })
                }
                Some(s) => {
                    if s.fingerprint != manifest.fingerprint {
                        bail!(
                            "{} was produced on a different network ({}) than {} ({})",
                            dir.display(),
                            manifest.spec.instance,
                            dirs[0].display(),
                            s.instance
                        );
                    }
                    s.runs.extend(runs);
                }
            }
        }
        let mut set = set.expect("at least one directory");
        set.runs.sort_by_key(|r| (r.algorithm, r.run_id));
        if set.runs.windows(2).any(|w| (w[0].algorithm, w[0].run_id) == (w[1].algorithm, w[1].run_id)) {
            bail!("the same (algorithm, run) appears in more than one directory");
        }
        Ok(set)
    }

    /// Builds a set from in-memory runs, as if they had been written and reloaded.
    pub fn from_outputs(fingerprint: Fingerprint, instance: String, outputs: &[RunOutput]) -> Self {
        let mut runs: Vec<LoadedRun> = outputs
            .iter()
            .map(|o| LoadedRun {
                algorithm: o.algorithm,
                run_id: o.run_id,
                front: Front::new(o.solutions.iter().map(|s| s.objectives)),
                dir: PathBuf::new(),
            })
            .collect();
        runs.sort_by_key(|r| (r.algorithm, r.run_id));
        Self { fingerprint, instance, runs }
    }

    pub fn algorithms(&self) -> Vec<Algorithm> {
        let mut algos: Vec<Algorithm> = self.runs.iter().map(|r| r.algorithm).collect();
        algos.dedup();
        algos
    }

    pub fn runs_of(&self, algorithm: Algorithm) -> impl Iterator<Item = &LoadedRun> {
        self.runs.iter().filter(move |r| r.algorithm == algorithm)
    }
}

fn load_run(root: &Path, rel: &Path) -> anyhow::Result<LoadedRun> {
    let dir = root.join(rel);
    let path = dir.join("record.json");
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let record: ResultRecord = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(LoadedRun {
        algorithm: record.algorithm,
        run_id: record.run_id,
        front: Front::new(record.front.iter().map(|p| p.objectives())),
        dir,
    })
}
