use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Context;
use netcap::metrics::{c_metric, hypervolume, igd, reference_front};
use netcap::stats::{rank_sum_test, MIN_SAMPLE};
use netcap::{Front, ReferencePoint};

use crate::experiment::Algorithm;
use crate::numfmt::g12;
use crate::results::ResultSet;

pub const SIGNIFICANCE: f64 = 0.05;

/// Outcome of a rank-sum test against the reference algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    /// The reference algorithm is significantly better.
    Worse,
    /// The reference algorithm is significantly worse.
    Better,
    /// No significant difference.
    Similar,
    /// Too few runs to test, or this is the reference algorithm itself.
    Untested,
}

impl Flag {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Worse => "†",
            Self::Better => "§",
            Self::Similar => "≈",
            Self::Untested => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunScore {
    pub algorithm: Algorithm,
    pub run_id: usize,
    pub hv: f64,
    pub igd: f64,
    /// Fraction of this run's front dominated by the reference front.
    pub c_ref: f64,
    pub front_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSummary {
    pub mean: f64,
    pub std: f64,
    pub flag: Flag,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub hv: MetricSummary,
    pub igd: MetricSummary,
    pub c_ref_mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub instance: String,
    pub reference_algorithm: Algorithm,
    pub reference_point: ReferencePoint,
    pub reference_front: Front,
    pub per_run: Vec<RunScore>,
    pub summaries: Vec<AlgorithmSummary>,
    /// `(a, b, mean C(a, b))` over all run pairs.
    pub pairwise_c: Vec<(Algorithm, Algorithm, f64)>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let std = if xs.len() > 1 { (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    (mean, std)
}

fn flag(reference: &[f64], other: &[f64], higher_is_better: bool) -> anyhow::Result<(Flag, Option<f64>)> {
    if reference.len() < MIN_SAMPLE || other.len() < MIN_SAMPLE {
        return Ok((Flag::Untested, None));
    }
    let r = rank_sum_test(reference, other)?;
    if r.p_value >= SIGNIFICANCE {
        return Ok((Flag::Similar, Some(r.p_value)));
    }
    // The statistic is the reference sample's rank sum: above its mean means larger values.
    let reference_larger = r.z > 0.0 || (r.z == 0.0 && mean_std(reference).0 > mean_std(other).0);
    let reference_better = reference_larger == higher_is_better;
    Ok((if reference_better { Flag::Worse } else { Flag::Better }, Some(r.p_value)))
}

/// Scores every run against the union reference front and reference point.
pub fn compare(set: &ResultSet) -> anyhow::Result<CompareReport> {
    let algorithms = set.algorithms();
    anyhow::ensure!(!algorithms.is_empty(), "no runs to compare");
    let fronts: Vec<&Front> = set.runs.iter().map(|r| &r.front).collect();
    let reference = reference_front(&fronts)?;
    let point = ReferencePoint::from_fronts(&fronts)?;
    let per_run = set
        .runs
        .iter()
        .map(|r| {
            Ok(RunScore {
                algorithm: r.algorithm,
                run_id: r.run_id,
                hv: hypervolume(&r.front, &point)?,
                igd: igd(&r.front, &reference)?,
                c_ref: c_metric(&reference, &r.front)?,
                front_size: r.front.len(),
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    let reference_algorithm =
        if algorithms.contains(&Algorithm::NcMopso) { Algorithm::NcMopso } else { algorithms[0] };
    let column = |a: Algorithm, f: fn(&RunScore) -> f64| -> Vec<f64> {
        per_run.iter().filter(|s| s.algorithm == a).map(f).collect()
    };
    let ref_hv = column(reference_algorithm, |s| s.hv);
    let ref_igd = column(reference_algorithm, |s| s.igd);
    let mut summaries = Vec::new();
    for &a in &algorithms {
        let hv = column(a, |s| s.hv);
        let ig = column(a, |s| s.igd);
        let ((hv_flag, hv_p), (igd_flag, igd_p)) = if a == reference_algorithm {
            ((Flag::Untested, None), (Flag::Untested, None))
        } else {
            (flag(&ref_hv, &hv, true)?, flag(&ref_igd, &ig, false)?)
        };
        let (hv_mean, hv_std) = mean_std(&hv);
        let (igd_mean, igd_std) = mean_std(&ig);
        summaries.push(AlgorithmSummary {
            algorithm: a,
            runs: hv.len(),
            hv: MetricSummary { mean: hv_mean, std: hv_std, flag: hv_flag, p_value: hv_p },
            igd: MetricSummary { mean: igd_mean, std: igd_std, flag: igd_flag, p_value: igd_p },
            c_ref_mean: mean_std(&column(a, |s| s.c_ref)).0,
        });
    }

    let mut pairwise_c = Vec::new();
    for &a in &algorithms {
        for &b in &algorithms {
            if a == b {
                continue;
            }
            let mut values = Vec::new();
            for ra in set.runs_of(a) {
                for rb in set.runs_of(b) {
                    values.push(c_metric(&ra.front, &rb.front)?);
                }
            }
            pairwise_c.push((a, b, mean_std(&values).0));
        }
    }

    Ok(CompareReport {
        instance: set.instance.clone(),
        reference_algorithm,
        reference_point: point,
        reference_front: reference,
        per_run,
        summaries,
        pairwise_c,
    })
}

impl CompareReport {
    pub fn summary(&self, algorithm: Algorithm) -> Option<&AlgorithmSummary> {
        self.summaries.iter().find(|s| s.algorithm == algorithm)
    }

    pub fn summary_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "algorithm", "runs", "hv_mean", "hv_std", "hv_flag", "hv_p", "igd_mean", "igd_std", "igd_flag", "igd_p",
            "c_ref_mean",
        ])?;
        let p = |m: &MetricSummary| m.p_value.map(g12).unwrap_or_default();
        for s in &self.summaries {
            w.write_record([
                s.algorithm.name().to_string(),
                s.runs.to_string(),
                g12(s.hv.mean),
                g12(s.hv.std),
                s.hv.flag.symbol().to_string(),
                p(&s.hv),
                g12(s.igd.mean),
                g12(s.igd.std),
                s.igd.flag.symbol().to_string(),
                p(&s.igd),
                g12(s.c_ref_mean),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn per_run_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["algorithm", "run", "hv", "igd", "c_ref", "front_size"])?;
        for s in &self.per_run {
            w.write_record([
                s.algorithm.name().to_string(),
                s.run_id.to_string(),
                g12(s.hv),
                g12(s.igd),
                g12(s.c_ref),
                s.front_size.to_string(),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn pairwise_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["a", "b", "c_mean"])?;
        for (a, b, c) in &self.pairwise_c {
            w.write_record([a.name(), b.name(), &g12(*c)])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance: {}", self.instance);
        let _ = writeln!(
            out,
            "reference point: lambda_c = {}, h_avg = {}; reference front: {} points",
            g12(self.reference_point.lambda_c_floor),
            g12(self.reference_point.h_avg_ceiling),
            self.reference_front.len()
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<12} {:>4}  {:<26} {:<26} {:>8}", "algorithm", "runs", "HV mean (std)", "IGD mean (std)", "C(ref,.)");
        for s in &self.summaries {
            let cell = |m: &MetricSummary| format!("{:.4e} ({:.2e}) {}", m.mean, m.std, m.flag.symbol());
            let _ = writeln!(
                out,
                "{:<12} {:>4}  {:<26} {:<26} {:>8.4}",
                s.algorithm.name(),
                s.runs,
                cell(&s.hv),
                cell(&s.igd),
                s.c_ref_mean
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "Rank-sum test against {} at the {}% level: † it is significantly better, § significantly worse, ≈ no significant difference.",
            self.reference_algorithm,
            SIGNIFICANCE * 100.0
        );
        if !self.pairwise_c.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "Mean C(a, b), the fraction of b's front dominated by a's:");
            for (a, b, c) in &self.pairwise_c {
                let _ = writeln!(out, "  C({a}, {b}) = {c:.4}");
            }
        }
        out
    }

    /// Writes `summary.csv`, `per_run.csv`, `c_metric.csv` and `report.txt`.
    pub fn write(&self, dir: &Path) -> anyhow::Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("summary.csv"), self.summary_csv()?)?;
        fs::write(dir.join("per_run.csv"), self.per_run_csv()?)?;
        fs::write(dir.join("c_metric.csv"), self.pairwise_csv()?)?;
        fs::write(dir.join("report.txt"), self.text())?;
        Ok(())
    }
}
