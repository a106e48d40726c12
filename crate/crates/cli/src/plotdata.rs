use std::fs;
use std::path::Path;

use anyhow::Context;
use netcap::metrics::hypervolume;
use netcap::{Front, ReferencePoint};

use crate::compare::CompareReport;
use crate::numfmt::g12;
use crate::results::ResultSet;

/// Row counts of the files written by [`write_plotdata`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotCounts {
    pub scatter: usize,
    pub boxplot: usize,
    pub convergence: usize,
}

/// Writes `scatter.csv` (final fronts), `boxplot.csv` (per-run HV and IGD)
/// and `convergence.csv` (HV of every generation's front).
///
/// Box-plot values match `compare`. Convergence HV uses its own reference
/// point, the worst corner over every recorded generation of every run, so
/// early generations stay inside the box.
pub fn write_plotdata(set: &ResultSet, report: &CompareReport, dir: &Path) -> anyhow::Result<PlotCounts> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut scatter = csv::Writer::from_writer(Vec::new());
    scatter.write_record(["algorithm", "run", "lambda_c", "h_avg"])?;
    let mut scatter_rows = 0;
    for run in &set.runs {
        for p in run.front.points() {
            scatter.write_record([run.algorithm.name(), &run.run_id.to_string(), &g12(p.lambda_c), &g12(p.h_avg)])?;
            scatter_rows += 1;
        }
    }
    fs::write(dir.join("scatter.csv"), scatter.into_inner()?)?;

    let mut boxplot = csv::Writer::from_writer(Vec::new());
    boxplot.write_record(["algorithm", "run", "hv", "igd"])?;
    for s in &report.per_run {
        boxplot.write_record([s.algorithm.name(), &s.run_id.to_string(), &g12(s.hv), &g12(s.igd)])?;
    }
    fs::write(dir.join("boxplot.csv"), boxplot.into_inner()?)?;

    let histories = set.runs.iter().map(|r| r.history()).collect::<anyhow::Result<Vec<_>>>()?;
    let point = ReferencePoint::from_points(histories.iter().flatten().flatten())?;
    let mut convergence = csv::Writer::from_writer(Vec::new());
    convergence.write_record(["algorithm", "run", "generation", "hv"])?;
    let mut convergence_rows = 0;
    for (run, history) in set.runs.iter().zip(&histories) {
        for (generation, pts) in history.iter().enumerate() {
            let hv = hypervolume(&Front::new(pts.iter().copied()), &point)?;
            convergence.write_record([run.algorithm.name(), &run.run_id.to_string(), &generation.to_string(), &g12(hv)])?;
            convergence_rows += 1;
        }
    }
    fs::write(dir.join("convergence.csv"), convergence.into_inner()?)?;

    Ok(PlotCounts { scatter: scatter_rows, boxplot: report.per_run.len(), convergence: convergence_rows })
}
