use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context};
use netcap::routing::evaluate;
use netcap::sim::{onset_from_sweep, sweep, OnsetEstimate, RoutingTable, SimConfig, SimReport};
use netcap::{Network, WeightVector};
use serde::Serialize;

use crate::experiment::WeightsFile;
use crate::numfmt::g12;

/// Parses `a,b,c` or `start:stop:step` (inclusive of `stop` up to rounding).
pub fn parse_grid(text: &str) -> anyhow::Result<Vec<f64>> {
    let text = text.trim();
    let grid: Vec<f64> = if text.is_empty() {
        Vec::new()
    } else if text.contains(':') {
        let parts: Vec<f64> = text.split(':').map(|p| p.trim().parse()).collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else { bail!("range grid must be start:stop:step") };
        ensure!(step > 0.0, "grid step must be positive");
        let count = ((stop - start) / step + 1e-9).floor();
        ensure!(count >= 0.0, "grid stop lies below its start");
        (0..=count as usize).map(|i| start + step * i as f64).collect()
    } else {
        text.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>()?
    };
    ensure!(!grid.is_empty(), "the lambda grid is empty");
    ensure!(grid.windows(2).all(|w| w[0] < w[1]), "the lambda grid must be strictly ascending");
    Ok(grid)
}

/// Weight vector `index` of a `weights.json`, checked against `net`.
pub fn load_weights(path: &Path, index: usize, net: &Network) -> anyhow::Result<WeightVector> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: WeightsFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    ensure!(file.edges == net.edges(), "{} was written for a different network", path.display());
    let Some(point) = file.solutions.get(index) else {
        bail!("{} holds {} weight vectors; index {index} is out of range", path.display(), file.solutions.len());
    };
    Ok(WeightVector::new(point.weights.clone())?)
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSummary {
    pub analytic_lambda_c: f64,
    pub analytic_unbounded: bool,
    /// `None` when no grid point congested.
    pub empirical_lambda_c: Option<f64>,
    pub relative_error: Option<f64>,
    pub grid: Vec<f64>,
    pub growth_rates: Vec<f64>,
}

pub struct SimulationOutput {
    pub summary: SimulationSummary,
    pub reports: Vec<SimReport>,
}

/// Sweeps `grid`, estimates the congestion onset and compares it with the analytic capacity.
pub fn run_simulation(net: &Network, x: &WeightVector, grid: &[f64], cfg: &SimConfig) -> anyhow::Result<SimulationOutput> {
    let analytic = evaluate(net, x)?;
    let table = RoutingTable::build_with(net, x, cfg.ties)?;
    let reports = sweep(&table, grid, cfg)?;
    let estimate = onset_from_sweep(&table, grid, &reports, cfg)?;
    let empirical = match estimate {
        OnsetEstimate::Onset(v) => Some(v),
        OnsetEstimate::AboveGrid => None,
    };
    let summary = SimulationSummary {
        analytic_lambda_c: analytic.lambda_c,
        analytic_unbounded: analytic.is_unbounded(),
        empirical_lambda_c: empirical,
        relative_error: empirical.filter(|_| !analytic.is_unbounded()).map(|e| e / analytic.lambda_c - 1.0),
        grid: grid.to_vec(),
        growth_rates: reports.iter().map(|r| r.queue_growth_rate).collect(),
    };
    Ok(SimulationOutput { summary, reports })
}

impl SimulationOutput {
    /// One row per grid point.
    pub fn sweep_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["lambda", "growth_rate", "generated", "delivered", "final_mean_queue", "max_queue_node"])?;
        for (lambda, r) in self.summary.grid.iter().zip(&self.reports) {
            w.write_record([
                g12(*lambda),
                g12(r.queue_growth_rate),
                r.generated.to_string(),
                r.delivered.to_string(),
                g12(r.mean_queue_series.last().copied().unwrap_or(0.0)),
                r.max_queue_node.to_string(),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn text(&self) -> String {
        let s = &self.summary;
        let analytic = if s.analytic_unbounded { "unbounded".to_string() } else { g12(s.analytic_lambda_c) };
        match (s.empirical_lambda_c, s.relative_error) {
            (Some(e), Some(rel)) => {
                format!("analytic lambda_c = {analytic}, simulated onset = {} ({:+.1}%)\n", g12(e), rel * 100.0)
            }
            (Some(e), None) => format!("analytic lambda_c = {analytic}, simulated onset = {}\n", g12(e)),
            (None, _) => format!("analytic lambda_c = {analytic}, simulated onset above the grid\n"),
        }
    }

    /// Writes `sweep.csv`, `summary.json` and, when `series` is set, one
    /// `steps_<k>.csv` per grid point.
    pub fn write(&self, dir: &Path, series: bool) -> anyhow::Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("sweep.csv"), self.sweep_csv()?)?;
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&self.summary)?)?;
        if series {
            for (k, r) in self.reports.iter().enumerate() {
                fs::write(dir.join(format!("steps_{k:02}.csv")), r.to_csv())?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.1,0.2,0.5").unwrap(), vec![0.1, 0.2, 0.5]);
        let g = parse_grid("0.05:0.6:0.05").unwrap();
        assert_eq!(g.len(), 12);
        assert!((g[11] - 0.6).abs() < 1e-12);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("0.5:0.1:0.1").is_err());
        assert!(parse_grid("0.2,0.1").is_err());
        assert!(parse_grid("0.1:0.2").is_err());
    }
}
