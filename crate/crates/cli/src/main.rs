use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use netcap::graph::{generate_ba, generate_ws, write_edgelist};
use netcap::sim::{SimConfig, TiePolicy};
use netcap::WeightVector;
use netcap_cli::experiment::{optimize, Algorithm, ExperimentSpec, Manifest, Preset};
use netcap_cli::plotdata::write_plotdata;
use netcap_cli::results::ResultSet;
use netcap_cli::simulate::{load_weights, parse_grid, run_simulation};
use netcap_cli::{compare, Instance};

#[derive(Parser)]
#[command(name = "netcap", version, about = "Edge-weight optimization for network transport capacity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic network as an edge list.
    Generate {
        #[command(subcommand)]
        model: Model,
    },
    /// Run optimizers and persist their fronts.
    Optimize(OptimizeArgs),
    /// Simulate packet traffic over a range of generation rates.
    Simulate(SimulateArgs),
    /// Score result directories against each other.
    Compare(CompareArgs),
    /// Emit scatter, box-plot and convergence data for result directories.
    Plotdata(CompareArgs),
}

#[derive(Subcommand)]
enum Model {
    /// Preferential attachment.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ring lattice with random rewiring.
    Ws {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OptimizeArgs {
    /// `ba:N:M[:SEED]`, `ws:N:K:P[:SEED]` or an edge-list file.
    #[arg(long, required_unless_present = "manifest")]
    instance: Option<Instance>,
    /// Comma-separated: nc-mopso, mopsocd, mopsocd-in, nsga2.
    #[arg(long, value_delimiter = ',', default_value = "nc-mopso")]
    algo: Vec<Algorithm>,
    #[arg(long, default_value = "paper")]
    preset: Preset,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    maxgen: Option<usize>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    hir: Option<f64>,
    #[arg(long)]
    nls: Option<usize>,
    #[arg(long)]
    archive: Option<usize>,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Run `i` uses seed `seed + i`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rerun the experiment recorded in this manifest; other settings are ignored.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ties {
    Lowest,
    Split,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    instance: Instance,
    /// `weights.json` from an optimize run; uniform weights when omitted.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Which weight vector of the file to use.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// `a,b,c` or `start:stop:step`.
    #[arg(long)]
    grid: String,
    /// Read grid values as multiples of the analytic capacity (capped at 1).
    #[arg(long)]
    relative: bool,
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    #[arg(long, default_value_t = 2_000)]
    warmup: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "lowest")]
    ties: Ties,
    /// Also write the per-step queue series of every grid point.
    #[arg(long)]
    series: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Directories written by `optimize`.
    #[arg(required = true)]
    dirs: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn spec_from(args: &OptimizeArgs) -> anyhow::Result<ExperimentSpec> {
    if let Some(path) = &args.manifest {
        return Ok(Manifest::load(path)?.spec);
    }
    let instance = args.instance.clone().context("--instance is required")?;
    let mut spec = ExperimentSpec::new(instance, args.algo.clone(), args.preset);
    if let Some(v) = args.pop {
        spec.engine.pop = v;
        spec.nsga2.pop = v;
    }
    if let Some(v) = args.maxgen {
        spec.engine.maxgen = v;
        spec.nsga2.maxgen = v;
    }
    let e = &mut spec.engine;
    e.c1 = args.c1.unwrap_or(e.c1);
    e.c2 = args.c2.unwrap_or(e.c2);
    e.omega = args.omega.unwrap_or(e.omega);
    e.hir = args.hir.unwrap_or(e.hir);
    e.n_ls = args.nls.unwrap_or(e.n_ls);
    e.archive = args.archive.unwrap_or(e.archive);
    spec.runs = args.runs;
    spec.seed_base = args.seed;
    Ok(spec)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate { model } => {
            let (net, header, out) = match model {
                Model::Ba { n, m, seed, out } => {
                    (generate_ba(n, m, seed)?, format!("model: ba n={n} m={m} seed={seed}"), out)
                }
                Model::Ws { n, k, p, seed, out } => {
                    (generate_ws(n, k, p, seed)?, format!("model: ws n={n} k={k} p={p} seed={seed}"), out)
                }
            };
            let stats = format!(
                "nodes={} edges={} average_degree={:.4}",
                net.node_count(),
                net.edge_count(),
                net.average_degree()
            );
            let text = write_edgelist(&net, &[header, stats.clone()]);
            match out {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                    eprintln!("{stats}");
                }
                None => print!("{text}"),
            }
        }
        Command::Optimize(args) => {
            let spec = spec_from(&args)?;
            let manifest = optimize(&spec, &args.out)?;
            println!(
                "{} runs on {} ({} nodes, {} edges) written to {}",
                manifest.runs.len(),
                spec.instance,
                manifest.network.nodes,
                manifest.network.edges,
                args.out.display()
            );
        }
        Command::Simulate(args) => {
            let net = args.instance.build()?;
            let x = match &args.weights {
                Some(path) => load_weights(path, args.index, &net)?,
                None => WeightVector::uniform(net.edge_count()),
            };
            let mut grid = parse_grid(&args.grid).unwrap_or_else(|e| {
                Cli::command().error(clap::error::ErrorKind::InvalidValue, format!("--grid: {e}")).exit()
            });
            if args.relative {
                let lc = netcap::routing::evaluate(&net, &x)?.lambda_c;
                grid = grid.into_iter().map(|g| g * lc).filter(|&l| l <= 1.0).collect();
                anyhow::ensure!(!grid.is_empty(), "no relative grid point falls at or below lambda = 1");
            }
            let ties = match args.ties {
                Ties::Lowest => TiePolicy::LowestId,
                Ties::Split => TiePolicy::PathSplit,
            };
            let cfg = SimConfig { ties, ..SimConfig::new(0.0, args.steps, args.warmup, args.seed) };
            let output = run_simulation(&net, &x, &grid, &cfg)?;
            match &args.out {
                Some(dir) => output.write(dir, args.series)?,
                None => print!("{}", output.sweep_csv()?),
            }
            eprint!("{}", output.text());
        }
        Command::Compare(args) => {
            let set = ResultSet::load(&args.dirs)?;
            let report = compare(&set)?;
            report.write(&args.out)?;
            print!("{}", report.text());
        }
        Command::Plotdata(args) => {
            let set = ResultSet::load(&args.dirs)?;
            let report = compare(&set)?;
            let counts = write_plotdata(&set, &report, &args.out)?;
            println!(
                "scatter: {} rows, boxplot: {} rows, convergence: {} rows",
                counts.scatter, counts.boxplot, counts.convergence
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
