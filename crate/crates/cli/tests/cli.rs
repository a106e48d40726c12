use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netcap::metrics::{hypervolume, igd};
use netcap::{Front, ObjectivePoint, ReferencePoint};
use netcap_cli::experiment::{
    run_one, Algorithm, ExperimentSpec, Manifest, NetworkSummary, PointRecord, Preset, ResultRecord, RunEntry,
    RunSummary, MANIFEST_FILE,
};
use netcap_cli::instance::Fingerprint;
use netcap_cli::{compare, Instance, ResultSet};
use tempfile::TempDir;

fn netcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcap")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = netcap(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data_lines(text: &str) -> usize {
    text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count()
}

#[test]
fn generate_reports_table_sizes() {
    assert_eq!(data_lines(&ok(&["generate", "ws", "--n", "100", "--k", "4", "--p", "0.1"])), 200);
    let text = ok(&["generate", "ba", "--n", "100", "--m", "2", "--seed", "42"]);
    assert_eq!(data_lines(&text), 196);
    assert!(text.starts_with("# model: ba n=100 m=2 seed=42\n# nodes=100 edges=196 average_degree=3.9200\n"));
}

#[test]
fn generate_without_n_is_a_usage_error() {
    let out = netcap(&["generate", "ba", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
}

#[test]
fn generated_file_loads_with_same_size() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("ws.txt");
    ok(&["generate", "ws", "--n", "40", "--k", "4", "--p", "0.2", "--out", path_str(&file)]);
    let net = Instance::File(file).build().unwrap();
    assert_eq!((net.node_count(), net.edge_count()), (40, 80));
}

#[test]
fn zero_generation_smoke_run() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r");
    ok(&[
        "optimize", "--instance", "ba:20:2", "--algo", "nc-mopso,nsga2", "--preset", "desk", "--maxgen", "0",
        "--pop", "8", "--out", path_str(&out),
    ]);
    for algo in ["nc-mopso", "nsga2"] {
        let front = fs::read_to_string(out.join(algo).join("run_000/front.csv")).unwrap();
        assert!(front.starts_with("lambda_c,h_avg\n"));
        assert!(front.lines().count() >= 2);
    }
}

fn front_csvs(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let manifest = Manifest::load(root.join(MANIFEST_FILE)).unwrap();
    manifest
        .runs
        .iter()
        .map(|r| (r.dir.clone(), fs::read(root.join(&r.dir).join("front.csv")).unwrap()))
        .collect()
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    let args = |out: &Path| {
        vec![
            "optimize".to_string(),
            "--instance".into(),
            "ws:24:4:0.2:5".into(),
            "--algo".into(),
            "nc-mopso,mopsocd,mopsocd-in,nsga2".into(),
            "--preset".into(),
            "desk".into(),
            "--pop".into(),
            "10".into(),
            "--maxgen".into(),
            "5".into(),
            "--runs".into(),
            "2".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let run = |out: &Path| ok(&args(out).iter().map(String::as_str).collect::<Vec<_>>());
    run(&a);
    run(&b);
    ok(&["optimize", "--manifest", path_str(&a.join(MANIFEST_FILE)), "--out", path_str(&c)]);
    let first = front_csvs(&a);
    assert_eq!(first.len(), 8);
    assert_eq!(first, front_csvs(&b));
    assert_eq!(first, front_csvs(&c));
}

#[test]
fn paper_preset_is_echoed_in_manifest() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("p");
    ok(&["optimize", "--instance", "ba:100:2", "--maxgen", "0", "--pop", "4", "--archive", "4", "--out", path_str(&out)]);
    let m = Manifest::load(out.join(MANIFEST_FILE)).unwrap();
    let e = &m.spec.engine;
    assert_eq!((e.c1, e.c2, e.omega, e.n_ls, e.hir), (1.5, 2.0, 0.4, 300, 0.5));
    assert_eq!(m.spec.preset, Preset::Paper);
    assert_eq!((m.network.nodes, m.network.edges), (100, 196));
}

#[test]
fn single_run_has_zero_igd_against_itself() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s");
    ok(&["optimize", "--instance", "ba:20:2", "--preset", "desk", "--pop", "6", "--maxgen", "3", "--out", path_str(&out)]);
    let report_dir = dir.path().join("cmp");
    ok(&["compare", path_str(&out), "--out", path_str(&report_dir)]);
    let per_run = fs::read_to_string(report_dir.join("per_run.csv")).unwrap();
    let row: Vec<&str> = per_run.lines().nth(1).unwrap().split(',').collect();
    assert_eq!((row[0], row[3], row[4]), ("nc-mopso", "0", "0"));
}

#[test]
fn mismatched_instances_are_refused() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, inst) in [(&a, "ba:20:2:1"), (&b, "ba:20:2:2")] {
        ok(&["optimize", "--instance", inst, "--preset", "desk", "--pop", "4", "--maxgen", "1", "--out", path_str(out)]);
    }
    let res = netcap(&["compare", path_str(&a), path_str(&b), "--out", path_str(&dir.path().join("c"))]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("different network"));
}

/// Writes a result directory by hand, one run per front.
fn fixture_dir(root: &Path, fronts: &[(Algorithm, &[(f64, f64)])]) {
    let instance = Instance::Ba { n: 10, m: 2, seed: 1 };
    let net = instance.build().unwrap();
    let mut runs = Vec::new();
    for (algorithm, pts) in fronts {
        let entry = RunEntry { algorithm: *algorithm, run_id: 0, seed: 0, dir: PathBuf::from(algorithm.name()).join("run_000") };
        fs::create_dir_all(root.join(&entry.dir)).unwrap();
        let record = ResultRecord {
            run_id: 0,
            algorithm: *algorithm,
            instance: instance.clone(),
            seed: 0,
            wall_time_s: 0.0,
            front: pts.iter().map(|&(l, h)| PointRecord { lambda_c: l, h_avg: h, unbounded: false }).collect(),
            metrics: RunSummary { front_size: pts.len(), max_lambda_c: 0.0, min_h_avg: 0.0 },
        };
        fs::write(root.join(&entry.dir).join("record.json"), serde_json::to_string(&record).unwrap()).unwrap();
        runs.push(entry);
    }
    let manifest = Manifest {
        spec: ExperimentSpec::new(instance, fronts.iter().map(|f| f.0).collect(), Preset::Desk),
        network: NetworkSummary { nodes: net.node_count(), edges: net.edge_count(), average_degree: net.average_degree() },
        fingerprint: Fingerprint::of(&net),
        runs,
    };
    fs::write(root.join(MANIFEST_FILE), serde_json::to_string(&manifest).unwrap()).unwrap();
}

#[test]
fn hand_built_fronts_score_like_the_metric_functions() {
    let dir = TempDir::new().unwrap();
    let p: &[(f64, f64)] = &[(3.0, 1.0), (2.0, 0.5)];
    let q: &[(f64, f64)] = &[(1.0, 1.8), (2.9, 2.0)];
    fixture_dir(dir.path(), &[(Algorithm::NcMopso, p), (Algorithm::Mopsocd, q)]);
    let report = compare(&ResultSet::load(&[dir.path().to_path_buf()]).unwrap()).unwrap();

    let front = |pts: &[(f64, f64)]| Front::new(pts.iter().map(|&(l, h)| ObjectivePoint::new(l, h)));
    let r = ReferencePoint::new(1.0, 2.0);
    assert_eq!(report.reference_point, r);
    let score = |a: Algorithm| report.per_run.iter().find(|s| s.algorithm == a).unwrap().clone();
    assert_eq!(score(Algorithm::NcMopso).hv, 2.5);
    assert_eq!(score(Algorithm::NcMopso).hv, hypervolume(&front(p), &r).unwrap());
    assert_eq!(score(Algorithm::Mopsocd).hv, hypervolume(&front(q), &r).unwrap());
    assert_eq!(score(Algorithm::NcMopso).igd, 0.0);
    assert_eq!(score(Algorithm::Mopsocd).igd, igd(&front(q), &front(p)).unwrap());
    assert_eq!(score(Algorithm::Mopsocd).c_ref, 1.0);
    assert!(report.pairwise_c.contains(&(Algorithm::NcMopso, Algorithm::Mopsocd, 1.0)));
    assert!(report.pairwise_c.contains(&(Algorithm::Mopsocd, Algorithm::NcMopso, 0.0)));
}

#[test]
fn persisted_results_score_like_in_memory_results() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r");
    let mut spec = ExperimentSpec::new(Instance::Ba { n: 25, m: 2, seed: 4 }, Algorithm::ALL.to_vec(), Preset::Desk);
    spec.engine.pop = 8;
    spec.engine.maxgen = 4;
    spec.engine.n_ls = 4;
    spec.nsga2.pop = 8;
    spec.nsga2.maxgen = 4;
    spec.runs = 2;
    netcap_cli::optimize(&spec, &out).unwrap();
    let from_disk = compare(&ResultSet::load(&[out]).unwrap()).unwrap();

    let net = spec.instance.build().unwrap();
    let outputs: Vec<_> = Algorithm::ALL
        .iter()
        .flat_map(|&a| (0..spec.runs).map(move |r| (a, r)))
        .map(|(a, r)| run_one(&net, &spec, a, r).unwrap())
        .collect();
    let in_memory =
        compare(&ResultSet::from_outputs(Fingerprint::of(&net), spec.instance.to_string(), &outputs)).unwrap();
    assert_eq!(from_disk.per_run.len(), in_memory.per_run.len());
    for (a, b) in from_disk.per_run.iter().zip(&in_memory.per_run) {
        assert_eq!((a.algorithm, a.run_id), (b.algorithm, b.run_id));
        assert!((a.hv - b.hv).abs() <= 1e-12 && (a.igd - b.igd).abs() <= 1e-12);
    }
}

#[test]
fn plotdata_row_counts() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r");
    let maxgen = 6;
    ok(&[
        "optimize", "--instance", "ba:20:2", "--algo", "nc-mopso,mopsocd,nsga2", "--preset", "desk", "--pop", "6",
        "--maxgen", &maxgen.to_string(), "--runs", "3", "--out", path_str(&out),
    ]);
    let plots = dir.path().join("plots");
    ok(&["plotdata", path_str(&out), "--out", path_str(&plots)]);
    let rows = |name: &str| fs::read_to_string(plots.join(name)).unwrap().lines().count() - 1;
    assert_eq!(rows("boxplot.csv"), 9);
    assert_eq!(rows("convergence.csv"), 9 * (maxgen + 1));
    let set = ResultSet::load(&[out]).unwrap();
    assert_eq!(rows("scatter.csv"), set.runs.iter().map(|r| r.front.len()).sum::<usize>());
}

#[test]
fn simulate_star_onset_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    let star = dir.path().join("star.txt");
    fs::write(&star, "hub a\nhub b\nhub c\nhub d\n").unwrap();
    let out = dir.path().join("sim");
    ok(&["simulate", "--instance", path_str(&star), "--grid", "0.05:0.6:0.05", "--out", path_str(&out)]);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let onset = summary["empirical_lambda_c"].as_f64().unwrap();
    assert!((0.30..=0.40).contains(&onset), "{onset}");
    assert!((summary["analytic_lambda_c"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(fs::read_to_string(out.join("sweep.csv")).unwrap().lines().count(), 13);

    let empty = netcap(&["simulate", "--instance", path_str(&star), "--grid", ""]);
    assert_eq!(empty.status.code(), Some(2));
}

#[test]
fn simulate_with_optimized_weights() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r");
    ok(&["optimize", "--instance", "ba:20:2", "--preset", "desk", "--pop", "6", "--maxgen", "2", "--out", path_str(&out)]);
    let weights = out.join("nc-mopso/run_000/weights.json");
    let csv = ok(&[
        "simulate", "--instance", "ba:20:2", "--weights", path_str(&weights), "--index", "0", "--grid", "0.01,0.02",
        "--steps", "500", "--warmup", "50",
    ]);
    assert!(csv.starts_with("lambda,growth_rate"));
    let wrong = netcap(&[
        "simulate", "--instance", "ba:20:2:9", "--weights", path_str(&weights), "--grid", "0.01", "--steps", "100",
        "--warmup", "10",
    ]);
    assert!(!wrong.status.success());
}
