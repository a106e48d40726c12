//! Discrete-time packet simulator for checking capacity predictions.
//!
//! Each step every node generates a packet with probability `lambda` for a
//! uniformly chosen other node, then every node forwards up to `capacity`
//! packets from the head of its FIFO queue along its routing table. Moves
//! are synchronous: a packet advances at most one hop per step.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Network, NodeId, WeightVector};
use crate::scalar::Scalar;

/// Total-queue growth (packets per step) above which a run counts as congested.
pub const CONGESTION_THRESHOLD: f64 = 0.1;
/// Bisection rounds between the last free and first congested grid point.
pub const REFINE_ROUNDS: usize = 6;

/// How a node picks among several smallest-weight next hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Always the lowest node id: one fixed path per pair.
    #[default]
    LowestId,
    /// Random per hop, in proportion to the number of smallest-weight paths
    /// through each candidate, so every tied path is equally likely.
    PathSplit,
}

/// Next hop for every `(current, destination)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingTable {
    n: usize,
    next: Vec<NodeId>,
    /// Cumulative choice probabilities for pairs with tied next hops.
    splits: Vec<Vec<(NodeId, f64)>>,
    policy: TiePolicy,
}

impl RoutingTable {
    /// Smallest-weight next hops; among tied candidates the lowest node id wins.
    pub fn build<T: Scalar>(net: &Network, x: &WeightVector<T>) -> Result<Self> {
        Self::build_with(net, x, TiePolicy::LowestId)
    }

    pub fn build_with<T: Scalar>(net: &Network, x: &WeightVector<T>, policy: TiePolicy) -> Result<Self> {
        x.check_against(net)?;
        if !net.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = net.node_count();
        let w: Vec<f64> = x.iter().map(|v| v.as_f64()).collect();
        let mut next = vec![0; n * n];
        let mut splits = vec![Vec::new(); if policy == TiePolicy::PathSplit { n * n } else { 0 }];
        let mut hops: Vec<NodeId> = Vec::new();
        for d in 0..n {
            let dist = distances_to(net, &w, d);
            let mut order: Vec<NodeId> = (0..n).collect();
            order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]));
            let mut paths = vec![0.0f64; n];
            paths[d] = 1.0;
            next[d * n + d] = d;
            for &u in order.iter().filter(|&&u| u != d) {
                let best = net
                    .neighbors(u)
                    .iter()
                    .map(|&(v, e)| w[e] + dist[v])
                    .fold(f64::INFINITY, f64::min);
                hops.clear();
                hops.extend(
                    net.neighbors(u)
                        .iter()
                        .filter(|&&(v, e)| f64::tie_eq(w[e] + dist[v], best))
                        .map(|&(v, _)| v),
                );
                next[u * n + d] = hops[0];
                paths[u] = hops.iter().map(|&v| paths[v]).sum();
                if policy == TiePolicy::PathSplit && hops.len() > 1 {
                    let mut acc = 0.0;
                    splits[u * n + d] = hops
                        .iter()
                        .map(|&v| {
                            acc += paths[v] / paths[u];
                            (v, acc)
                        })
                        .collect();
                }
            }
        }
        Ok(Self { n, next, splits, policy })
    }

    /// Deterministic next hop (lowest id among ties).
    pub fn next_hop(&self, from: NodeId, to: NodeId) -> NodeId {
        self.next[from * self.n + to]
    }

    /// Next hop under the table's [`TiePolicy`]; draws from `rng` only at ties.
    pub fn choose_hop<R: Rng + ?Sized>(&self, from: NodeId, to: NodeId, rng: &mut R) -> NodeId {
        match self.splits.get(from * self.n + to) {
            Some(options) if !options.is_empty() => {
                let u = rng.gen::<f64>();
                options.iter().find(|&&(_, c)| u < c).unwrap_or(options.last().expect("non-empty")).0
            }
            _ => self.next_hop(from, to),
        }
    }

    pub fn policy(&self) -> TiePolicy {
        self.policy
    }

    pub fn node_count(&self) -> usize {
        self.n
    }
}

fn distances_to(net: &Network, w: &[f64], target: NodeId) -> Vec<f64> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    #[derive(PartialEq, PartialOrd)]
    struct Key(f64);
    impl Eq for Key {}
    impl Ord for Key {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&o.0)
        }
    }
    let mut dist = vec![f64::INFINITY; net.node_count()];
    let mut heap = BinaryHeap::new();
    dist[target] = 0.0;
    heap.push(Reverse((Key(0.0), target)));
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, e) in net.neighbors(u) {
            let nd = d + w[e];
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((Key(nd), v)));
            }
        }
    }
    dist
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Generation probability per node per step.
    pub lambda: f64,
    pub steps: usize,
    pub warmup: usize,
    pub seed: u64,
    /// Packets each node may forward per step.
    pub capacity: usize,
    pub ties: TiePolicy,
}

impl SimConfig {
    pub fn new(lambda: f64, steps: usize, warmup: usize, seed: u64) -> Self {
        Self { lambda, steps, warmup, seed, capacity: 1, ties: TiePolicy::LowestId }
    }

    /// Length used by the capacity checks: 20 000 steps, 2 000 of warmup.
    pub fn long(seed: u64) -> Self {
        Self::new(0.0, 20_000, 2_000, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::InvalidParameter(format!("lambda must lie in [0, 1], got {}", self.lambda)));
        }
        if self.steps <= self.warmup {
            return Err(Error::InvalidParameter(format!(
                "steps ({}) must exceed warmup ({})",
                self.steps, self.warmup
            )));
        }
        if self.capacity == 0 {
            return Err(Error::InvalidParameter("capacity must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packet {
    pub id: u64,
    pub destination: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub step: usize,
    pub mean_queue: f64,
    pub max_queue: usize,
    pub delivered_cum: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub delivered: u64,
    pub generated: u64,
    pub mean_queue_series: Vec<f64>,
    /// Node holding the longest queue at the end (lowest id on ties).
    pub max_queue_node: NodeId,
    /// Least-squares slope of total queued packets against time after warmup.
    pub queue_growth_rate: f64,
    pub series: Vec<StepStats>,
}

impl SimReport {
    /// `step,mean_queue,max_queue,delivered_cum` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,mean_queue,max_queue,delivered_cum\n");
        for s in &self.series {
            let _ = writeln!(out, "{},{},{},{}", s.step, s.mean_queue, s.max_queue, s.delivered_cum);
        }
        out
    }
}

/// Step-by-step simulator state.
pub struct Simulation<'a> {
    table: &'a RoutingTable,
    lambda: f64,
    capacity: usize,
    rng: ChaCha8Rng,
    queues: Vec<VecDeque<Packet>>,
    next_id: u64,
    generated: u64,
    delivered: u64,
    step: usize,
    moves: Vec<(NodeId, Packet)>,
}

impl<'a> Simulation<'a> {
    pub fn new(table: &'a RoutingTable, cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            table,
            lambda: cfg.lambda,
            capacity: cfg.capacity,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            queues: vec![VecDeque::new(); table.node_count()],
            next_id: 0,
            generated: 0,
            delivered: 0,
            step: 0,
            moves: Vec::new(),
        })
    }

    /// Advances one step: generation, then forwarding.
    pub fn step(&mut self) {
        let n = self.queues.len();
        if n > 1 {
            for src in 0..n {
                if self.rng.gen::<f64>() >= self.lambda {
                    continue;
                }
                let mut dest = self.rng.gen_range(0..n - 1);
                if dest >= src {
                    dest += 1;
                }
                self.generated += 1;
                self.next_id += 1;
                if self.table.choose_hop(src, dest, &mut self.rng) == dest {
                    // Neighbor destinations are handed over directly.
                    self.delivered += 1;
                } else {
                    self.queues[src].push_back(Packet { id: self.next_id, destination: dest });
                }
            }
        }
        self.moves.clear();
        for u in 0..n {
            for _ in 0..self.capacity {
                let Some(p) = self.queues[u].pop_front() else { break };
                let hop = self.table.choose_hop(u, p.destination, &mut self.rng);
                if hop == p.destination {
                    self.delivered += 1;
                } else {
                    self.moves.push((hop, p));
                }
            }
        }
        for &(v, p) in &self.moves {
            self.queues[v].push_back(p);
        }
        self.step += 1;
    }

    pub fn queues(&self) -> &[VecDeque<Packet>] {
        &self.queues
    }

    pub fn generated(&self) -> u64 {
        self.generated
    }

    pub fn delivered(&self) -> u64 {
        self.delivered
    }

    pub fn in_flight(&self) -> u64 {
        self.queues.iter().map(|q| q.len() as u64).sum()
    }

    pub fn steps_done(&self) -> usize {
        self.step
    }

    fn stats(&self) -> StepStats {
        let total = self.in_flight();
        StepStats {
            step: self.step,
            mean_queue: total as f64 / self.queues.len() as f64,
            max_queue: self.queues.iter().map(VecDeque::len).max().unwrap_or(0),
            delivered_cum: self.delivered,
        }
    }
}

fn slope(ys: &[(f64, f64)]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let mx = ys.iter().map(|p| p.0).sum::<f64>() / n;
    let my = ys.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = ys.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = ys.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Runs a simulation with a prebuilt routing table.
pub fn simulate_with(table: &RoutingTable, cfg: &SimConfig) -> Result<SimReport> {
    let mut sim = Simulation::new(table, cfg)?;
    let mut series = Vec::with_capacity(cfg.steps);
    let mut totals = Vec::with_capacity(cfg.steps - cfg.warmup);
    for _ in 0..cfg.steps {
        sim.step();
        let s = sim.stats();
        if s.step > cfg.warmup {
            totals.push((s.step as f64, sim.in_flight() as f64));
        }
        series.push(s);
    }
    let max_queue_node = sim
        .queues
        .iter()
        .enumerate()
        .fold((0, 0), |best, (i, q)| if q.len() > best.1 { (i, q.len()) } else { best })
        .0;
    Ok(SimReport {
        delivered: sim.delivered,
        generated: sim.generated,
        mean_queue_series: series.iter().map(|s| s.mean_queue).collect(),
        max_queue_node,
        queue_growth_rate: slope(&totals),
        series,
    })
}

pub fn simulate<T: Scalar>(net: &Network, x: &WeightVector<T>, cfg: &SimConfig) -> Result<SimReport> {
    simulate_with(&RoutingTable::build_with(net, x, cfg.ties)?, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OnsetEstimate {
    /// Estimated critical rate, refined between grid points.
    Onset(f64),
    /// No grid point congested.
    AboveGrid,
}

impl OnsetEstimate {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Onset(v) => Some(*v),
            Self::AboveGrid => None,
        }
    }
}

/// Growth rates of every grid point, computed in parallel.
pub fn sweep(table: &RoutingTable, grid: &[f64], cfg: &SimConfig) -> Result<Vec<SimReport>> {
    grid.par_iter()
        .map(|&lambda| simulate_with(table, &SimConfig { lambda, ..cfg.clone() }))
        .collect()
}

/// Smallest grid rate whose total queue grows faster than
/// [`CONGESTION_THRESHOLD`], refined by bisection against the preceding
/// grid point. `cfg.lambda` is ignored.
pub fn estimate_lambda_c<T: Scalar>(
    net: &Network,
    x: &WeightVector<T>,
    grid: &[f64],
    cfg: &SimConfig,
) -> Result<OnsetEstimate> {
    if grid.is_empty() {
        return Err(Error::Empty("lambda grid"));
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("lambda grid must be ascending".into()));
    }
    let table = RoutingTable::build_with(net, x, cfg.ties)?;
    let reports = sweep(&table, grid, cfg)?;
    onset_from_sweep(&table, grid, &reports, cfg)
}

/// Same as [`estimate_lambda_c`] for an existing sweep.
pub fn onset_from_sweep(
    table: &RoutingTable,
    grid: &[f64],
    reports: &[SimReport],
    cfg: &SimConfig,
) -> Result<OnsetEstimate> {
    let Some(k) = reports.iter().position(|r| r.queue_growth_rate > CONGESTION_THRESHOLD) else {
        return Ok(OnsetEstimate::AboveGrid);
    };
    if k == 0 {
        return Ok(OnsetEstimate::Onset(grid[0]));
    }
    let (mut lo, mut hi) = (grid[k - 1], grid[k]);
    for _ in 0..REFINE_ROUNDS {
        let mid = 0.5 * (lo + hi);
        let r = simulate_with(table, &SimConfig { lambda: mid, ..cfg.clone() })?;
        if r.queue_growth_rate > CONGESTION_THRESHOLD {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(OnsetEstimate::Onset(hi))
}
