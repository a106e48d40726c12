//! Comparison algorithms: real-coded NSGA-II and the swarm ablations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{self, evaluate_all, random_weights, EngineConfig, Operators, POSITION_FLOOR};
use crate::error::{Error, Result};
use crate::graph::{Network, WeightVector};
use crate::pareto::{crowding_distances, dominates, Archive, Solution};
use crate::routing::ObjectivePoint;
use crate::scalar::Scalar;

/// Plain crowding-distance swarm with random initialization and no local search.
pub fn mopsocd_run<T: Scalar>(net: &Network, cfg: &EngineConfig) -> Result<Archive<T>> {
    engine::run(net, cfg, Operators::mopsocd())
}

/// Crowding-distance swarm with centrality-guided initialization only.
pub fn mopsocd_in_run<T: Scalar>(net: &Network, cfg: &EngineConfig) -> Result<Archive<T>> {
    engine::run(net, cfg, Operators::mopsocd_in(cfg))
}

/// Full algorithm: guided initialization plus centrality-guided local search.
pub fn nc_mopso_run<T: Scalar>(net: &Network, cfg: &EngineConfig) -> Result<Archive<T>> {
    engine::run(net, cfg, Operators::nc_mopso(cfg))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nsga2Config {
    pub pop: usize,
    pub maxgen: usize,
    /// Crossover probability per mating pair.
    pub p_c: f64,
    /// Per-gene mutation probability; `None` means `1 / M`.
    pub p_m: Option<f64>,
    pub eta_c: f64,
    pub eta_m: f64,
    pub seed: u64,
}

impl Nsga2Config {
    pub fn paper() -> Self {
        Self { pop: 200, maxgen: 500, p_c: 0.9, p_m: None, eta_c: 20.0, eta_m: 20.0, seed: 0 }
    }

    pub fn desk() -> Self {
        Self { pop: 40, maxgen: 60, ..Self::paper() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop < 2 || self.pop % 2 != 0 {
            return Err(Error::InvalidParameter(format!("NSGA-II pop must be even and >= 2, got {}", self.pop)));
        }
        let pm_ok = self.p_m.map_or(true, |p| (0.0..=1.0).contains(&p));
        if !(0.0..=1.0).contains(&self.p_c) || !pm_ok {
            return Err(Error::InvalidParameter("NSGA-II probabilities must lie in [0, 1]".into()));
        }
        if !(self.eta_c >= 0.0 && self.eta_m >= 0.0) {
            return Err(Error::InvalidParameter("distribution indices must be non-negative".into()));
        }
        Ok(())
    }
}

/// Fast nondominated sort: fronts of indices, best first.
pub fn nondominated_sort<T: Scalar>(points: &[ObjectivePoint<T>]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&points[i], &points[j]) {
                dominates_list[i].push(j);
                dominated_by_count[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominates_list[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

struct Ranked<T> {
    members: Vec<Solution<T>>,
    rank: Vec<usize>,
    crowding: Vec<f64>,
}

impl<T: Scalar> Ranked<T> {
    fn new(members: Vec<Solution<T>>) -> Self {
        let objs: Vec<_> = members.iter().map(|s| s.objectives).collect();
        let mut rank = vec![0; members.len()];
        let mut crowding = vec![0.0; members.len()];
        for (r, front) in nondominated_sort(&objs).into_iter().enumerate() {
            let pts: Vec<_> = front.iter().map(|&i| objs[i]).collect();
            for (&i, d) in front.iter().zip(crowding_distances(&pts)) {
                rank[i] = r;
                crowding[i] = d.as_f64();
            }
        }
        Self { members, rank, crowding }
    }

    fn better(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b] || (self.rank[a] == self.rank[b] && self.crowding[a] > self.crowding[b])
    }

    fn tournament<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let a = rng.gen_range(0..self.members.len());
        let b = rng.gen_range(0..self.members.len());
        if self.better(b, a) {
            b
        } else {
            a
        }
    }

    /// Elitist truncation: whole fronts first, the split front by crowding.
    fn survivors(self, size: usize) -> Vec<Solution<T>> {
        let objs: Vec<_> = self.members.iter().map(|s| s.objectives).collect();
        let mut chosen = Vec::with_capacity(size);
        for front in nondominated_sort(&objs) {
            if chosen.len() + front.len() <= size {
                chosen.extend(front);
            } else {
                let mut rest = front;
                rest.sort_by(|&a, &b| self.crowding[b].total_cmp(&self.crowding[a]).then(a.cmp(&b)));
                chosen.extend(rest.into_iter().take(size - chosen.len()));
            }
            if chosen.len() == size {
                break;
            }
        }
        let mut slots: Vec<Option<Solution<T>>> = self.members.into_iter().map(Some).collect();
        chosen.into_iter().map(|i| slots[i].take().expect("index chosen once")).collect()
    }
}

/// Bounded simulated binary crossover on `[POSITION_FLOOR, 1]`.
fn sbx<R: Rng + ?Sized>(x1: &mut [f64], x2: &mut [f64], eta: f64, rng: &mut R) {
    let (lo, hi) = (POSITION_FLOOR, 1.0);
    let spread = |beta: f64, u: f64| {
        let alpha = 2.0 - beta.powf(-(eta + 1.0));
        if u <= 1.0 / alpha {
            (u * alpha).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
        }
    };
    for (a, b) in x1.iter_mut().zip(x2.iter_mut()) {
        if rng.gen::<f64>() > 0.5 || (*a - *b).abs() <= 1e-14 {
            continue;
        }
        let (y1, y2) = if *a < *b { (*a, *b) } else { (*b, *a) };
        let u = rng.gen::<f64>();
        let bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1), u);
        let c1 = (0.5 * ((y1 + y2) - bq1 * (y2 - y1))).clamp(lo, hi);
        let bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1), u);
        let c2 = (0.5 * ((y1 + y2) + bq2 * (y2 - y1))).clamp(lo, hi);
        if rng.gen::<f64>() <= 0.5 {
            (*a, *b) = (c2, c1);
        } else {
            (*a, *b) = (c1, c2);
        }
    }
}

/// Bounded polynomial mutation on `[POSITION_FLOOR, 1]`.
fn polynomial_mutation<R: Rng + ?Sized>(x: &mut [f64], p_m: f64, eta: f64, rng: &mut R) {
    let (lo, hi) = (POSITION_FLOOR, 1.0);
    let pow = 1.0 / (eta + 1.0);
    for y in x.iter_mut() {
        if rng.gen::<f64>() > p_m {
            continue;
        }
        let d1 = (*y - lo) / (hi - lo);
        let d2 = (hi - *y) / (hi - lo);
        let u = rng.gen::<f64>();
        let dq = if u <= 0.5 {
            let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            v.powf(pow) - 1.0
        } else {
            let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - v.powf(pow)
        };
        *y = (*y + dq * (hi - lo)).clamp(lo, hi);
    }
}

fn to_genes<T: Scalar>(x: &WeightVector<T>) -> Vec<f64> {
    x.iter().map(|v| v.as_f64()).collect()
}

fn from_genes<T: Scalar>(g: Vec<f64>) -> WeightVector<T> {
    let lo = T::of(POSITION_FLOOR);
    WeightVector::from_raw(g.into_iter().map(|v| T::of(v).max(lo).min(T::one())).collect())
}

/// Rank-0 members with duplicate objective vectors removed (first kept).
fn first_front<T: Scalar>(population: &[Solution<T>]) -> Vec<Solution<T>> {
    let objs: Vec<_> = population.iter().map(|s| s.objectives).collect();
    let mut front: Vec<Solution<T>> = Vec::new();
    let mut idx = nondominated_sort(&objs).into_iter().next().unwrap_or_default();
    idx.sort_unstable();
    for i in idx {
        if !front.iter().any(|s| s.objectives == population[i].objectives) {
            front.push(population[i].clone());
        }
    }
    front
}

/// Real-coded NSGA-II over edge weights. `observer` receives the first
/// front after initialization and after every generation.
pub fn nsga2_run_observed<T: Scalar>(
    net: &Network,
    cfg: &Nsga2Config,
    mut observer: impl FnMut(usize, &[Solution<T>]),
) -> Result<Vec<Solution<T>>> {
    cfg.validate()?;
    let m = net.edge_count();
    let p_m = cfg.p_m.unwrap_or(1.0 / m.max(1) as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let genomes: Vec<WeightVector<T>> = (0..cfg.pop).map(|_| random_weights(m, &mut rng)).collect();
    let objs = evaluate_all(net, &genomes)?;
    let mut population: Vec<Solution<T>> = genomes.into_iter().zip(objs).map(|(x, o)| Solution::new(x, o)).collect();
    observer(0, &first_front(&population));

    for gen in 1..=cfg.maxgen {
        let ranked = Ranked::new(population);
        let mut children: Vec<WeightVector<T>> = Vec::with_capacity(cfg.pop);
        while children.len() < cfg.pop {
            let pa = ranked.tournament(&mut rng);
            let pb = ranked.tournament(&mut rng);
            let mut a = to_genes(&ranked.members[pa].weights);
            let mut b = to_genes(&ranked.members[pb].weights);
            if rng.gen::<f64>() <= cfg.p_c {
                sbx(&mut a, &mut b, cfg.eta_c, &mut rng);
            }
            polynomial_mutation(&mut a, p_m, cfg.eta_m, &mut rng);
            polynomial_mutation(&mut b, p_m, cfg.eta_m, &mut rng);
            children.push(from_genes(a));
            children.push(from_genes(b));
        }
        let objs = evaluate_all(net, &children)?;
        let mut combined = ranked.members;
        combined.extend(children.into_iter().zip(objs).map(|(x, o)| Solution::new(x, o)));
        population = Ranked::new(combined).survivors(cfg.pop);
        observer(gen, &first_front(&population));
    }
    Ok(first_front(&population))
}

pub fn nsga2_run<T: Scalar>(net: &Network, cfg: &Nsga2Config) -> Result<Vec<Solution<T>>> {
    nsga2_run_observed(net, cfg, |_, _| {})
}
