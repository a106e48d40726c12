//! Crowding-distance multi-objective particle swarm.
//!
//! NC-MOPSO, MOPSOCD and MOPSOCD_in are all this engine with different
//! [`Operators`]. The whole run draws from one seeded RNG stream in this
//! order per generation:
//!
//! 1. for each particle in index order: gbest pick, then `r1`, `r2`;
//! 2. objective evaluation (parallel, consumes no randomness);
//! 3. for each particle in index order: pbest coin flip when incomparable;
//! 4. local search (particle pick, weight increments, neighbour pick);
//! 5. archive update.
//!
//! Initialization draws the positions first and then the velocities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Network, WeightVector};
use crate::nc;
use crate::pareto::{dominates, Archive, Solution};
use crate::routing::{evaluate, ObjectivePoint};
use crate::scalar::Scalar;

/// Lower bound applied to every position coordinate.
pub const POSITION_FLOOR: f64 = 1e-6;
/// Initial velocities are drawn from `U[-INIT_VELOCITY, INIT_VELOCITY]`.
pub const INIT_VELOCITY: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub pop: usize,
    pub maxgen: usize,
    pub c1: f64,
    pub c2: f64,
    pub omega: f64,
    pub archive_capacity: usize,
    /// Fraction of the initial swarm built by centrality-guided reordering.
    pub hir: f64,
    /// Neighbours generated per local-search call.
    pub n_ls: usize,
    pub seed: u64,
}

impl EngineConfig {
    /// Full-budget settings: pop 200, 500 generations, 300 local-search neighbours.
    pub fn paper() -> Self {
        Self {
            pop: 200,
            maxgen: 500,
            c1: 1.5,
            c2: 2.0,
            omega: 0.4,
            archive_capacity: 200,
            hir: 0.5,
            n_ls: 300,
            seed: 0,
        }
    }

    /// Reduced budget that finishes in seconds on 50-node instances.
    pub fn desk() -> Self {
        Self { pop: 40, maxgen: 60, archive_capacity: 40, n_ls: 40, ..Self::paper() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop < 2 {
            return Err(Error::InvalidParameter(format!("pop must be at least 2, got {}", self.pop)));
        }
        if !(0.0..=1.0).contains(&self.hir) {
            return Err(Error::InvalidParameter(format!("hir must lie in [0, 1], got {}", self.hir)));
        }
        if self.archive_capacity == 0 {
            return Err(Error::InvalidParameter("archive capacity must be positive".into()));
        }
        for (name, v) in [("c1", self.c1), ("c2", self.c2), ("omega", self.omega)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initializer {
    /// Every coordinate uniform on `(0, 1]`.
    Random,
    /// Random draws, then a fraction `hir` reordered by edge centrality.
    Echi { hir: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operators {
    pub init: Initializer,
    /// Number of local-search neighbours per generation, if enabled.
    pub local_search: Option<usize>,
}

impl Operators {
    pub fn nc_mopso(cfg: &EngineConfig) -> Self {
        Self { init: Initializer::Echi { hir: cfg.hir }, local_search: Some(cfg.n_ls) }
    }

    pub fn mopsocd() -> Self {
        Self { init: Initializer::Random, local_search: None }
    }

    pub fn mopsocd_in(cfg: &EngineConfig) -> Self {
        Self { init: Initializer::Echi { hir: cfg.hir }, local_search: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle<T> {
    pub position: WeightVector<T>,
    pub velocity: Vec<T>,
    pub objectives: ObjectivePoint<T>,
    pub pbest_position: WeightVector<T>,
    pub pbest_objectives: ObjectivePoint<T>,
    /// Nondominated set of every pbest this particle has held.
    pbest_history: Vec<ObjectivePoint<T>>,
}

impl<T: Scalar> Particle<T> {
    pub fn new(position: WeightVector<T>, velocity: Vec<T>, objectives: ObjectivePoint<T>) -> Self {
        Self {
            pbest_position: position.clone(),
            pbest_objectives: objectives,
            pbest_history: vec![objectives],
            position,
            velocity,
            objectives,
        }
    }

    pub fn solution(&self) -> Solution<T> {
        Solution::new(self.position.clone(), self.objectives)
    }

    /// Considers the current position as a new personal best.
    ///
    /// Replaces the pbest if the current point dominates it. If the two are
    /// incomparable, replaces it on a fair coin flip, but only when no earlier
    /// pbest dominates the current point; the pbest sequence therefore never
    /// regresses below its own history. Returns whether the pbest changed.
    pub fn update_pbest<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let cur = self.objectives;
        let replace = if dominates(&cur, &self.pbest_objectives) {
            true
        } else if dominates(&self.pbest_objectives, &cur) {
            false
        } else {
            rng.gen_bool(0.5) && !self.pbest_history.iter().any(|h| dominates(h, &cur))
        };
        if replace {
            self.pbest_position = self.position.clone();
            self.pbest_objectives = cur;
            self.pbest_history.retain(|h| !dominates(&cur, h));
            if !self.pbest_history.contains(&cur) {
                self.pbest_history.push(cur);
            }
        }
        replace
    }

    pub fn pbest_history(&self) -> &[ObjectivePoint<T>] {
        &self.pbest_history
    }
}

/// One velocity/position update.
///
/// `v' = omega*v + c1*r1*(pbest - p) + c2*r2*(gbest - p)`, `p' = p + v'`, with
/// scalar `r1, r2 ~ U[0, 1)` drawn once per call. Coordinates leaving
/// `[POSITION_FLOOR, 1]` are clamped and their velocity zeroed. The
/// particle's objectives are left stale until re-evaluated.
pub fn pso_step<T: Scalar, R: Rng + ?Sized>(p: &mut Particle<T>, gbest: &WeightVector<T>, cfg: &EngineConfig, rng: &mut R) {
    let r1 = T::of(rng.gen::<f64>());
    let r2 = T::of(rng.gen::<f64>());
    let (omega, c1, c2) = (T::of(cfg.omega), T::of(cfg.c1), T::of(cfg.c2));
    let (lo, hi) = (T::of(POSITION_FLOOR), T::one());
    let mut pos = std::mem::take(&mut p.position).into_vec();
    for (e, x) in pos.iter_mut().enumerate() {
        let v = omega * p.velocity[e] + c1 * r1 * (p.pbest_position[e] - *x) + c2 * r2 * (gbest[e] - *x);
        let next = *x + v;
        if next < lo || next > hi || next.is_nan() {
            *x = if next > hi { hi } else { lo };
            p.velocity[e] = T::zero();
        } else {
            *x = next;
            p.velocity[e] = v;
        }
    }
    p.position = WeightVector::from_raw(pos);
}

/// Coordinates uniform on `(0, 1]`, floored at [`POSITION_FLOOR`].
pub fn random_weights<T: Scalar, R: Rng + ?Sized>(m: usize, rng: &mut R) -> WeightVector<T> {
    let lo = T::of(POSITION_FLOOR);
    WeightVector::from_raw((0..m).map(|_| T::of(1.0 - rng.gen::<f64>()).max(lo)).collect())
}

pub(crate) fn evaluate_all<T: Scalar>(net: &Network, xs: &[WeightVector<T>]) -> Result<Vec<ObjectivePoint<T>>> {
    xs.par_iter().map(|x| evaluate(net, x)).collect()
}

/// Swarm state between generations.
pub struct Mopso<'a, T> {
    net: &'a Network,
    cfg: EngineConfig,
    ops: Operators,
    rng: ChaCha8Rng,
    swarm: Vec<Particle<T>>,
    archive: Archive<T>,
    generation: usize,
}

impl<'a, T: Scalar> Mopso<'a, T> {
    /// Builds and evaluates the initial swarm and seeds the archive.
    pub fn new(net: &'a Network, cfg: &EngineConfig, ops: Operators) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let m = net.edge_count();
        let positions: Vec<WeightVector<T>> = match ops.init {
            Initializer::Random => (0..cfg.pop).map(|_| random_weights(m, &mut rng)).collect(),
            Initializer::Echi { hir } => nc::echi_init(net, cfg.pop, hir, &mut rng)?,
        };
        let velocities: Vec<Vec<T>> = (0..cfg.pop)
            .map(|_| (0..m).map(|_| T::of(rng.gen_range(-INIT_VELOCITY..=INIT_VELOCITY))).collect())
            .collect();
        let objectives = evaluate_all(net, &positions)?;
        let swarm: Vec<Particle<T>> = positions
            .into_iter()
            .zip(velocities)
            .zip(objectives)
            .map(|((x, v), o)| Particle::new(x, v, o))
            .collect();
        let mut archive = Archive::new(cfg.archive_capacity);
        archive.update(swarm.iter().map(Particle::solution));
        Ok(Self { net, cfg: cfg.clone(), ops, rng, swarm, archive, generation: 0 })
    }

    /// Advances one generation.
    pub fn step(&mut self) -> Result<()> {
        for k in 0..self.swarm.len() {
            let gbest = self.archive.select_gbest(&mut self.rng)?.clone();
            pso_step(&mut self.swarm[k], &gbest, &self.cfg, &mut self.rng);
        }
        let net = self.net;
        let objectives: Vec<ObjectivePoint<T>> =
            self.swarm.par_iter().map(|p| evaluate(net, &p.position)).collect::<Result<_>>()?;
        for (p, o) in self.swarm.iter_mut().zip(objectives) {
            p.objectives = o;
            p.update_pbest(&mut self.rng);
        }
        if let Some(n) = self.ops.local_search {
            nc::apply_ncls_to_swarm(&mut self.swarm, &mut self.archive, self.net, n, &mut self.rng)?;
        }
        self.archive.update(self.swarm.iter().map(Particle::solution));
        self.generation += 1;
        Ok(())
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn swarm(&self) -> &[Particle<T>] {
        &self.swarm
    }

    pub fn archive(&self) -> &Archive<T> {
        &self.archive
    }

    pub fn into_archive(self) -> Archive<T> {
        self.archive
    }
}

/// Runs `cfg.maxgen` generations. `observer` sees the state after
/// initialization and after every generation (`maxgen + 1` calls).
pub fn run_observed<T: Scalar>(
    net: &Network,
    cfg: &EngineConfig,
    ops: Operators,
    mut observer: impl FnMut(&Mopso<'_, T>),
) -> Result<Archive<T>> {
    let mut state = Mopso::new(net, cfg, ops)?;
    observer(&state);
    for _ in 0..cfg.maxgen {
        state.step()?;
        observer(&state);
    }
    Ok(state.into_archive())
}

pub fn run<T: Scalar>(net: &Network, cfg: &EngineConfig, ops: Operators) -> Result<Archive<T>> {
    run_observed(net, cfg, ops, |_: &Mopso<'_, T>| {})
}
