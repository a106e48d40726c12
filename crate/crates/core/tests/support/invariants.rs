//! Step-by-step invariant checks shared by the property tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::VecDeque;

use netcap::engine::{EngineConfig, Mopso, Operators, POSITION_FLOOR};
use netcap::pareto::dominates;
use netcap::sim::{Packet, RoutingTable, SimConfig, Simulation};
use netcap::{Network, ObjectivePoint, WeightVector};

fn mutually_nondominated(points: &[ObjectivePoint]) -> bool {
    points.iter().all(|a| points.iter().all(|b| !dominates(b, a)))
}

/// Runs `cfg.maxgen` generations, checking after each one. Returns the number of
/// generations checked.
pub fn check_engine(net: &Network, cfg: &EngineConfig, ops: Operators) -> Result<usize, String> {
    let mut state: Mopso<'_, f64> = Mopso::new(net, cfg, ops).map_err(|e| e.to_string())?;
    let mut seen: Vec<Vec<ObjectivePoint>> = state.swarm().iter().map(|p| vec![p.pbest_objectives]).collect();
    for gen in 1..=cfg.maxgen {
        state.step().map_err(|e| e.to_string())?;
        let objs = state.archive().objectives();
        if objs.is_empty() || !mutually_nondominated(&objs) {
            return Err(format!("generation {gen}: archive not mutually nondominated"));
        }
        if state.archive().len() > cfg.archive_capacity {
            return Err(format!("generation {gen}: archive over capacity"));
        }
        for (k, p) in state.swarm().iter().enumerate() {
            let in_box = |w: &WeightVector| w.iter().all(|&v| (POSITION_FLOOR..=1.0).contains(&v));
            if !in_box(&p.position) || !in_box(&p.pbest_position) {
                return Err(format!("generation {gen}: particle {k} left [1e-6, 1]"));
            }
            if seen[k].iter().any(|h| dominates(h, &p.pbest_objectives)) {
                return Err(format!("generation {gen}: particle {k} pbest dominated by an earlier pbest"));
            }
            if !seen[k].contains(&p.pbest_objectives) {
                seen[k].push(p.pbest_objectives);
            }
        }
    }
    Ok(cfg.maxgen)
}

/// Steps a simulation, checking conservation and FIFO order after every step.
/// Returns the number of steps checked.
pub fn check_simulation(net: &Network, x: &WeightVector, cfg: &SimConfig) -> Result<usize, String> {
    let table = RoutingTable::build_with(net, x, cfg.ties).map_err(|e| e.to_string())?;
    let mut sim = Simulation::new(&table, cfg).map_err(|e| e.to_string())?;
    for step in 1..=cfg.steps {
        let before: Vec<VecDeque<Packet>> = sim.queues().to_vec();
        sim.step();
        if sim.generated() != sim.delivered() + sim.in_flight() {
            return Err(format!(
                "step {step}: generated {} != delivered {} + queued {}",
                sim.generated(),
                sim.delivered(),
                sim.in_flight()
            ));
        }
        for (u, (old, new)) in before.iter().zip(sim.queues()).enumerate() {
            // The unserved tail of the old queue must lead the new queue in
            // order; everything behind it arrived during this step.
            let survivors = old.iter().skip(cfg.capacity);
            let lead = survivors.len();
            if new.len() < lead || !new.iter().take(lead).eq(survivors) {
                return Err(format!("step {step}: node {u} broke FIFO order"));
            }
            if new.iter().skip(lead).any(|p| old.contains(p)) {
                return Err(format!("step {step}: node {u} re-queued its own packet"));
            }
        }
    }
    Ok(cfg.steps)
}
