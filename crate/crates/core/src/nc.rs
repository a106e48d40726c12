//! Centrality-guided operators: hybrid initialization and local search.

use rand::Rng;

use crate::engine::{random_weights, Particle};
use crate::error::Result;
use crate::graph::{Network, WeightVector};
use crate::pareto::{nondominated_indices, Archive, Solution};
use crate::routing::{nbec_from, routing_betweenness, ObjectivePoint};
use crate::scalar::Scalar;

/// Number of heuristically initialized particles, `round(hir * pop)`.
pub fn heuristic_count(pop: usize, hir: f64) -> usize {
    ((hir * pop as f64).round() as usize).min(pop)
}

/// Permutes the values of `x` so that value rank follows edge-centrality
/// rank: the most central edge receives the largest value. Centrality ties
/// go to the lower edge id first.
pub fn align_to_centrality<T: Scalar>(x: &WeightVector<T>, centrality: &[T]) -> WeightVector<T> {
    let mut edges: Vec<usize> = (0..x.len()).collect();
    edges.sort_by(|&a, &b| {
        centrality[b]
            .partial_cmp(&centrality[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut values = x.as_slice().to_vec();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = vec![T::zero(); x.len()];
    for (&e, v) in edges.iter().zip(values) {
        out[e] = v;
    }
    WeightVector::from_raw(out)
}

/// Edge-centrality guided hybrid initialization.
///
/// Draws `pop` random vectors, then for the first `round(hir * pop)` of them
/// computes edge centrality under that vector's own weights and reorders
/// its values with [`align_to_centrality`].
pub fn echi_init<T: Scalar, R: Rng + ?Sized>(
    net: &Network,
    pop: usize,
    hir: f64,
    rng: &mut R,
) -> Result<Vec<WeightVector<T>>> {
    let mut swarm: Vec<WeightVector<T>> = (0..pop).map(|_| random_weights(net.edge_count(), rng)).collect();
    for x in swarm.iter_mut().take(heuristic_count(pop, hir)) {
        let b = routing_betweenness(net, x)?;
        *x = align_to_centrality(x, &nbec_from(net, &b));
    }
    Ok(swarm)
}

/// Node-centrality guided local search.
///
/// Builds a chain of `n` neighbours: each one takes the previous weights,
/// finds the node with the largest routing betweenness (lowest id on ties),
/// and raises every incident edge by `delta ~ U[0, 1)` capped at 1. Returns
/// the mutually nondominated neighbours with their objectives.
pub fn ncls<T: Scalar, R: Rng + ?Sized>(
    net: &Network,
    z: &WeightVector<T>,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Solution<T>>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut current = z.clone();
    let mut b = routing_betweenness(net, &current)?;
    let mut neighbours = Vec::with_capacity(n);
    for _ in 0..n {
        let hub = b.max_node;
        let mut next = current.clone().into_vec();
        for &(_, e) in net.neighbors(hub) {
            next[e] = (next[e] + T::of(rng.gen::<f64>())).min(T::one());
        }
        current = WeightVector::from_raw(next);
        b = routing_betweenness(net, &current)?;
        neighbours.push(Solution::new(current.clone(), ObjectivePoint::from_betweenness(&b)));
    }
    let objs: Vec<_> = neighbours.iter().map(|s| s.objectives).collect();
    let keep = nondominated_indices(&objs);
    Ok(keep.into_iter().map(|i| neighbours[i].clone()).collect())
}

/// Local search on one uniformly chosen particle.
///
/// All nondominated neighbours go to the archive; the particle moves to one
/// of them chosen uniformly, its velocity resets to zero and its pbest is
/// updated with the usual rule. Returns the index of the chosen particle.
pub fn apply_ncls_to_swarm<T: Scalar, R: Rng + ?Sized>(
    swarm: &mut [Particle<T>],
    archive: &mut Archive<T>,
    net: &Network,
    n: usize,
    rng: &mut R,
) -> Result<usize> {
    let k = rng.gen_range(0..swarm.len());
    let neighbours = ncls(net, &swarm[k].position, n, rng)?;
    if neighbours.is_empty() {
        return Ok(k);
    }
    archive.update(neighbours.iter().cloned());
    let pick = neighbours[rng.gen_range(0..neighbours.len())].clone();
    let p = &mut swarm[k];
    p.position = pick.weights;
    p.objectives = pick.objectives;
    p.velocity.iter_mut().for_each(|v| *v = T::zero());
    p.update_pbest(rng);
    Ok(k)
}
