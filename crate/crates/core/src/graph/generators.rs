use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Network, NodeId};
use crate::error::{Error, Result};

const WS_MAX_ATTEMPTS: usize = 1000;

/// Barabási–Albert preferential attachment.
///
/// Starts from `m` isolated seed nodes. Every later node attaches to `m`
/// distinct existing nodes, each picked with probability proportional to
/// `degree + 1` (the `+1` makes isolated seeds reachable). The result has
/// exactly `m * (n - m)` edges and is connected.
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<Network> {
    if m == 0 || n <= m {
        return Err(Error::InvalidParameter(format!("BA model needs n > m >= 1, got n={n}, m={m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(m * (n - m));
    let mut picked = Vec::with_capacity(m);
    for newcomer in m..n {
        picked.clear();
        let mut remaining: usize = (0..newcomer).map(|v| degree[v] + 1).sum();
        while picked.len() < m {
            let mut r = rng.gen_range(0..remaining);
            let mut target = 0;
            for v in 0..newcomer {
                if picked.contains(&v) {
                    continue;
                }
                let w = degree[v] + 1;
                if r < w {
                    target = v;
                    break;
                }
                r -= w;
            }
            remaining -= degree[target] + 1;
            picked.push(target);
        }
        picked.sort_unstable();
        for &t in &picked {
            edges.push((t, newcomer));
            degree[t] += 1;
            degree[newcomer] += 1;
        }
    }
    Network::connected(n, edges)
}

/// Watts–Strogatz small world: a ring lattice where each node links to its
/// `k/2` clockwise neighbours, then every lattice edge is rewired with
/// probability `p` to a uniformly chosen node that is neither the source
/// nor already adjacent. Draws are repeated until the graph is connected.
pub fn generate_ws(n: usize, k: usize, p: f64, seed: u64) -> Result<Network> {
    if k == 0 || k % 2 != 0 || k >= n {
        return Err(Error::InvalidParameter(format!("WS model needs even k with 2 <= k < n, got n={n}, k={k}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("rewiring probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..WS_MAX_ATTEMPTS {
        let edges = ws_draw(n, k, p, &mut rng);
        let net = Network::new(n, edges)?;
        if net.is_connected() {
            return Ok(net);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no connected WS graph after {WS_MAX_ATTEMPTS} draws (n={n}, k={k}, p={p})"
    )))
}

fn ws_draw(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(NodeId, NodeId)> {
    let mut adj: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
    let mut edges = Vec::with_capacity(n * k / 2);
    for i in 0..n {
        for j in 1..=k / 2 {
            let v = (i + j) % n;
            adj[i].insert(v);
            adj[v].insert(i);
            edges.push((i, v));
        }
    }
    if p == 0.0 {
        return edges;
    }
    for edge in edges.iter_mut() {
        if rng.gen::<f64>() >= p {
            continue;
        }
        let (u, old) = *edge;
        let candidates: Vec<NodeId> = (0..n).filter(|&w| w != u && !adj[u].contains(&w)).collect();
        if candidates.is_empty() {
            continue;
        }
        let new = candidates[rng.gen_range(0..candidates.len())];
        adj[u].remove(&old);
        adj[old].remove(&u);
        adj[u].insert(new);
        adj[new].insert(u);
        *edge = (u, new);
    }
    edges
}
