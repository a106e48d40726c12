//! Independent reference implementations used only by tests.

#![allow(dead_code)]

use netcap::Network;
use rand::Rng;

/// Betweenness by enumerating every simple path of every ordered pair.
/// Paths whose weight equals the pair minimum (relative 1e-12) share the pair evenly.
pub fn brute_force_betweenness(net: &Network, weights: &[f64]) -> Vec<f64> {
    let n = net.node_count();
    let mut b = vec![0.0; n];
    for s in 0..n {
        let mut paths: Vec<Vec<(f64, Vec<usize>)>> = vec![Vec::new(); n];
        let mut on_path = vec![false; n];
        let mut stack = vec![s];
        on_path[s] = true;
        dfs(net, weights, s, 0.0, &mut stack, &mut on_path, &mut paths);
        for (t, list) in paths.iter().enumerate() {
            if t == s {
                continue;
            }
            assert!(!list.is_empty(), "oracle needs a connected graph");
            let best = list.iter().map(|(w, _)| *w).fold(f64::INFINITY, f64::min);
            let tied: Vec<_> = list
                .iter()
                .filter(|(w, _)| (w - best).abs() <= 1e-12 * best.max(1.0))
                .collect();
            let share = 1.0 / tied.len() as f64;
            for (_, p) in tied {
                for &v in &p[1..p.len() - 1] {
                    b[v] += share;
                }
            }
        }
    }
    b
}

fn dfs(
    net: &Network,
    weights: &[f64],
    u: usize,
    dist: f64,
    stack: &mut Vec<usize>,
    on_path: &mut [bool],
    paths: &mut [Vec<(f64, Vec<usize>)>],
) {
    for &(v, e) in net.neighbors(u) {
        if on_path[v] {
            continue;
        }
        let d = dist + weights[e];
        stack.push(v);
        on_path[v] = true;
        paths[v].push((d, stack.clone()));
        dfs(net, weights, v, d, stack, on_path, paths);
        on_path[v] = false;
        stack.pop();
    }
}

/// Hop-count betweenness via `sum sigma_si * sigma_it / sigma_st` over ordered pairs.
pub fn bfs_pair_betweenness(net: &Network) -> Vec<f64> {
    let n = net.node_count();
    let mut dist = vec![vec![usize::MAX; n]; n];
    let mut sigma = vec![vec![0.0f64; n]; n];
    for s in 0..n {
        let mut queue = std::collections::VecDeque::from([s]);
        dist[s][s] = 0;
        sigma[s][s] = 1.0;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in net.neighbors(u) {
                if dist[s][v] == usize::MAX {
                    dist[s][v] = dist[s][u] + 1;
                    queue.push_back(v);
                }
                if dist[s][v] == dist[s][u] + 1 {
                    sigma[s][v] += sigma[s][u];
                }
            }
        }
    }
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            for i in 0..n {
                if i != s && i != t && dist[s][i] + dist[i][t] == dist[s][t] {
                    b[i] += sigma[s][i] * sigma[i][t] / sigma[s][t];
                }
            }
        }
    }
    b
}

/// Random spanning tree on `n` nodes plus up to `extra` chords.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, extra: usize) -> Network {
    let mut edges = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Network::connected(n, edges).unwrap()
}

/// Weights drawn from {0.25, 0.5, 0.75, 1.0} so that equal-weight paths are common.
pub fn coarse_weights<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(1..=4) as f64 * 0.25).collect()
}

/// Weights uniform on (0, 1].
pub fn fine_weights<R: Rng>(rng: &mut R, m: usize) -> Vec<f64> {
    (0..m).map(|_| 1.0 - rng.gen::<f64>()).collect()
}

pub fn star(n: usize) -> Network {
    Network::connected(n, (1..n).map(|i| (0, i))).unwrap()
}

pub fn path(n: usize) -> Network {
    Network::connected(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn cycle(n: usize) -> Network {
    Network::connected(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}
