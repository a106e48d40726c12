//! Smallest-weight-path routing betweenness and the two transport objectives.
//!
//! Betweenness counts ordered source/target pairs, so a star with `N` nodes
//! gives its centre `(N-1)(N-2)`. Ties between path weights are detected with
//! [`Scalar::tie_eq`], and tied paths split the pair's unit of traffic evenly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{Network, NodeId, WeightVector};
use crate::scalar::Scalar;

/// Capacity reported when no node relays any traffic (every pair adjacent).
pub const UNBOUNDED_CAPACITY: f64 = 1e18;

#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessResult<T> {
    pub per_node: Vec<T>,
    pub max_value: T,
    /// Lowest id among the nodes attaining `max_value`.
    pub max_node: NodeId,
    pub sum_value: T,
}

/// `lambda_c` is maximized, `h_avg` minimized.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ObjectivePoint<T> {
    pub lambda_c: T,
    pub h_avg: T,
}

impl<T: Scalar> ObjectivePoint<T> {
    pub fn new(lambda_c: T, h_avg: T) -> Self {
        Self { lambda_c, h_avg }
    }

    /// True when `lambda_c` is the [`UNBOUNDED_CAPACITY`] sentinel.
    pub fn is_unbounded(&self) -> bool {
        self.lambda_c >= T::of(UNBOUNDED_CAPACITY)
    }
}

impl<T: Scalar> ObjectivePoint<T> {
    /// Builds the objectives from a betweenness vector of an `n`-node network.
    pub fn from_betweenness(b: &BetweennessResult<T>) -> Self {
        let n = T::of(b.per_node.len() as f64);
        let lambda_c = if b.max_value > T::zero() {
            (n - T::one()) / b.max_value
        } else {
            T::of(UNBOUNDED_CAPACITY)
        };
        let pairs = n * (n - T::one());
        let h_avg = if pairs > T::zero() { b.sum_value / pairs } else { T::zero() };
        Self { lambda_c, h_avg }
    }
}

struct Frontier<T> {
    dist: T,
    node: NodeId,
}

impl<T: PartialOrd> PartialEq for Frontier<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: PartialOrd> Eq for Frontier<T> {}

impl<T: PartialOrd> PartialOrd for Frontier<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: PartialOrd> Ord for Frontier<T> {
    // Min-heap on distance, then node id.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Reusable per-source buffers for the single-source pass.
struct Workspace<T> {
    dist: Vec<Option<T>>,
    sigma: Vec<T>,
    delta: Vec<T>,
    preds: Vec<Vec<NodeId>>,
    settled: Vec<bool>,
    order: Vec<NodeId>,
    heap: BinaryHeap<Frontier<T>>,
}

impl<T: Scalar> Workspace<T> {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![None; n],
            sigma: vec![T::zero(); n],
            delta: vec![T::zero(); n],
            preds: vec![Vec::new(); n],
            settled: vec![false; n],
            order: Vec::with_capacity(n),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        self.dist.iter_mut().for_each(|d| *d = None);
        self.sigma.iter_mut().for_each(|s| *s = T::zero());
        self.delta.iter_mut().for_each(|d| *d = T::zero());
        self.preds.iter_mut().for_each(Vec::clear);
        self.settled.iter_mut().for_each(|s| *s = false);
        self.order.clear();
        self.heap.clear();
    }

    /// Dijkstra from `source` recording path counts and tied predecessors.
    /// `order` receives nodes in non-decreasing distance.
    fn shortest_path_dag(&mut self, net: &Network, weights: &[T], source: NodeId) {
        self.reset();
        self.dist[source] = Some(T::zero());
        self.sigma[source] = T::one();
        self.heap.push(Frontier { dist: T::zero(), node: source });
        while let Some(Frontier { dist, node: u }) = self.heap.pop() {
            if self.settled[u] {
                continue;
            }
            self.settled[u] = true;
            self.order.push(u);
            for &(v, e) in net.neighbors(u) {
                if self.settled[v] {
                    continue;
                }
                let cand = dist + weights[e];
                match self.dist[v] {
                    Some(d) if T::tie_eq(d, cand) => {
                        self.sigma[v] = self.sigma[v] + self.sigma[u];
                        self.preds[v].push(u);
                    }
                    Some(d) if d < cand => {}
                    _ => {
                        self.dist[v] = Some(cand);
                        self.sigma[v] = self.sigma[u];
                        self.preds[v].clear();
                        self.preds[v].push(u);
                        self.heap.push(Frontier { dist: cand, node: v });
                    }
                }
            }
        }
    }
}

fn validate<T: Scalar>(net: &Network, x: &WeightVector<T>) -> Result<()> {
    x.check_against(net)?;
    if let Some((edge, &v)) = x.iter().enumerate().find(|(_, &v)| !(v > T::zero() && v.is_finite())) {
        return Err(Error::InvalidWeight { edge, value: v.as_f64() });
    }
    Ok(())
}

/// Routing betweenness of every node under smallest-weight-path routing.
///
/// One Dijkstra per source builds the shortest-path DAG with path counts;
/// dependencies are then accumulated in reverse distance order.
pub fn routing_betweenness<T: Scalar>(net: &Network, x: &WeightVector<T>) -> Result<BetweennessResult<T>> {
    validate(net, x)?;
    let n = net.node_count();
    let weights = x.as_slice();
    let mut ws = Workspace::new(n);
    let mut per_node = vec![T::zero(); n];
    for s in 0..n {
        ws.shortest_path_dag(net, weights, s);
        if ws.order.len() != n {
            return Err(Error::Disconnected);
        }
        for &w in ws.order.iter().rev() {
            let coeff = (T::one() + ws.delta[w]) / ws.sigma[w];
            for &v in &ws.preds[w] {
                ws.delta[v] = ws.delta[v] + ws.sigma[v] * coeff;
            }
            if w != s {
                per_node[w] = per_node[w] + ws.delta[w];
            }
        }
    }
    let (max_node, max_value) = per_node
        .iter()
        .copied()
        .enumerate()
        .fold((0, T::neg_infinity()), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
    let sum_value = per_node.iter().copied().sum();
    Ok(BetweennessResult { per_node, max_value, max_node, sum_value })
}

/// Network capacity and average hop count for weight vector `x`.
pub fn evaluate<T: Scalar>(net: &Network, x: &WeightVector<T>) -> Result<ObjectivePoint<T>> {
    routing_betweenness(net, x).map(|b| ObjectivePoint::from_betweenness(&b))
}

/// Node-betweenness based edge centrality: `(B_i + B_j) / (2 * sum B)` per edge.
/// Falls back to a uniform `1/M` when no node carries transit traffic.
pub fn nbec<T: Scalar>(net: &Network, x: &WeightVector<T>) -> Result<Vec<T>> {
    let b = routing_betweenness(net, x)?;
    Ok(nbec_from(net, &b))
}

pub(crate) fn nbec_from<T: Scalar>(net: &Network, b: &BetweennessResult<T>) -> Vec<T> {
    let m = net.edge_count();
    if b.sum_value <= T::zero() {
        return vec![T::one() / T::of(m as f64); m];
    }
    let denom = T::of(2.0) * b.sum_value;
    net.edges().iter().map(|&(u, v)| (b.per_node[u] + b.per_node[v]) / denom).collect()
}
