//! Network topology and the per-edge weight vector that forms the decision variable.

mod edgelist;
mod generators;

pub use edgelist::{load_edgelist, parse_edgelist, write_edgelist, LoadWarning, LoadedNetwork};
pub use generators::{generate_ba, generate_ws};

use std::collections::{HashSet, VecDeque};
use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type NodeId = usize;
pub type EdgeId = usize;

/// Undirected simple graph with dense, stable node and edge ids.
///
/// Edges are stored with `u < v`. The adjacency list of each node is kept
/// in ascending neighbor order, which fixes every iteration order that
/// routing and tie-breaking depend on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

impl Network {
    /// Builds a network, rejecting self-loops, parallel edges and out-of-range ids.
    /// Connectivity is not required here; see [`Network::is_connected`].
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::Empty("network has no nodes"));
        }
        let mut seen = HashSet::new();
        let mut stored = Vec::new();
        let mut adjacency = vec![Vec::new(); node_count];
        for (a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({a}, {b}) references a node outside 0..{node_count}"
                )));
            }
            if a == b {
                return Err(Error::InvalidNetwork(format!("self-loop on node {a}")));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::InvalidNetwork(format!("parallel edge ({}, {})", key.0, key.1)));
            }
            let id = stored.len();
            stored.push(key);
            adjacency[key.0].push((key.1, id));
            adjacency[key.1].push((key.0, id));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { node_count, edges: stored, adjacency })
    }

    /// Same as [`Network::new`] but also requires connectivity.
    pub fn connected(node_count: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let net = Self::new(node_count, edges)?;
        if !net.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (NodeId, NodeId) {
        self.edges[id]
    }

    /// `(neighbor, edge id)` pairs in ascending neighbor order.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.node_count as f64
    }

    /// Nodes reachable from `start` by BFS.
    pub fn component_of(&self, start: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.node_count];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        order
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0).len() == self.node_count
    }

    /// Edge id joining `a` and `b`, if any.
    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        self.adjacency[a]
            .binary_search_by_key(&b, |&(v, _)| v)
            .ok()
            .map(|i| self.adjacency[a][i].1)
    }
}

/// One weight per edge id, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> WeightVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some((edge, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v > T::zero() && v <= T::one()))
        {
            return Err(Error::InvalidWeight { edge, value: v.as_f64() });
        }
        Ok(Self { values })
    }

    /// Every edge gets weight 1.
    pub fn uniform(edge_count: usize) -> Self {
        Self { values: vec![T::one(); edge_count] }
    }

    /// Wraps values the caller already keeps inside `(0, 1]`.
    pub(crate) fn from_raw(values: Vec<T>) -> Self {
        debug_assert!(values.iter().all(|&v| v > T::zero() && v <= T::one()));
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.values.iter()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    /// Errors unless this vector has one valid weight per edge of `net`.
    pub fn check_against(&self, net: &Network) -> Result<()> {
        if self.values.len() != net.edge_count() {
            return Err(Error::DimensionMismatch { expected: net.edge_count(), actual: self.values.len() });
        }
        Ok(())
    }
}

impl<T> Index<EdgeId> for WeightVector<T> {
    type Output = T;

    fn index(&self, edge: EdgeId) -> &T {
        &self.values[edge]
    }
}
