//! Edge-weight optimization for network transport.
//!
//! Edge weights steer smallest-weight-path routing. This crate evaluates a
//! weighting by its transport capacity and average hop count, searches the
//! trade-off with a centrality-guided multi-objective particle swarm and
//! baselines, scores the resulting fronts, and checks capacity predictions
//! against a packet-level simulator.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the command-line harness uses.

pub mod baselines;
pub mod engine;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod nc;
pub mod pareto;
pub mod routing;
pub mod scalar;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{EdgeId, Network, NodeId};
pub use scalar::Scalar;

pub type WeightVector = graph::WeightVector<f64>;
pub type ObjectivePoint = routing::ObjectivePoint<f64>;
pub type BetweennessResult = routing::BetweennessResult<f64>;
pub type Archive = pareto::Archive<f64>;
pub type Particle = engine::Particle<f64>;
pub type Front = metrics::Front<f64>;
pub type ReferencePoint = metrics::ReferencePoint<f64>;
pub type Solution = pareto::Solution<f64>;
