//! Experiment harness behind the `netcap` binary: batch optimization runs,
//! persisted fronts, comparison reports, plot data and traffic simulation.

pub mod compare;
pub mod experiment;
pub mod instance;
pub mod numfmt;
pub mod plotdata;
pub mod results;
pub mod simulate;

pub use compare::{compare, CompareReport};
pub use experiment::{optimize, Algorithm, ExperimentSpec, Manifest, Preset};
pub use instance::Instance;
pub use results::ResultSet;
