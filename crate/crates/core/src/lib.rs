//! Dynamic random network models.
//!
//! * [`model`]: telegraph-edge rates, stationary quantities, graph snapshots.
//! * [`simulator`]: exact event-driven simulation of the dynamic graph and the
//!   SI contact process on it.
//! * [`analytics`]: total-variation distance, mixing times, hitting-time bounds.
//! * [`turnover`]: node birth/death on Erdős–Rényi graphs and preferential
//!   attachment with node removal.
//! * [`stats`]: estimators used to compare simulations against theory.

pub mod analytics;
pub mod collections;
pub mod error;
pub mod model;
pub mod rng;
pub mod simulator;
pub mod stats;
pub mod turnover;

pub use error::{Error, Result};
pub use model::{
    derive_rates, derive_stationary, edge_on_probability, sample_edge_trajectory,
    sample_stationary_graph, Edge, EdgeParams, GraphSnapshot, InfectionRate, Removal, Stationary,
};
pub use rng::SimRng;
