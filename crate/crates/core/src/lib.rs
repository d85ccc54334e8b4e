//! Cluster-head selection for ad hoc network topologies.
//!
//! A network is modeled as a unit-disk graph ([`geomgraph`]); a set of
//! cluster heads is a dominating set of that graph ([`clustering`]). Heads
//! can be chosen by the ant colony selector in [`aco`], by the classical
//! election schemes in [`baselines`], or by the reference solvers in
//! [`oracle`]. [`experiments`] runs parameter sweeps over random topologies.

pub mod aco;
pub mod baselines;
pub mod cli;
pub mod clustering;
pub mod error;
pub mod experiments;
pub mod geomgraph;
pub mod oracle;
pub mod solver;

pub use error::{Error, Result};
pub use geomgraph::{NodeId, Point, Topology, TopologyConfig};
