//! Backend-free ground truth for verification: exact-ZIP sweep power flow on
//! a fixed radial topology, spanning-forest enumeration with a matrix-tree
//! count, and brute-force best-topology search.

mod brute;
mod enumerate;
mod sweep;
mod topology;

pub use brute::{brute_force_best_topology, BruteError, BruteStats};
pub use enumerate::{
    count_spanning_forests, enumerate_radial_topologies, for_each_radial_topology, EnumerateError,
};
pub use sweep::{sweep_powerflow, FixedInjections, PfResult, SweepError};
pub use topology::{Topology, TopologyError};
