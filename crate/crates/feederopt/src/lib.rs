//! Day-ahead operational planning for radial distribution feeders.
//!
//! The crate minimizes resistive losses by co-optimizing conservation voltage
//! reduction (CVR) and network topology reconfiguration (NTR) over a
//! mixed-integer second-order-cone branch-flow model with PV, storage and
//! dispatchable generation. It ships:
//!
//! * [`case`] — the network data model, JSON case files, and bundled 33-bus
//!   and 123-bus feeders;
//! * [`zip`] — voltage-dependent ZIP load evaluation and its affine surrogate
//!   in squared-voltage variables;
//! * [`model`] — compilation of a case plus scenario into a canonical conic
//!   program, and mapping solver vectors back to physical solutions;
//! * [`solve`] — best-first branch-and-bound over the binary variables with a
//!   pluggable continuous conic backend, plus backend-independent feasibility
//!   checking;
//! * [`oracle`] — ground truth that never touches a solver: exact-ZIP
//!   backward/forward sweep power flow, spanning-forest enumeration, and
//!   brute-force best-topology search;
//! * [`runner`] / [`report`] — scenario orchestration, metrics, and
//!   byte-stable JSON/CSV emission.
//!
//! Each major capability has a runnable demo under `examples/`; the `feederopt`
//! binary exposes the same flows as `plan`, `compare`, `verify` and `brute`
//! subcommands.

pub mod case;
pub mod model;
pub mod oracle;
// pub mod report;
// pub mod runner;
// pub mod solve;
pub mod zip;

#[cfg(test)]
pub(crate) mod testutil;
