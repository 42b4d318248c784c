//! Exhaustive minimum-loss topology search: run the sweep on every spanning
//! forest and keep the best converged one.

use super::enumerate::{count_spanning_forests, for_each_radial_topology};
use super::sweep::{sweep_powerflow, FixedInjections};
use super::topology::Topology;
use crate::case::NetworkCase;
use thiserror::Error;

pub const DEFAULT_TOPOLOGY_CEILING: u128 = 1_000_000;

#[derive(Debug, Error)]
pub enum BruteError {
    #[error("{count} topologies exceed the search ceiling {ceiling}; refusing to sample")]
    CeilingExceeded { count: u128, ceiling: u128 },
    #[error("hour {0} outside case horizon")]
    BadHour(usize),
    #[error("no topology produced a converged power flow")]
    NothingConverged,
}

#[derive(Debug, Clone, Default)]
pub struct BruteStats {
    pub evaluated: usize,
    pub skipped_nonconverged: usize,
    pub skipped_disconnected: usize,
}

/// Search every radial topology for the one minimizing total loss at `hour`.
///
/// Non-converged sweeps are skipped and counted; ties on loss break toward
/// the lexicographically smallest closed set, so the result is deterministic.
pub fn brute_force_best_topology(
    case: &NetworkCase,
    hour: usize,
    substation_v: &[f64],
    injections: &FixedInjections,
    ceiling: u128,
) -> Result<(Topology, f64, BruteStats), BruteError> {
    if hour >= case.horizon {
        return Err(BruteError::BadHour(hour));
    }
    let count = count_spanning_forests(case);
    if count > ceiling {
        return Err(BruteError::CeilingExceeded { count, ceiling });
    }

    let mut stats = BruteStats::default();
    let mut best: Option<(Topology, f64)> = None;

    for_each_radial_topology(case, |closed| {
        let topo = match Topology::new(case, closed) {
            Ok(t) => t,
            Err(_) => {
                stats.skipped_disconnected += 1;
                return;
            }
        };
        match sweep_powerflow(case, &topo, hour, substation_v, injections) {
            Ok(pf) => {
                stats.evaluated += 1;
                let better = match &best {
                    None => true,
                    Some((bt, bl)) => {
                        pf.total_loss < *bl
                            || (pf.total_loss == *bl
                                && topo.closed_branches() < bt.closed_branches())
                    }
                };
                if better {
                    best = Some((topo, pf.total_loss));
                }
            }
            Err(super::sweep::SweepError::DisconnectedLoadBus(_)) => {
                stats.skipped_disconnected += 1;
            }
            Err(_) => {
                stats.skipped_nonconverged += 1;
            }
        }
    });

    match best {
        Some((t, loss)) => Ok((t, loss, stats)),
        None => Err(BruteError::NothingConverged),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{triangle_case, two_bus_case};

    #[test]
    fn single_branch_case_returns_its_only_topology() {
        let case = two_bus_case();
        let inj = FixedInjections::none(2);
        let (topo, loss, stats) =
            brute_force_best_topology(&case, 0, &[1.05], &inj, 10).unwrap();
        assert_eq!(topo.closed_branches(), &[0]);
        assert!(loss > 0.0);
        assert_eq!(stats.evaluated, 1);
    }

    #[test]
    fn lossless_path_is_selected() {
        let mut case = triangle_case(false);
        // make the path s->b->a resistance-free; the optimum must use it
        case.branches[1].r = 0.0; // a-b
        case.branches[2].r = 0.0; // b-s
        let inj = FixedInjections::none(3);
        let (topo, loss, _) = brute_force_best_topology(&case, 0, &[1.0], &inj, 10).unwrap();
        assert_eq!(topo.closed_branches(), &[1, 2]);
        assert!(loss < 1e-12);
    }

    #[test]
    fn base_topology_never_beats_the_minimum() {
        let case = triangle_case(false);
        let inj = FixedInjections::none(3);
        let base = Topology::initial(&case).unwrap();
        let base_loss = sweep_powerflow(&case, &base, 0, &[1.0], &inj).unwrap().total_loss;
        let (_, best_loss, _) = brute_force_best_topology(&case, 0, &[1.0], &inj, 10).unwrap();
        assert!(best_loss <= base_loss + 1e-15);
    }

    #[test]
    fn ceiling_is_enforced() {
        let case = triangle_case(false);
        let inj = FixedInjections::none(3);
        assert!(matches!(
            brute_force_best_topology(&case, 0, &[1.0], &inj, 2),
            Err(BruteError::CeilingExceeded { .. })
        ));
    }
}
