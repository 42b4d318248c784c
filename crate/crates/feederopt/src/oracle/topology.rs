//! Radial topology: a set of closed branches forming a spanning forest with
//! one tree per substation, oriented away from the substations.

use crate::case::NetworkCase;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    #[error("closed branch count {got} != n_buses - n_substations = {want}")]
    WrongBranchCount { got: usize, want: usize },
    #[error("closed branches contain a cycle (branch {0} closes it)")]
    Cycle(String),
    #[error("bus {0} is not reachable from any substation")]
    Unreachable(String),
    #[error("substations {0} and {1} share a tree")]
    SubstationsJoined(String, String),
    #[error("branch index {0} out of range")]
    BadBranch(usize),
}

/// A validated spanning forest over a case's branch graph.
///
/// Stores the closed branch set (sorted) and the orientation derived by
/// breadth-first search from each substation: for every non-root bus, the
/// closed branch feeding it and its parent bus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    closed: Vec<usize>,
    is_closed: Vec<bool>,
    /// Per bus: (parent bus, feeding branch); None at substations.
    parent: Vec<Option<(usize, usize)>>,
    /// Buses in breadth-first order from the substations (roots first).
    bfs_order: Vec<usize>,
}

impl Topology {
    /// Validate a closed-branch set and derive its orientation.
    pub fn new(case: &NetworkCase, closed_branches: &[usize]) -> Result<Self, TopologyError> {
        let n = case.n_buses();
        let want = n - case.n_substations();
        if closed_branches.len() != want {
            return Err(TopologyError::WrongBranchCount { got: closed_branches.len(), want });
        }
        let mut is_closed = vec![false; case.n_branches()];
        for &e in closed_branches {
            if e >= case.n_branches() {
                return Err(TopologyError::BadBranch(e));
            }
            is_closed[e] = true;
        }

        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (neighbor, branch)
        for (e, br) in case.branches.iter().enumerate() {
            if is_closed[e] {
                adj[br.from].push((br.to, e));
                adj[br.to].push((br.from, e));
            }
        }

        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut root_of = vec![usize::MAX; n];
        let mut bfs_order = Vec::with_capacity(n);
        let mut queue = std::collections::VecDeque::new();
        for s in case.substations() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            root_of[s] = s;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                bfs_order.push(u);
                for &(v, e) in &adj[u] {
                    if case.buses[v].kind == crate::case::BusKind::Substation && root_of[v] != v {
                        // reached another substation through closed branches
                        return Err(TopologyError::SubstationsJoined(
                            case.buses[s].id.clone(),
                            case.buses[v].id.clone(),
                        ));
                    }
                    if !seen[v] {
                        seen[v] = true;
                        root_of[v] = s;
                        parent[v] = Some((u, e));
                        queue.push_back(v);
                    }
                }
            }
        }

        if let Some(i) = (0..n).find(|&i| !seen[i]) {
            return Err(TopologyError::Unreachable(case.buses[i].id.clone()));
        }
        // every closed branch must be a tree edge; a leftover one either
        // closes a cycle inside a tree or joins two trees
        let tree_edges = parent.iter().filter(|p| p.is_some()).count();
        if tree_edges != want {
            let extra = (0..case.n_branches())
                .find(|&e| is_closed[e] && !parent.iter().flatten().any(|&(_, pe)| pe == e))
                .unwrap_or(0);
            let br = &case.branches[extra];
            if root_of[br.from] != root_of[br.to] {
                return Err(TopologyError::SubstationsJoined(
                    case.buses[root_of[br.from]].id.clone(),
                    case.buses[root_of[br.to]].id.clone(),
                ));
            }
            return Err(TopologyError::Cycle(br.id.clone()));
        }

        let mut closed = closed_branches.to_vec();
        closed.sort_unstable();
        Ok(Topology { closed, is_closed, parent, bfs_order })
    }

    /// The case's initial (as-built) topology.
    pub fn initial(case: &NetworkCase) -> Result<Self, TopologyError> {
        Topology::new(case, &case.initially_closed())
    }

    pub fn closed_branches(&self) -> &[usize] {
        &self.closed
    }

    pub fn is_closed(&self, branch: usize) -> bool {
        self.is_closed[branch]
    }

    /// Branch ids open in this topology (relative to the full branch set).
    pub fn open_branches(&self, case: &NetworkCase) -> Vec<usize> {
        (0..case.n_branches()).filter(|&e| !self.is_closed[e]).collect()
    }

    /// (parent bus, feeding branch) for a non-substation bus.
    pub fn parent(&self, bus: usize) -> Option<(usize, usize)> {
        self.parent[bus]
    }

    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs_order
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::triangle_case;

    #[test]
    fn accepts_each_triangle_tree() {
        let case = triangle_case(false);
        for closed in [[0usize, 1], [0, 2], [1, 2]] {
            let t = Topology::new(&case, &closed).unwrap();
            assert_eq!(t.closed_branches().len(), 2);
            assert_eq!(t.bfs_order().len(), 3);
        }
    }

    #[test]
    fn rejects_wrong_count_and_cycles() {
        let case = triangle_case(false);
        assert!(matches!(
            Topology::new(&case, &[0]),
            Err(TopologyError::WrongBranchCount { got: 1, want: 2 })
        ));
        assert!(Topology::new(&case, &[0, 1, 2]).is_err());
    }

    #[test]
    fn orientation_points_away_from_substation() {
        let case = triangle_case(false);
        let t = Topology::new(&case, &[1, 2]).unwrap(); // s-b via l3, b-a via l2
        assert_eq!(t.parent(0), None);
        assert_eq!(t.parent(2), Some((0, 2)));
        assert_eq!(t.parent(1), Some((2, 1)));
    }
}
