//! Spanning-forest enumeration and counting.
//!
//! Forests with one tree per substation are exactly the spanning trees of the
//! graph with all substations merged into one vertex. Enumeration branches on
//! the lowest-numbered remaining edge (exclude it if the rest stays
//! connected, otherwise it is a bridge and must be included), which emits
//! every forest exactly once in lexicographic order of the decisions.
//! Counting uses the Kirchhoff (matrix-tree) determinant on the merged graph,
//! evaluated exactly in integer arithmetic.

use super::topology::Topology;
use crate::case::NetworkCase;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("{count} spanning forests exceed the enumeration ceiling {ceiling}")]
    CeilingExceeded { count: u128, ceiling: u128 },
    #[error("case is not enumerable: {0}")]
    BadCase(String),
}

/// Contracted multigraph: substations merged to vertex 0.
struct Merged {
    n: usize,
    /// endpoints per original branch index
    ends: Vec<(usize, usize)>,
}

fn merge_substations(case: &NetworkCase) -> Merged {
    let subs = case.substations();
    let is_sub = {
        let mut v = vec![false; case.n_buses()];
        for &s in &subs {
            v[s] = true;
        }
        v
    };
    // vertex ids: 0 = merged substations, others numbered in bus order
    let mut map = vec![usize::MAX; case.n_buses()];
    let mut next = 1;
    for i in 0..case.n_buses() {
        map[i] = if is_sub[i] {
            0
        } else {
            let id = next;
            next += 1;
            id
        };
    }
    let ends = case.branches.iter().map(|b| (map[b.from], map[b.to])).collect();
    Merged { n: next, ends }
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&r| m[r][k] != 0);
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Number of spanning forests (one tree per substation) by the matrix-tree
/// theorem on the substation-merged graph.
pub fn count_spanning_forests(case: &NetworkCase) -> u128 {
    let g = merge_substations(case);
    if g.n == 1 {
        return 1;
    }
    // Laplacian with vertex 0 deleted
    let dim = g.n - 1;
    let mut lap = vec![vec![0i128; dim]; dim];
    for &(a, b) in &g.ends {
        if a == b {
            continue; // self-loop after merging; never in a forest
        }
        if a > 0 {
            lap[a - 1][a - 1] += 1;
        }
        if b > 0 {
            lap[b - 1][b - 1] += 1;
        }
        if a > 0 && b > 0 {
            lap[a - 1][b - 1] -= 1;
            lap[b - 1][a - 1] -= 1;
        }
    }
    let det = bareiss_det(lap);
    debug_assert!(det >= 0);
    det as u128
}

/// Working graph for the contraction/deletion recursion: adjacency via
/// union-find style vertex labels is too slow to re-derive, so we keep an
/// explicit edge list and component labels computed on demand.
struct Walker<'a, F: FnMut(&[usize])> {
    n: usize,
    ends: &'a [(usize, usize)],
    visit: &'a mut F,
    chosen: Vec<usize>,
}

impl<F: FnMut(&[usize])> Walker<'_, F> {
    /// `alive[e]`: edge still available; `vertex_of[v]`: current contracted
    /// label per merged vertex; `n_comp`: number of distinct labels left.
    fn recurse(&mut self, alive: &[bool], vertex_of: &[usize], n_comp: usize, from_edge: usize) {
        if n_comp == 1 {
            (self.visit)(&self.chosen);
            return;
        }
        // next undecided edge whose endpoints are not already merged
        let mut e = from_edge;
        let (mut a, mut b) = (0, 0);
        loop {
            if e >= self.ends.len() {
                return; // no edge left to connect the remaining components
            }
            if alive[e] {
                a = vertex_of[self.ends[e].0];
                b = vertex_of[self.ends[e].1];
                if a != b {
                    break;
                }
            }
            e += 1;
        }

        let mut alive_minus_e = alive.to_vec();
        alive_minus_e[e] = false;

        // branch 1: exclude e, allowed only if the rest stays connected
        if connected(self.n, self.ends, &alive_minus_e, vertex_of, n_comp) {
            self.recurse(&alive_minus_e, vertex_of, n_comp, e + 1);
        }

        // branch 2: include e (contract its endpoints)
        let mut merged = vertex_of.to_vec();
        for label in merged.iter_mut() {
            if *label == b {
                *label = a;
            }
        }
        self.chosen.push(e);
        self.recurse(&alive_minus_e, &merged, n_comp - 1, e + 1);
        self.chosen.pop();
    }
}

fn connected(
    n: usize,
    ends: &[(usize, usize)],
    alive: &[bool],
    vertex_of: &[usize],
    n_comp: usize,
) -> bool {
    // union-find over current labels
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut comps = n_comp;
    for (e, &(a, b)) in ends.iter().enumerate() {
        if !alive[e] {
            continue;
        }
        let (la, lb) = (vertex_of[a], vertex_of[b]);
        let (ra, rb) = (find(&mut parent, la), find(&mut parent, lb));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
            if comps == 1 {
                return true;
            }
        }
    }
    comps == 1
}

/// Stream every spanning forest of the full branch graph exactly once.
///
/// The visitor receives the closed branch set of each forest. Use
/// [`enumerate_radial_topologies`] for a collected, validated form.
pub fn for_each_radial_topology<F: FnMut(&[usize])>(case: &NetworkCase, mut visit: F) {
    let g = merge_substations(case);
    let labels: Vec<usize> = (0..g.n).collect();
    let alive = vec![true; g.ends.len()];
    let mut w = Walker { n: g.n, ends: &g.ends, visit: &mut visit, chosen: Vec::new() };
    if g.n == 1 {
        (w.visit)(&[]);
        return;
    }
    if !connected(g.n, &g.ends, &alive, &labels, g.n) {
        return; // disconnected graph has no spanning forest
    }
    w.recurse(&alive, &labels, g.n, 0);
}

/// Collect every radial topology, refusing if the matrix-tree count exceeds
/// `ceiling`.
pub fn enumerate_radial_topologies(
    case: &NetworkCase,
    ceiling: u128,
) -> Result<Vec<Topology>, EnumerateError> {
    let count = count_spanning_forests(case);
    if count > ceiling {
        return Err(EnumerateError::CeilingExceeded { count, ceiling });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut bad: Option<String> = None;
    for_each_radial_topology(case, |closed| {
        if bad.is_some() {
            return;
        }
        match Topology::new(case, closed) {
            Ok(t) => out.push(t),
            Err(e) => bad = Some(e.to_string()),
        }
    });
    if let Some(msg) = bad {
        return Err(EnumerateError::BadCase(msg));
    }
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{branch, bus, triangle_case};
    use crate::case::{BusKind, NetworkCase, ZipCoefficients, ZipTriple};

    #[test]
    fn triangle_has_three_trees() {
        let case = triangle_case(false);
        assert_eq!(count_spanning_forests(&case), 3);
        let topos = enumerate_radial_topologies(&case, 10).unwrap();
        assert_eq!(topos.len(), 3);
        let sets: Vec<Vec<usize>> =
            topos.iter().map(|t| t.closed_branches().to_vec()).collect();
        assert!(sets.contains(&vec![0, 1]));
        assert!(sets.contains(&vec![0, 2]));
        assert!(sets.contains(&vec![1, 2]));
    }

    #[test]
    fn bridge_belongs_to_every_tree() {
        // s - a (bridge), then a ring a-b-c-a
        let mut branches = vec![
            branch("bridge", 0, 1, 0.01, 0.01),
            branch("r1", 1, 2, 0.01, 0.01),
            branch("r2", 2, 3, 0.01, 0.01),
            branch("r3", 3, 1, 0.01, 0.01),
        ];
        branches[3].initially_closed = false;
        for b in &mut branches {
            b.switchable = true;
        }
        branches[0].switchable = false;
        branches[0].initially_closed = true;
        let case = NetworkCase {
            name: "bridge".into(),
            s_base_mva: 1.0,
            v_base_kv: 12.66,
            v_rated: 1.0,
            horizon: 1,
            buses: vec![
                bus("s", BusKind::Substation, 0.0, 0.0),
                bus("a", BusKind::Load, 0.1, 0.0),
                bus("b", BusKind::Load, 0.1, 0.0),
                bus("c", BusKind::Load, 0.1, 0.0),
            ],
            branches,
            generators: vec![],
            pv_units: vec![],
            batteries: vec![],
            zip_defaults: ZipCoefficients::uniform(ZipTriple::CONSTANT_POWER),
            load_profile: vec![1.0],
            description: String::new(),
        };
        let topos = enumerate_radial_topologies(&case, 100).unwrap();
        assert_eq!(topos.len() as u128, count_spanning_forests(&case));
        assert_eq!(topos.len(), 3);
        assert!(topos.iter().all(|t| t.is_closed(0)), "bridge in every forest");
    }

    /// Kirchhoff count for the full 37-branch 33-bus graph, frozen from the
    /// matrix-tree determinant; enumeration must agree exactly.
    #[test]
    fn ieee33_count_matches_matrix_tree() {
        let case = crate::case::builtin_case("ieee33").unwrap();
        let count = count_spanning_forests(&case);
        assert_eq!(count, 50_751);
        let mut seen = 0u128;
        for_each_radial_topology(&case, |_| seen += 1);
        assert_eq!(seen, count);
    }

    #[test]
    fn ceiling_refusal() {
        let case = triangle_case(false);
        assert!(matches!(
            enumerate_radial_topologies(&case, 2),
            Err(EnumerateError::CeilingExceeded { count: 3, ceiling: 2 })
        ));
    }

    #[test]
    fn two_substation_forest_count() {
        // s1 - a - s2 chain plus a tie a-b off bus a:
        // merged graph: 0=(s1,s2), a, b with edges (0,a),(a,0),(a,b)
        let mut buses = vec![
            bus("s1", BusKind::Substation, 0.0, 0.0),
            bus("a", BusKind::Load, 0.1, 0.0),
            bus("s2", BusKind::Substation, 0.0, 0.0),
            bus("b", BusKind::Load, 0.1, 0.0),
        ];
        buses[2].v_set = Some(1.0);
        let mut branches = vec![
            branch("e1", 0, 1, 0.01, 0.01),
            branch("e2", 1, 2, 0.01, 0.01),
            branch("e3", 1, 3, 0.01, 0.01),
        ];
        branches[1].switchable = true;
        branches[1].initially_closed = false;
        let case = NetworkCase {
            name: "twosub".into(),
            s_base_mva: 1.0,
            v_base_kv: 12.66,
            v_rated: 1.0,
            horizon: 1,
            buses,
            branches,
            generators: vec![],
            pv_units: vec![],
            batteries: vec![],
            zip_defaults: ZipCoefficients::uniform(ZipTriple::CONSTANT_POWER),
            load_profile: vec![1.0],
            description: String::new(),
        };
        // forests must keep s1 and s2 in separate trees: e1,e3 or e2,e3
        assert_eq!(count_spanning_forests(&case), 2);
        let topos = enumerate_radial_topologies(&case, 10).unwrap();
        assert_eq!(topos.len(), 2);
    }
}
