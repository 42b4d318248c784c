//! Static validation of case invariants. Violations are reported as data so
//! callers can show them all at once; an empty report means the case is valid.

use super::{BusKind, NetworkCase, ZipTriple};
use std::collections::BTreeSet;
use std::fmt;

const ZIP_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Offending entity, e.g. `bus b3` or `branch l37`.
    pub entity: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, entity: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { entity: entity.into(), message: message.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  {}: {}", v.entity, v.message)?;
        }
        Ok(())
    }
}

fn check_triple(report: &mut ValidationReport, entity: &str, label: &str, t: ZipTriple) {
    if (t.sum() - 1.0).abs() > ZIP_SUM_TOL {
        report.push(entity, format!("{label} ZIP coefficients sum to {} != 1", t.sum()));
    }
    if t.z < 0.0 || t.i < 0.0 || t.p < 0.0 {
        report.push(entity, format!("{label} ZIP coefficients must be non-negative"));
    }
}

/// Minimal union-find used for the spanning-forest checks.
struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Walk the closed subgraph to name the cycle closed by `extra` (from, to).
fn cycle_path(case: &NetworkCase, closed_so_far: &[usize], extra: (usize, usize)) -> String {
    let n = case.n_buses();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in closed_so_far {
        let br = &case.branches[e];
        adj[br.from].push(br.to);
        adj[br.to].push(br.from);
    }
    // BFS from extra.0 to extra.1 through already-closed branches
    let (start, goal) = extra;
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    prev[start] = start;
    queue.push_back(start);
    while let Some(u) = queue.pop_front() {
        if u == goal {
            break;
        }
        for &v in &adj[u] {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![goal];
    let mut cur = goal;
    while cur != start && prev[cur] != usize::MAX {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path.iter().map(|&b| case.buses[b].id.as_str()).collect::<Vec<_>>().join(" - ")
}

/// Check every case invariant and report each violation with the entity id.
pub fn validate_case(case: &NetworkCase) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = case.n_buses();

    // identifiers
    let mut seen = BTreeSet::new();
    for b in &case.buses {
        if !seen.insert(b.id.as_str()) {
            report.push(format!("bus {}", b.id), "duplicate bus id");
        }
    }
    let mut seen = BTreeSet::new();
    for b in &case.branches {
        if !seen.insert(b.id.as_str()) {
            report.push(format!("branch {}", b.id), "duplicate branch id");
        }
    }

    // buses
    for b in &case.buses {
        let ent = format!("bus {}", b.id);
        if !(b.v_min > 0.0 && b.v_min < b.v_max) {
            report.push(
                &ent,
                format!("voltage bounds inverted or non-positive (v_min={}, v_max={})", b.v_min, b.v_max),
            );
        }
        match b.kind {
            BusKind::Substation => {
                match b.v_set {
                    None => report.push(&ent, "substation bus lacks a voltage setpoint"),
                    Some(v) => {
                        if v < b.v_min || v > b.v_max {
                            report.push(&ent, format!("setpoint {v} outside [v_min, v_max]"));
                        }
                    }
                }
                if b.p_demand != 0.0 || b.q_demand != 0.0 {
                    report.push(&ent, "substation bus carries nominal demand");
                }
            }
            BusKind::NonLoad => {
                if b.p_demand != 0.0 || b.q_demand != 0.0 {
                    report.push(&ent, "non-load bus has nonzero nominal demand");
                }
            }
            BusKind::Load => {}
        }
        if b.v_set.is_some() && b.kind != BusKind::Substation {
            report.push(&ent, "voltage setpoint on a non-substation bus");
        }
        if let Some(z) = b.zip {
            check_triple(&mut report, &ent, "active", z.active);
            check_triple(&mut report, &ent, "reactive", z.reactive);
        }
    }
    check_triple(&mut report, "zip_defaults", "active", case.zip_defaults.active);
    check_triple(&mut report, "zip_defaults", "reactive", case.zip_defaults.reactive);

    // branches
    let mut pairs = BTreeSet::new();
    for b in &case.branches {
        let ent = format!("branch {}", b.id);
        if b.r < 0.0 || b.x < 0.0 {
            report.push(&ent, format!("negative impedance (r={}, x={})", b.r, b.x));
        }
        if !(b.i_max > 0.0) {
            report.push(&ent, format!("i_max must be positive (got {})", b.i_max));
        }
        if b.from == b.to {
            report.push(&ent, "self-loop (from == to)");
        }
        if b.from >= n || b.to >= n {
            report.push(&ent, "endpoint index out of range");
            continue;
        }
        let key = (b.from.min(b.to), b.from.max(b.to));
        if !pairs.insert(key) {
            report.push(
                &ent,
                format!(
                    "duplicate branch between {} and {}",
                    case.buses[key.0].id, case.buses[key.1].id
                ),
            );
        }
        if !b.switchable && !b.initially_closed {
            report.push(&ent, "non-switchable branch marked open");
        }
    }

    // generators, PV, batteries
    for g in &case.generators {
        let ent = format!("generator {}", g.id);
        if g.bus >= n {
            report.push(&ent, "bus index out of range");
        }
        if g.p_min > g.p_max {
            report.push(&ent, format!("p_min {} > p_max {}", g.p_min, g.p_max));
        }
        if g.q_min > g.q_max {
            report.push(&ent, format!("q_min {} > q_max {}", g.q_min, g.q_max));
        }
    }
    for p in &case.pv_units {
        let ent = format!("pv {}", p.id);
        if p.bus >= n {
            report.push(&ent, "bus index out of range");
        }
        if p.availability.len() != case.horizon {
            report.push(
                &ent,
                format!("availability length {} != horizon {}", p.availability.len(), case.horizon),
            );
        }
        if let Some((h, v)) = p.availability.iter().enumerate().find(|(_, v)| **v < 0.0) {
            report.push(&ent, format!("negative availability {v} at hour {h}"));
        }
    }
    for b in &case.batteries {
        let ent = format!("battery {}", b.id);
        if b.bus >= n {
            report.push(&ent, "bus index out of range");
        }
        if !(b.e_cap > 0.0) {
            report.push(&ent, "energy capacity must be positive");
        }
        if !(0.0 <= b.soc_min && b.soc_min < b.soc_max && b.soc_max <= 1.0) {
            report.push(&ent, format!("SoC bounds invalid ({}, {})", b.soc_min, b.soc_max));
        }
        if b.e_init < b.soc_min * b.e_cap - 1e-12 || b.e_init > b.soc_max * b.e_cap + 1e-12 {
            report.push(&ent, format!("initial energy {} outside SoC window", b.e_init));
        }
        if !(b.c_duration > 0.0 && b.d_duration > 0.0) {
            report.push(&ent, "charge/discharge durations must be positive");
        }
        for (label, eta) in [("charge", b.eta_chg), ("discharge", b.eta_dchg)] {
            if !(eta > 0.0 && eta <= 1.0) {
                report.push(&ent, format!("{label} efficiency {eta} outside (0, 1]"));
            }
        }
        if b.q_rating < 0.0 {
            report.push(&ent, "negative reactive rating");
        }
    }

    // profile
    if case.load_profile.len() != case.horizon {
        report.push(
            "load_profile",
            format!("length {} != horizon {}", case.load_profile.len(), case.horizon),
        );
    }
    if let Some((h, v)) = case.load_profile.iter().enumerate().find(|(_, v)| **v < 0.0) {
        report.push("load_profile", format!("negative multiplier {v} at hour {h}"));
    }

    let n_sub = case.n_substations();
    if n_sub == 0 {
        report.push("case", "no substation bus");
    }

    // graph structure: stop here if endpoints were broken
    if report.violations.iter().any(|v| v.message.contains("out of range")) {
        return report;
    }

    // full branch graph connected
    let mut ds = DisjointSet::new(n);
    for b in &case.branches {
        ds.union(b.from, b.to);
    }
    let roots: BTreeSet<usize> = (0..n).map(|i| ds.find(i)).collect();
    if roots.len() > 1 {
        report.push("case", format!("branch graph has {} disconnected components", roots.len()));
    }

    // initially closed branches form a spanning forest with one tree per substation
    let mut ds = DisjointSet::new(n);
    let mut closed_count = 0usize;
    let mut closed_so_far: Vec<usize> = Vec::new();
    for (e, b) in case.branches.iter().enumerate() {
        if !b.initially_closed {
            continue;
        }
        closed_count += 1;
        if !ds.union(b.from, b.to) {
            let cycle = cycle_path(case, &closed_so_far, (b.from, b.to));
            report.push(
                format!("branch {}", b.id),
                format!("closing it creates a cycle through buses {cycle}"),
            );
        }
        closed_so_far.push(e);
    }
    let expected = n.saturating_sub(n_sub);
    if closed_count != expected {
        report.push(
            "case",
            format!("closed branch count {closed_count} != n_buses - n_substations = {expected}"),
        );
    }
    // every bus reachable from some substation through closed branches;
    // and no two substations share a tree
    let subs = case.substations();
    let sub_roots: BTreeSet<usize> = subs.iter().map(|&s| ds.find(s)).collect();
    if sub_roots.len() < subs.len() {
        report.push("case", "two substations are connected by closed branches");
    }
    for i in 0..n {
        let r = ds.find(i);
        if !sub_roots.contains(&r) {
            report.push(
                format!("bus {}", case.buses[i].id),
                "unreachable from any substation via closed branches",
            );
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{triangle_case, two_bus_case};

    #[test]
    fn valid_case_has_empty_report() {
        let case = two_bus_case();
        assert!(validate_case(&case).is_empty());
    }

    #[test]
    fn inverted_voltage_bounds_flagged() {
        let mut case = two_bus_case();
        case.buses[1].v_min = 1.1;
        case.buses[1].v_max = 0.9;
        let report = validate_case(&case);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].message.contains("inverted"));
        assert_eq!(report.violations[0].entity, "bus a");
    }

    #[test]
    fn bad_zip_sum_flagged() {
        let mut case = two_bus_case();
        case.zip_defaults.active = ZipTriple { z: 0.5, i: 0.3, p: 0.1 };
        let report = validate_case(&case);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].message.contains("sum"));
    }

    #[test]
    fn closed_cycle_is_named() {
        let case = triangle_case(true);
        let report = validate_case(&case);
        assert!(!report.is_empty());
        let v = report
            .violations
            .iter()
            .find(|v| v.message.contains("cycle"))
            .expect("cycle violation");
        assert!(v.message.contains("s"), "cycle path should list buses: {}", v.message);
    }
}
