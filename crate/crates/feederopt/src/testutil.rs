//! Small hand-built cases shared across unit tests.

use crate::case::{
    BranchSpec, BusKind, BusSpec, NetworkCase, ZipCoefficients, ZipTriple,
};

pub fn bus(id: &str, kind: BusKind, p: f64, q: f64) -> BusSpec {
    BusSpec {
        id: id.to_string(),
        kind,
        p_demand: p,
        q_demand: q,
        v_min: 0.9,
        v_max: 1.1,
        v_set: if kind == BusKind::Substation { Some(1.0) } else { None },
        zip: None,
    }
}

pub fn branch(id: &str, from: usize, to: usize, r: f64, x: f64) -> BranchSpec {
    BranchSpec {
        id: id.to_string(),
        from,
        to,
        r,
        x,
        i_max: 5.0,
        switchable: false,
        initially_closed: true,
    }
}

fn shell(name: &str, buses: Vec<BusSpec>, branches: Vec<BranchSpec>, horizon: usize) -> NetworkCase {
    NetworkCase {
        name: name.to_string(),
        s_base_mva: 1.0,
        v_base_kv: 12.66,
        v_rated: 1.0,
        horizon,
        buses,
        branches,
        generators: vec![],
        pv_units: vec![],
        batteries: vec![],
        zip_defaults: ZipCoefficients::uniform(ZipTriple::CONSTANT_POWER),
        load_profile: vec![1.0; horizon],
        description: String::new(),
    }
}

/// Substation `s` feeding one load bus `a` over a single fixed branch.
pub fn two_bus_case() -> NetworkCase {
    shell(
        "two_bus",
        vec![bus("s", BusKind::Substation, 0.0, 0.0), bus("a", BusKind::Load, 0.5, 0.2)],
        vec![branch("l1", 0, 1, 0.02, 0.01)],
        1,
    )
}

/// Three buses in a ring. With `all_closed` the initial topology is cyclic
/// (invalid); otherwise `l3` starts open and the case is a valid feeder
/// with one tie.
pub fn triangle_case(all_closed: bool) -> NetworkCase {
    let mut branches = vec![
        branch("l1", 0, 1, 0.02, 0.01),
        branch("l2", 1, 2, 0.02, 0.01),
        branch("l3", 2, 0, 0.03, 0.015),
    ];
    for b in &mut branches {
        b.switchable = true;
    }
    if !all_closed {
        branches[2].initially_closed = false;
    }
    shell(
        "triangle",
        vec![
            bus("s", BusKind::Substation, 0.0, 0.0),
            bus("a", BusKind::Load, 0.3, 0.1),
            bus("b", BusKind::Load, 0.2, 0.1),
        ],
        branches,
        1,
    )
}
