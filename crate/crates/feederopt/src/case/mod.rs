//! Network data model: buses, branches, DERs, storage, per-unit bases and
//! the daily load profile. Cases are immutable after construction and are
//! validated against the structural invariants the optimizer relies on
//! (spanning-forest initial topology, coherent bounds, ZIP triples).

mod builtin;
mod io;
mod validate;

pub use builtin::{builtin_case, BUILTIN_NAMES};
pub use io::{case_to_json, load_case, load_case_lenient};
pub use validate::{validate_case, ValidationReport, Violation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {entity}: {message}")]
    Schema { entity: String, message: String },
    #[error("validation failed:\n{0}")]
    Validation(ValidationReport),
    #[error("unknown built-in case `{0}` (expected one of: ieee33, ieee123)")]
    UnknownBuiltin(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BusKind {
    Substation,
    Load,
    NonLoad,
}

/// One ZIP fraction triple: constant-impedance, constant-current and
/// constant-power shares of the nominal demand. Must sum to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZipTriple {
    pub z: f64,
    pub i: f64,
    pub p: f64,
}

impl ZipTriple {
    pub const CONSTANT_IMPEDANCE: ZipTriple = ZipTriple { z: 1.0, i: 0.0, p: 0.0 };
    pub const CONSTANT_CURRENT: ZipTriple = ZipTriple { z: 0.0, i: 1.0, p: 0.0 };
    pub const CONSTANT_POWER: ZipTriple = ZipTriple { z: 0.0, i: 0.0, p: 1.0 };

    pub fn sum(&self) -> f64 {
        self.z + self.i + self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZipCoefficients {
    pub active: ZipTriple,
    pub reactive: ZipTriple,
}

impl ZipCoefficients {
    pub fn uniform(t: ZipTriple) -> Self {
        ZipCoefficients { active: t, reactive: t }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BusSpec {
    pub id: String,
    pub kind: BusKind,
    /// Nominal active demand (p.u.); scaled by the hourly load profile.
    pub p_demand: f64,
    /// Nominal reactive demand (p.u.).
    pub q_demand: f64,
    pub v_min: f64,
    pub v_max: f64,
    /// Substation voltage setpoint (p.u.); `None` for non-substation buses.
    pub v_set: Option<f64>,
    /// Per-bus ZIP override; falls back to the case default.
    pub zip: Option<ZipCoefficients>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchSpec {
    pub id: String,
    /// Index into `NetworkCase::buses`.
    pub from: usize,
    pub to: usize,
    pub r: f64,
    pub x: f64,
    pub i_max: f64,
    pub switchable: bool,
    pub initially_closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub id: String,
    pub bus: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub q_min: f64,
    pub q_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PvUnitSpec {
    pub id: String,
    pub bus: usize,
    /// Available power per hour (p.u.), length = horizon.
    pub availability: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatterySpec {
    pub id: String,
    pub bus: usize,
    /// Energy capacity in p.u.-hours (serialized as MWh).
    pub e_cap: f64,
    pub soc_min: f64,
    pub soc_max: f64,
    /// Full charge / discharge durations in hours; power rating = e_cap / duration.
    pub c_duration: f64,
    pub d_duration: f64,
    pub eta_chg: f64,
    pub eta_dchg: f64,
    /// Initial stored energy in p.u.-hours.
    pub e_init: f64,
    /// Box bound on charge/discharge reactive power (p.u.).
    pub q_rating: f64,
}

impl BatterySpec {
    pub fn charge_rate(&self) -> f64 {
        self.e_cap / self.c_duration
    }
    pub fn discharge_rate(&self) -> f64 {
        self.e_cap / self.d_duration
    }
}

/// Immutable description of a distribution network over a planning horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkCase {
    pub name: String,
    pub s_base_mva: f64,
    pub v_base_kv: f64,
    /// ZIP normalization voltage (p.u.), the system nominal.
    pub v_rated: f64,
    pub horizon: usize,
    pub buses: Vec<BusSpec>,
    pub branches: Vec<BranchSpec>,
    pub generators: Vec<GeneratorSpec>,
    pub pv_units: Vec<PvUnitSpec>,
    pub batteries: Vec<BatterySpec>,
    pub zip_defaults: ZipCoefficients,
    /// System-wide hourly multiplier applied to nominal demand, length = horizon.
    pub load_profile: Vec<f64>,
    pub description: String,
}

impl NetworkCase {
    pub fn n_buses(&self) -> usize {
        self.buses.len()
    }

    pub fn n_branches(&self) -> usize {
        self.branches.len()
    }

    /// Bus indices of substations, in case order.
    pub fn substations(&self) -> Vec<usize> {
        self.buses
            .iter()
            .enumerate()
            .filter(|(_, b)| b.kind == BusKind::Substation)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn n_substations(&self) -> usize {
        self.buses.iter().filter(|b| b.kind == BusKind::Substation).count()
    }

    pub fn bus_index(&self, id: &str) -> Option<usize> {
        self.buses.iter().position(|b| b.id == id)
    }

    pub fn branch_index(&self, id: &str) -> Option<usize> {
        self.branches.iter().position(|b| b.id == id)
    }

    /// Effective ZIP coefficients for a bus under a forced load model.
    pub fn zip_for_bus(&self, bus: usize) -> ZipCoefficients {
        self.buses[bus].zip.unwrap_or(self.zip_defaults)
    }

    /// Nominal demand scaled by the hour's profile multiplier.
    pub fn demand_at(&self, bus: usize, hour: usize) -> (f64, f64) {
        let m = self.load_profile[hour];
        (self.buses[bus].p_demand * m, self.buses[bus].q_demand * m)
    }

    /// Copy of the case truncated to the first `t` hours of the horizon.
    pub fn truncated(&self, t: usize) -> NetworkCase {
        let t = t.min(self.horizon);
        let mut c = self.clone();
        c.horizon = t;
        c.load_profile.truncate(t);
        for pv in &mut c.pv_units {
            pv.availability.truncate(t);
        }
        c
    }

    /// Branch indices closed in the initial (as-built) topology.
    pub fn initially_closed(&self) -> Vec<usize> {
        self.branches
            .iter()
            .enumerate()
            .filter(|(_, b)| b.initially_closed)
            .map(|(i, _)| i)
            .collect()
    }
}
