//! Compilation of a network case plus scenario options into the canonical
//! mixed-integer conic program, and recovery of physical solutions from raw
//! solver vectors.

mod build;
mod program;
mod solution;

pub use build::{build_model, BuiltModel, ModelOptions};
pub use program::{
    ConicProgram, EqRow, ProgramError, Quantity, RotatedCone, RowKind, RowRef, VarRef, VariableMap,
};
pub use solution::{extract_solution, HourFrame, SolutionFrame};

use crate::case::{NetworkCase, ZipCoefficients, ZipTriple};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cvr factor {0} outside [0, 0.1]")]
    BadCvrFactor(f64),
    #[error("hour {0} outside the case horizon")]
    BadHour(usize),
    #[error("empty hour selection")]
    NoHours,
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error("extraction failed: {0}")]
    Extraction(String),
}

/// The four operating configurations: the standard network, reconfiguration
/// only, voltage reduction only, and both combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Sdn,
    Sdntr,
    Cedn,
    Cedntr,
}

impl Scenario {
    pub fn reconfiguration(self) -> bool {
        matches!(self, Scenario::Sdntr | Scenario::Cedntr)
    }

    pub fn cvr(self) -> bool {
        matches!(self, Scenario::Cedn | Scenario::Cedntr)
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Sdn => "sdn",
            Scenario::Sdntr => "sdntr",
            Scenario::Cedn => "cedn",
            Scenario::Cedntr => "cedntr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyMode {
    /// Independent switch decisions per hour.
    Hourly,
    /// One switch pattern shared by every hour.
    Static,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoadModel {
    Ci,
    Cc,
    Cp,
    /// Use the ZIP triples from the case file.
    Custom,
}

impl LoadModel {
    /// Effective ZIP coefficients for a bus under this load model.
    pub fn zip_for(self, case: &NetworkCase, bus: usize) -> ZipCoefficients {
        match self {
            LoadModel::Ci => ZipCoefficients::uniform(ZipTriple::CONSTANT_IMPEDANCE),
            LoadModel::Cc => ZipCoefficients::uniform(ZipTriple::CONSTANT_CURRENT),
            LoadModel::Cp => ZipCoefficients::uniform(ZipTriple::CONSTANT_POWER),
            LoadModel::Custom => case.zip_for_bus(bus),
        }
    }
}

pub const CVR_FACTOR_MAX: f64 = 0.1;
pub const CVR_FACTOR_DEFAULT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Fraction by which the squared lower voltage bounds are relaxed
    /// downward; zero in the non-CVR scenarios.
    pub cvr_factor: f64,
    pub topology_mode: TopologyMode,
    pub der_enabled: bool,
    pub load_model: LoadModel,
}

impl ScenarioConfig {
    /// Build a consistent configuration: the non-CVR scenarios force the
    /// factor to zero, and out-of-range factors are rejected.
    pub fn new(
        scenario: Scenario,
        cvr_factor: f64,
        topology_mode: TopologyMode,
        der_enabled: bool,
        load_model: LoadModel,
    ) -> Result<Self, ModelError> {
        if !(0.0..=CVR_FACTOR_MAX).contains(&cvr_factor) {
            return Err(ModelError::BadCvrFactor(cvr_factor));
        }
        let cvr_factor = if scenario.cvr() { cvr_factor } else { 0.0 };
        Ok(ScenarioConfig { scenario, cvr_factor, topology_mode, der_enabled, load_model })
    }
}
