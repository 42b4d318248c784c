//! Canonical mixed-integer conic form and the variable/row bookkeeping that
//! maps physical quantities to vector indices.
//!
//! The form is deliberately small: a linear objective, one sparse equality
//! system, per-variable boxes, rotated second-order cone memberships (one per
//! branch-hour), and the set of binary indices. General inequalities are
//! canonicalized with non-negative slack variables at build time.

use serde_json::json;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProgramError {
    #[error("variable {0} is not in the integrality set")]
    NotBinary(usize),
    #[error("primal vector length {got} != variable count {want}")]
    BadLength { got: usize, want: usize },
}

/// What a variable index stands for. Entities are indices into the case
/// collections; `hour` is the absolute hour (topology-period 0 for shared
/// switch variables in static mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    VSq(usize),
    ISq(usize),
    PFlow(usize),
    QFlow(usize),
    PSub(usize),
    QSub(usize),
    PInj(usize),
    QInj(usize),
    PPv(usize),
    PCurt(usize),
    PChg(usize),
    PDchg(usize),
    QChg(usize),
    QDchg(usize),
    PGen(usize),
    QGen(usize),
    Energy(usize),
    Switch(usize),
    ChgInd(usize),
    DchgInd(usize),
    ConnFlow(usize),
    Slack(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct VarRef {
    pub quantity: Quantity,
    pub hour: usize,
}

/// Row provenance for diagnostics and violation reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    BalanceP(usize),
    BalanceQ(usize),
    InjDefP(usize),
    InjDefQ(usize),
    VoltDrop(usize),
    BigMUpper(usize),
    BigMLower(usize),
    SwitchCurrent(usize),
    ChargeLimit(usize),
    DischargeLimit(usize),
    ChgDchgExclusive(usize),
    EnergyBalance(usize),
    ClosedCount,
    ConnBalance(usize),
    ConnCapUpper(usize),
    ConnCapLower(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowRef {
    pub kind: RowKind,
    pub hour: usize,
}

/// One rotated cone `p^2 + q^2 <= i_sq * v_sq`, tied to a branch-hour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RotatedCone {
    pub p: usize,
    pub q: usize,
    pub i_sq: usize,
    pub v_sq: usize,
    pub branch: usize,
    pub hour: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqRow {
    /// (variable index, coefficient), sorted by index, duplicates merged.
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug)]
pub struct ProgramCore {
    pub n_vars: usize,
    pub objective: Vec<f64>,
    pub eq_rows: Vec<EqRow>,
    pub row_meta: Vec<RowRef>,
    pub cones: Vec<RotatedCone>,
}

/// Immutable conic program. `fix_binaries` derives copies that share the
/// equality system and cones, so node subproblems are cheap to spawn.
#[derive(Debug, Clone)]
pub struct ConicProgram {
    core: Arc<ProgramCore>,
    bounds: Vec<(f64, f64)>,
    binaries: Vec<usize>,
}

impl ConicProgram {
    pub fn new(core: ProgramCore, bounds: Vec<(f64, f64)>, binaries: Vec<usize>) -> Self {
        debug_assert_eq!(core.n_vars, bounds.len());
        debug_assert_eq!(core.eq_rows.len(), core.row_meta.len());
        ConicProgram { core: Arc::new(core), bounds, binaries }
    }

    pub fn n_vars(&self) -> usize {
        self.core.n_vars
    }

    pub fn objective(&self) -> &[f64] {
        &self.core.objective
    }

    pub fn eq_rows(&self) -> &[EqRow] {
        &self.core.eq_rows
    }

    pub fn row_meta(&self) -> &[RowRef] {
        &self.core.row_meta
    }

    pub fn cones(&self) -> &[RotatedCone] {
        &self.core.cones
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn binaries(&self) -> &[usize] {
        &self.binaries
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.core.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Collapse the boxes of the given binaries and drop them from the
    /// integrality set.
    pub fn fix_binaries(&self, assignment: &[(usize, bool)]) -> Result<ConicProgram, ProgramError> {
        let mut bounds = self.bounds.clone();
        let mut fixed = vec![false; self.core.n_vars];
        for &(idx, val) in assignment {
            if !self.binaries.contains(&idx) {
                return Err(ProgramError::NotBinary(idx));
            }
            let v = if val { 1.0 } else { 0.0 };
            bounds[idx] = (v, v);
            fixed[idx] = true;
        }
        let binaries = self.binaries.iter().copied().filter(|&i| !fixed[i]).collect();
        Ok(ConicProgram { core: Arc::clone(&self.core), bounds, binaries })
    }

    /// Documented JSON form for cross-implementation diffing: objective,
    /// triplet equalities, boxes, cone index lists and the integrality set.
    pub fn to_debug_json(&self) -> serde_json::Value {
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for (r, row) in self.core.eq_rows.iter().enumerate() {
            for &(c, v) in &row.coeffs {
                rows.push(r);
                cols.push(c);
                vals.push(v);
            }
        }
        json!({
            "n_vars": self.core.n_vars,
            "objective": self.core.objective,
            "equalities": {
                "rows": rows,
                "cols": cols,
                "values": vals,
                "rhs": self.core.eq_rows.iter().map(|r| r.rhs).collect::<Vec<_>>(),
            },
            "bounds": {
                "lower": self.bounds.iter().map(|b| b.0).collect::<Vec<_>>(),
                "upper": self.bounds.iter().map(|b| b.1).collect::<Vec<_>>(),
            },
            "rotated_cones": self.core.cones.iter()
                .map(|c| json!([c.p, c.q, c.i_sq, c.v_sq]))
                .collect::<Vec<_>>(),
            "binaries": self.binaries,
        })
    }
}

/// Bijective lookup between `(quantity, hour)` and variable indices.
#[derive(Debug, Clone, Default)]
pub struct VariableMap {
    metas: Vec<VarRef>,
    index: BTreeMap<VarRef, usize>,
}

impl VariableMap {
    pub fn push(&mut self, quantity: Quantity, hour: usize) -> usize {
        let r = VarRef { quantity, hour };
        let idx = self.metas.len();
        let prior = self.index.insert(r, idx);
        debug_assert!(prior.is_none(), "duplicate variable {r:?}");
        self.metas.push(r);
        idx
    }

    pub fn len(&self) -> usize {
        self.metas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metas.is_empty()
    }

    pub fn get(&self, quantity: Quantity, hour: usize) -> Option<usize> {
        self.index.get(&VarRef { quantity, hour }).copied()
    }

    /// Index of a quantity that the construction guarantees to exist.
    pub fn expect(&self, quantity: Quantity, hour: usize) -> usize {
        self.get(quantity, hour)
            .unwrap_or_else(|| panic!("variable {quantity:?}@{hour} not in map"))
    }

    pub fn meta(&self, idx: usize) -> VarRef {
        self.metas[idx]
    }

    pub fn metas(&self) -> &[VarRef] {
        &self.metas
    }

    /// Human-readable variable label for diagnostics.
    pub fn label(&self, idx: usize) -> String {
        let m = self.metas[idx];
        format!("{:?}@h{}", m.quantity, m.hour)
    }
}
