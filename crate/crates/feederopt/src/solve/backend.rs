//! Pluggable continuous conic backend.
//!
//! A backend consumes the canonical program with integrality ignored and
//! returns a primal vector. Backends are registered by name and selected by
//! configuration key; `clarabel` is the built-in default. Results are
//! re-checked independently before anything downstream trusts them.

use crate::model::ConicProgram;
use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("unknown backend `{0}`")]
    UnknownBackend(String),
    #[error("backend `{backend}` lacks capability: {missing}")]
    Capability { backend: String, missing: String },
    #[error("backend failure: {0}")]
    Backend(String),
    #[error("no integral solution within limits")]
    NoIncumbent,
}

#[derive(Debug, Clone, Copy)]
pub struct BackendCaps {
    pub rotated_cones: bool,
    pub free_variables: bool,
    pub equalities: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelaxStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

/// Result of one continuous relaxation solve.
#[derive(Debug, Clone)]
pub struct RelaxResult {
    pub status: RelaxStatus,
    pub objective: f64,
    pub primal: Vec<f64>,
    /// Worst violation over equalities, boxes and cones, filled in by the
    /// independent re-check (not by the backend).
    pub max_violation: f64,
    pub iterations: u32,
}

/// Solve accuracy knobs the mixed-integer layer may request.
#[derive(Debug, Clone, Copy, Default)]
pub struct BackendTuning {
    /// Tighten feasibility/gap tolerances for final polish solves.
    pub tight: bool,
}

pub trait ConicBackend: Send + Sync {
    fn name(&self) -> &'static str;
    fn caps(&self) -> BackendCaps;
    fn solve(&self, program: &ConicProgram, tuning: BackendTuning) -> Result<RelaxResult, SolveError>;
}

/// Interior-point backend over the Clarabel solver.
///
/// Canonical-form translation: equality rows and collapsed boxes enter a zero
/// cone, finite box sides enter a nonnegative cone, and each rotated cone
/// `p^2 + q^2 <= i v` becomes the 4-dimensional second-order cone
/// `(i + v, 2p, 2q, i - v)`.
pub struct ClarabelBackend;

impl ConicBackend for ClarabelBackend {
    fn name(&self) -> &'static str {
        "clarabel"
    }

    fn caps(&self) -> BackendCaps {
        BackendCaps { rotated_cones: true, free_variables: true, equalities: true }
    }

    fn solve(&self, program: &ConicProgram, tuning: BackendTuning) -> Result<RelaxResult, SolveError> {
        let n = program.n_vars();

        // rows are assembled in cone-block order: zero cone first, then the
        // nonnegative block, then the SOC blocks
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut rhs: Vec<f64> = Vec::new();
        let mut cones: Vec<SupportedConeT<f64>> = Vec::new();

        let mut n_zero = 0usize;
        for row in program.eq_rows() {
            let r = rhs.len();
            for &(c, v) in &row.coeffs {
                cols[c].push((r, v));
            }
            rhs.push(row.rhs);
            n_zero += 1;
        }
        for (i, &(lo, hi)) in program.bounds().iter().enumerate() {
            if lo == hi {
                let r = rhs.len();
                cols[i].push((r, 1.0));
                rhs.push(lo);
                n_zero += 1;
            }
        }
        if n_zero > 0 {
            cones.push(SupportedConeT::ZeroConeT(n_zero));
        }

        let mut n_nonneg = 0usize;
        for (i, &(lo, hi)) in program.bounds().iter().enumerate() {
            if lo == hi {
                continue;
            }
            if hi.is_finite() {
                let r = rhs.len();
                cols[i].push((r, 1.0));
                rhs.push(hi);
                n_nonneg += 1;
            }
            if lo.is_finite() {
                let r = rhs.len();
                cols[i].push((r, -1.0));
                rhs.push(-lo);
                n_nonneg += 1;
            }
        }
        if n_nonneg > 0 {
            cones.push(SupportedConeT::NonnegativeConeT(n_nonneg));
        }

        for cone in program.cones() {
            let r = rhs.len();
            // s0 = i + v, s1 = 2p, s2 = 2q, s3 = i - v, all with b = 0
            cols[cone.i_sq].push((r, -1.0));
            cols[cone.v_sq].push((r, -1.0));
            cols[cone.p].push((r + 1, -2.0));
            cols[cone.q].push((r + 2, -2.0));
            cols[cone.i_sq].push((r + 3, -1.0));
            cols[cone.v_sq].push((r + 3, 1.0));
            rhs.extend_from_slice(&[0.0, 0.0, 0.0, 0.0]);
            cones.push(SupportedConeT::SecondOrderConeT(4));
        }

        let m = rhs.len();
        let mut colptr = Vec::with_capacity(n + 1);
        let mut rowval = Vec::new();
        let mut nzval = Vec::new();
        colptr.push(0);
        for c in cols.iter_mut() {
            c.sort_by_key(|&(r, _)| r);
            for &(r, v) in c.iter() {
                rowval.push(r);
                nzval.push(v);
            }
            colptr.push(rowval.len());
        }
        let a = CscMatrix::new(m, n, colptr, rowval, nzval);
        let p = CscMatrix::<f64>::zeros((n, n));
        let q = program.objective().to_vec();

        let mut builder = DefaultSettingsBuilder::<f64>::default();
        builder.verbose(false).max_iter(200);
        if tuning.tight {
            builder
                .max_iter(500)
                .tol_gap_abs(1e-11)
                .tol_gap_rel(1e-11)
                .tol_feas(1e-11);
        }
        let settings = builder.build().map_err(|e| SolveError::Backend(e.to_string()))?;

        let mut solver = DefaultSolver::new(&p, &q, &a, &rhs, &cones, settings)
            .map_err(|e| SolveError::Backend(format!("{e:?}")))?;
        solver.solve();

        let sol = &solver.solution;
        let status = match sol.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => RelaxStatus::Optimal,
            SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
                RelaxStatus::Infeasible
            }
            SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => {
                RelaxStatus::Unbounded
            }
            _ => RelaxStatus::NumericalFailure,
        };
        Ok(RelaxResult {
            status,
            objective: sol.obj_val,
            primal: sol.x.clone(),
            max_violation: f64::NAN,
            iterations: sol.iterations,
        })
    }
}

/// Named-adapter registry for backend selection.
pub struct BackendRegistry {
    backends: BTreeMap<String, Arc<dyn ConicBackend>>,
}

impl BackendRegistry {
    pub fn empty() -> Self {
        BackendRegistry { backends: BTreeMap::new() }
    }

    pub fn register(&mut self, backend: Arc<dyn ConicBackend>) {
        self.backends.insert(backend.name().to_string(), backend);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn ConicBackend>, SolveError> {
        self.backends
            .get(name)
            .cloned()
            .ok_or_else(|| SolveError::UnknownBackend(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.backends.keys().map(|s| s.as_str()).collect()
    }
}

impl Default for BackendRegistry {
    fn default() -> Self {
        let mut r = BackendRegistry::empty();
        r.register(Arc::new(ClarabelBackend));
        r
    }
}

/// Reject programs a backend cannot represent.
pub fn check_capabilities(
    backend: &dyn ConicBackend,
    program: &ConicProgram,
) -> Result<(), SolveError> {
    let caps = backend.caps();
    if !program.cones().is_empty() && !caps.rotated_cones {
        return Err(SolveError::Capability {
            backend: backend.name().to_string(),
            missing: "rotated second-order cones".into(),
        });
    }
    if !program.eq_rows().is_empty() && !caps.equalities {
        return Err(SolveError::Capability {
            backend: backend.name().to_string(),
            missing: "linear equalities".into(),
        });
    }
    let has_free = program.bounds().iter().any(|b| b.0.is_infinite() && b.1.is_infinite());
    if has_free && !caps.free_variables {
        return Err(SolveError::Capability {
            backend: backend.name().to_string(),
            missing: "free variables".into(),
        });
    }
    Ok(())
}
