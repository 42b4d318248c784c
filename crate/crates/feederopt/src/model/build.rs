//! Program construction.
//!
//! Per hour the program carries nodal balance with series-loss terms,
//! injection definitions with the affine ZIP surrogate, voltage-drop
//! equalities (big-M disjunctions on switchable branches so the drop never
//! binds across an open branch), one rotated cone per branch, operating
//! boxes, PV curtailment, and storage dynamics. Per topology period it
//! carries the closed-branch counting constraint and a single-commodity
//! connectivity flow that rules out islanded loops the counting constraint
//! alone would admit. General inequalities enter as equalities with
//! non-negative slacks.

use super::program::*;
use super::{ModelError, ScenarioConfig, TopologyMode};
use crate::case::{BusKind, NetworkCase};
use crate::zip::{linearize_zip_in_vsq, AffineLoadInVsq};

#[derive(Debug, Clone, PartialEq)]
pub struct ModelOptions {
    /// Absolute hours to include; `None` means the whole horizon. Storage
    /// dynamics chain consecutive entries of the selection.
    pub hours: Option<Vec<usize>>,
    /// Voltage-band factor used to place the ZIP linearization; `None` uses
    /// the scenario's own cvr factor. Comparisons across scenarios should fix
    /// one value so every scenario optimizes the same load surrogate.
    pub lin_band_theta: Option<f64>,
    /// Capacity of the fictitious connectivity commodity; `None` uses the
    /// bus count.
    pub conn_capacity: Option<f64>,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions { hours: None, lin_band_theta: None, conn_capacity: None }
    }
}

impl ModelOptions {
    pub fn single_hour(hour: usize) -> Self {
        ModelOptions { hours: Some(vec![hour]), ..Default::default() }
    }

    pub fn with_lin_theta(mut self, theta: f64) -> Self {
        self.lin_band_theta = Some(theta);
        self
    }
}

/// A compiled program plus the bookkeeping required to interpret it.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub program: ConicProgram,
    pub varmap: VariableMap,
    /// Absolute hours covered, in order.
    pub hours: Vec<usize>,
    /// Representative hour label of each topology period.
    pub period_repr: Vec<usize>,
    /// Topology period of each entry in `hours`.
    pub hour_period: Vec<usize>,
    /// Affine ZIP surrogate per bus (active, reactive), at the band used.
    pub affine_p: Vec<AffineLoadInVsq>,
    pub affine_q: Vec<AffineLoadInVsq>,
    pub warnings: Vec<String>,
}

impl BuiltModel {
    /// Hour label under which a switch/connectivity variable is registered
    /// for the given absolute hour.
    pub fn switch_hour(&self, hour: usize) -> usize {
        let pos = self.hours.iter().position(|&h| h == hour).expect("hour not in model");
        self.period_repr[self.hour_period[pos]]
    }

    /// Closed/open state per branch at an hour, read from a primal vector.
    /// Non-switchable branches are always closed.
    pub fn closed_set(&self, case: &NetworkCase, raw: &[f64], hour: usize) -> Vec<bool> {
        let sh = self.switch_hour(hour);
        case.branches
            .iter()
            .enumerate()
            .map(|(e, br)| {
                if !br.switchable {
                    true
                } else {
                    let idx = self.varmap.expect(Quantity::Switch(e), sh);
                    raw[idx] > 0.5
                }
            })
            .collect()
    }
}

struct Builder {
    varmap: VariableMap,
    bounds: Vec<(f64, f64)>,
    rows: Vec<EqRow>,
    row_meta: Vec<RowRef>,
    cones: Vec<RotatedCone>,
    binaries: Vec<usize>,
    n_slack: usize,
}

impl Builder {
    fn new() -> Self {
        Builder {
            varmap: VariableMap::default(),
            bounds: Vec::new(),
            rows: Vec::new(),
            row_meta: Vec::new(),
            cones: Vec::new(),
            binaries: Vec::new(),
            n_slack: 0,
        }
    }

    fn var(&mut self, q: Quantity, hour: usize, lo: f64, hi: f64) -> usize {
        let idx = self.varmap.push(q, hour);
        self.bounds.push((lo, hi));
        idx
    }

    fn binary(&mut self, q: Quantity, hour: usize) -> usize {
        let idx = self.var(q, hour, 0.0, 1.0);
        self.binaries.push(idx);
        idx
    }

    /// Fixed binary: box collapsed, not in the integrality set.
    fn fixed_binary(&mut self, q: Quantity, hour: usize, value: bool) -> usize {
        let v = if value { 1.0 } else { 0.0 };
        self.var(q, hour, v, v)
    }

    fn eq(&mut self, kind: RowKind, hour: usize, coeffs: Vec<(usize, f64)>, rhs: f64) {
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        let mut sorted = coeffs;
        sorted.sort_by_key(|&(i, _)| i);
        for (i, v) in sorted {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += v,
                _ => merged.push((i, v)),
            }
        }
        self.rows.push(EqRow { coeffs: merged, rhs });
        self.row_meta.push(RowRef { kind, hour });
    }

    /// `sum coeffs <= rhs` via a non-negative slack.
    fn leq(&mut self, kind: RowKind, hour: usize, mut coeffs: Vec<(usize, f64)>, rhs: f64) {
        let s = self.var(Quantity::Slack(self.n_slack), hour, 0.0, f64::INFINITY);
        self.n_slack += 1;
        coeffs.push((s, 1.0));
        self.eq(kind, hour, coeffs, rhs);
    }
}

/// Compile a case and scenario into the canonical conic program.
pub fn build_model(
    case: &NetworkCase,
    config: &ScenarioConfig,
    options: &ModelOptions,
) -> Result<BuiltModel, ModelError> {
    let hours: Vec<usize> = match &options.hours {
        Some(hs) => hs.clone(),
        None => (0..case.horizon).collect(),
    };
    if hours.is_empty() {
        return Err(ModelError::NoHours);
    }
    if let Some(&h) = hours.iter().find(|&&h| h >= case.horizon) {
        return Err(ModelError::BadHour(h));
    }

    let theta = config.cvr_factor;
    let lin_theta = options.lin_band_theta.unwrap_or(theta);
    if !(0.0..=super::CVR_FACTOR_MAX).contains(&lin_theta) {
        return Err(ModelError::BadCvrFactor(lin_theta));
    }

    let n = case.n_buses();
    let subs = case.substations();
    let der = config.der_enabled;
    let any_switchable = case.branches.iter().any(|b| b.switchable);
    let reconfig = config.scenario.reconfiguration() && any_switchable;

    // topology periods: hourly reconfiguration gets one per hour, everything
    // else shares a single period
    let (period_repr, hour_period): (Vec<usize>, Vec<usize>) =
        if any_switchable && config.topology_mode == TopologyMode::Hourly {
            (hours.clone(), (0..hours.len()).collect())
        } else {
            (vec![hours[0]], vec![0; hours.len()])
        };

    let mut warnings = Vec::new();

    // affine ZIP surrogates over each bus's CVR-feasible voltage band
    let mut affine_p = Vec::with_capacity(n);
    let mut affine_q = Vec::with_capacity(n);
    for i in 0..n {
        let b = &case.buses[i];
        let zip = config.load_model.zip_for(case, i);
        let lo = (1.0 - lin_theta).sqrt() * b.v_min;
        let hi = b.v_max;
        let ap = linearize_zip_in_vsq(zip.active, case.v_rated, lo, hi)
            .map_err(|e| ModelError::Extraction(format!("bus {}: {e}", b.id)))?;
        let aq = linearize_zip_in_vsq(zip.reactive, case.v_rated, lo, hi)
            .map_err(|e| ModelError::Extraction(format!("bus {}: {e}", b.id)))?;
        affine_p.push(ap);
        affine_q.push(aq);
    }

    let mut b = Builder::new();

    // squared voltage boxes
    let v_box = |bus: usize| -> (f64, f64) {
        let spec = &case.buses[bus];
        match spec.kind {
            BusKind::Substation => {
                let set = spec.v_set.expect("validated substation has a setpoint");
                if config.scenario.cvr() {
                    // CVR actuation: the substation may be driven below its
                    // setpoint, never above it
                    ((1.0 - theta) * set * set, set * set)
                } else {
                    (set * set, set * set)
                }
            }
            _ => ((1.0 - theta) * spec.v_min * spec.v_min, spec.v_max * spec.v_max),
        }
    };

    // per-hour variables
    for &h in &hours {
        for i in 0..n {
            let (lo, hi) = v_box(i);
            b.var(Quantity::VSq(i), h, lo, hi);
        }
        for (e, br) in case.branches.iter().enumerate() {
            b.var(Quantity::ISq(e), h, 0.0, br.i_max * br.i_max);
        }
        for (e, br) in case.branches.iter().enumerate() {
            let cap = br.i_max * case.buses[br.from].v_max;
            b.var(Quantity::PFlow(e), h, -cap, cap);
            b.var(Quantity::QFlow(e), h, -cap, cap);
        }
        for (k, _) in subs.iter().enumerate() {
            b.var(Quantity::PSub(k), h, f64::NEG_INFINITY, f64::INFINITY);
            b.var(Quantity::QSub(k), h, f64::NEG_INFINITY, f64::INFINITY);
        }
        for i in 0..n {
            b.var(Quantity::PInj(i), h, f64::NEG_INFINITY, f64::INFINITY);
            b.var(Quantity::QInj(i), h, f64::NEG_INFINITY, f64::INFINITY);
        }
        if der {
            let hpos = hours.iter().position(|&x| x == h).unwrap();
            for (p, pv) in case.pv_units.iter().enumerate() {
                let avail = pv.availability[h];
                b.var(Quantity::PPv(p), h, avail, avail);
                b.var(Quantity::PCurt(p), h, 0.0, avail);
            }
            for (k, bat) in case.batteries.iter().enumerate() {
                b.var(Quantity::PChg(k), h, 0.0, bat.charge_rate());
                b.var(Quantity::PDchg(k), h, 0.0, bat.discharge_rate());
                b.var(Quantity::QChg(k), h, 0.0, bat.q_rating);
                b.var(Quantity::QDchg(k), h, 0.0, bat.q_rating);
                let last = hpos + 1 == hours.len();
                let (mut lo, mut hi) = (bat.soc_min * bat.e_cap, bat.soc_max * bat.e_cap);
                if last {
                    // the horizon must end where it started
                    lo = bat.e_init;
                    hi = bat.e_init;
                }
                b.var(Quantity::Energy(k), h, lo, hi);
            }
            for (g, gen) in case.generators.iter().enumerate() {
                b.var(Quantity::PGen(g), h, gen.p_min, gen.p_max);
                b.var(Quantity::QGen(g), h, gen.q_min, gen.q_max);
            }
        }
    }

    // per-period switch and connectivity variables
    let n_fixed_closed = case.branches.iter().filter(|br| !br.switchable).count();
    for &ph in &period_repr {
        for (e, br) in case.branches.iter().enumerate() {
            if !br.switchable {
                continue;
            }
            if reconfig {
                b.binary(Quantity::Switch(e), ph);
            } else {
                b.fixed_binary(Quantity::Switch(e), ph, br.initially_closed);
            }
        }
        if any_switchable {
            let cap = options.conn_capacity.unwrap_or(n as f64);
            for (e, _) in case.branches.iter().enumerate() {
                b.var(Quantity::ConnFlow(e), ph, -cap, cap);
            }
        }
    }

    // rows per hour
    for &h in &hours {
        let vsq = |bb: &Builder, i: usize| bb.varmap.expect(Quantity::VSq(i), h);

        // nodal balance
        for i in 0..n {
            let mut cp = vec![(b.varmap.expect(Quantity::PInj(i), h), 1.0)];
            let mut cq = vec![(b.varmap.expect(Quantity::QInj(i), h), 1.0)];
            for (e, br) in case.branches.iter().enumerate() {
                let pe = b.varmap.expect(Quantity::PFlow(e), h);
                let qe = b.varmap.expect(Quantity::QFlow(e), h);
                let ie = b.varmap.expect(Quantity::ISq(e), h);
                if br.to == i {
                    cp.push((pe, 1.0));
                    cp.push((ie, -br.r));
                    cq.push((qe, 1.0));
                    cq.push((ie, -br.x));
                }
                if br.from == i {
                    cp.push((pe, -1.0));
                    cq.push((qe, -1.0));
                }
            }
            b.eq(RowKind::BalanceP(i), h, cp, 0.0);
            b.eq(RowKind::BalanceQ(i), h, cq, 0.0);
        }

        // injection definitions with the affine ZIP surrogate
        for i in 0..n {
            let (pd, qd) = case.demand_at(i, h);
            let mut cp = vec![
                (b.varmap.expect(Quantity::PInj(i), h), 1.0),
                (vsq(&b, i), pd * affine_p[i].slope),
            ];
            let mut cq = vec![
                (b.varmap.expect(Quantity::QInj(i), h), 1.0),
                (vsq(&b, i), qd * affine_q[i].slope),
            ];
            for (k, &s) in subs.iter().enumerate() {
                if s == i {
                    cp.push((b.varmap.expect(Quantity::PSub(k), h), -1.0));
                    cq.push((b.varmap.expect(Quantity::QSub(k), h), -1.0));
                }
            }
            if der {
                for (p, pv) in case.pv_units.iter().enumerate() {
                    if pv.bus == i {
                        cp.push((b.varmap.expect(Quantity::PPv(p), h), -1.0));
                        cp.push((b.varmap.expect(Quantity::PCurt(p), h), 1.0));
                    }
                }
                for (k, bat) in case.batteries.iter().enumerate() {
                    if bat.bus == i {
                        cp.push((b.varmap.expect(Quantity::PDchg(k), h), -1.0));
                        cp.push((b.varmap.expect(Quantity::PChg(k), h), 1.0));
                        cq.push((b.varmap.expect(Quantity::QDchg(k), h), -1.0));
                        cq.push((b.varmap.expect(Quantity::QChg(k), h), 1.0));
                    }
                }
                for (g, gen) in case.generators.iter().enumerate() {
                    if gen.bus == i {
                        cp.push((b.varmap.expect(Quantity::PGen(g), h), -1.0));
                        cq.push((b.varmap.expect(Quantity::QGen(g), h), -1.0));
                    }
                }
            }
            b.eq(RowKind::InjDefP(i), h, cp, -pd * affine_p[i].intercept);
            b.eq(RowKind::InjDefQ(i), h, cq, -qd * affine_q[i].intercept);
        }

        // voltage drop, switch-current coupling, cones
        let sh = period_repr[hour_period[hours.iter().position(|&x| x == h).unwrap()]];
        for (e, br) in case.branches.iter().enumerate() {
            let pe = b.varmap.expect(Quantity::PFlow(e), h);
            let qe = b.varmap.expect(Quantity::QFlow(e), h);
            let ie = b.varmap.expect(Quantity::ISq(e), h);
            let vi = vsq(&b, br.from);
            let vj = vsq(&b, br.to);
            let z2 = br.r * br.r + br.x * br.x;
            let drop = vec![
                (vi, 1.0),
                (vj, -1.0),
                (pe, -2.0 * br.r),
                (qe, -2.0 * br.x),
                (ie, z2),
            ];
            if br.switchable {
                let j = b.varmap.expect(Quantity::Switch(e), sh);
                // smallest valid deactivation constant from the boxes
                let (lo_i, hi_i) = b.bounds[vi];
                let (lo_j, hi_j) = b.bounds[vj];
                let (pcap, qcap) = (b.bounds[pe].1, b.bounds[qe].1);
                let m = (hi_i - lo_j).max(hi_j - lo_i)
                    + 2.0 * (br.r * pcap + br.x * qcap)
                    + z2 * br.i_max * br.i_max;
                let mut up = drop.clone();
                up.push((j, m));
                b.leq(RowKind::BigMUpper(e), h, up, m);
                let mut dn: Vec<(usize, f64)> = drop.iter().map(|&(i, c)| (i, -c)).collect();
                dn.push((j, m));
                b.leq(RowKind::BigMLower(e), h, dn, m);
                // current released only when closed
                b.leq(
                    RowKind::SwitchCurrent(e),
                    h,
                    vec![(ie, 1.0), (j, -br.i_max * br.i_max)],
                    0.0,
                );
            } else {
                b.eq(RowKind::VoltDrop(e), h, drop, 0.0);
            }
            b.cones.push(RotatedCone { p: pe, q: qe, i_sq: ie, v_sq: vi, branch: e, hour: h });
        }

        // storage
        if der {
            let hpos = hours.iter().position(|&x| x == h).unwrap();
            for (k, bat) in case.batteries.iter().enumerate() {
                let c = b.varmap.get(Quantity::ChgInd(k), h);
                let (c, d) = match c {
                    Some(c) => (c, b.varmap.expect(Quantity::DchgInd(k), h)),
                    None => {
                        let c = b.binary(Quantity::ChgInd(k), h);
                        let d = b.binary(Quantity::DchgInd(k), h);
                        (c, d)
                    }
                };
                let chg = b.varmap.expect(Quantity::PChg(k), h);
                let dchg = b.varmap.expect(Quantity::PDchg(k), h);
                let ene = b.varmap.expect(Quantity::Energy(k), h);
                b.leq(RowKind::ChargeLimit(k), h, vec![(chg, 1.0), (c, -bat.charge_rate())], 0.0);
                b.leq(
                    RowKind::DischargeLimit(k),
                    h,
                    vec![(dchg, 1.0), (d, -bat.discharge_rate())],
                    0.0,
                );
                b.leq(RowKind::ChgDchgExclusive(k), h, vec![(c, 1.0), (d, 1.0)], 1.0);
                let mut bal = vec![
                    (ene, 1.0),
                    (chg, -bat.eta_chg),
                    (dchg, 1.0 / bat.eta_dchg),
                ];
                let rhs = if hpos == 0 {
                    bat.e_init
                } else {
                    let prev = b.varmap.expect(Quantity::Energy(k), hours[hpos - 1]);
                    bal.push((prev, -1.0));
                    0.0
                };
                b.eq(RowKind::EnergyBalance(k), h, bal, rhs);
            }
        }
    }

    // per-period counting and connectivity
    let want_closed_switchable =
        (n as i64 - subs.len() as i64) - n_fixed_closed as i64;
    if any_switchable && want_closed_switchable < 0 {
        warnings.push(format!(
            "fixed closed branches ({n_fixed_closed}) already exceed the radial budget; \
             the counting constraint is infeasible by construction"
        ));
    }
    for (p, &ph) in period_repr.iter().enumerate() {
        let _ = p;
        if !any_switchable {
            continue;
        }
        let coeffs: Vec<(usize, f64)> = case
            .branches
            .iter()
            .enumerate()
            .filter(|(_, br)| br.switchable)
            .map(|(e, _)| (b.varmap.expect(Quantity::Switch(e), ph), 1.0))
            .collect();
        b.eq(RowKind::ClosedCount, ph, coeffs, want_closed_switchable as f64);

        // one fictitious unit consumed per non-substation bus
        let cap = options.conn_capacity.unwrap_or(n as f64);
        for i in 0..n {
            if case.buses[i].kind == BusKind::Substation {
                continue;
            }
            let mut c = Vec::new();
            for (e, br) in case.branches.iter().enumerate() {
                let f = b.varmap.expect(Quantity::ConnFlow(e), ph);
                if br.to == i {
                    c.push((f, 1.0));
                }
                if br.from == i {
                    c.push((f, -1.0));
                }
            }
            b.eq(RowKind::ConnBalance(i), ph, c, 1.0);
        }
        for (e, br) in case.branches.iter().enumerate() {
            if !br.switchable {
                continue;
            }
            let f = b.varmap.expect(Quantity::ConnFlow(e), ph);
            let j = b.varmap.expect(Quantity::Switch(e), ph);
            b.leq(RowKind::ConnCapUpper(e), ph, vec![(f, 1.0), (j, -cap)], 0.0);
            b.leq(RowKind::ConnCapLower(e), ph, vec![(f, -1.0), (j, -cap)], 0.0);
        }
    }

    // substation setpoint must be reachable given bus bounds on a
    // zero-impedance path is a deeper check; flag the direct contradiction
    for &s in &subs {
        let set = case.buses[s].v_set.unwrap_or(1.0);
        for br in &case.branches {
            if (br.from == s || br.to == s) && br.r == 0.0 && br.x == 0.0 {
                let other = if br.from == s { br.to } else { br.from };
                if case.buses[other].v_min > set && !br.switchable {
                    warnings.push(format!(
                        "bus {} requires v_min {} above the substation setpoint {} over a \
                         zero-impedance branch {}",
                        case.buses[other].id, case.buses[other].v_min, set, br.id
                    ));
                }
            }
        }
    }

    // objective: sum of r * I_sq
    let mut objective = vec![0.0; b.varmap.len()];
    for &h in &hours {
        for (e, br) in case.branches.iter().enumerate() {
            objective[b.varmap.expect(Quantity::ISq(e), h)] = br.r;
        }
    }

    let core = ProgramCore {
        n_vars: b.varmap.len(),
        objective,
        eq_rows: b.rows,
        row_meta: b.row_meta,
        cones: b.cones,
    };
    let program = ConicProgram::new(core, b.bounds, b.binaries);
    Ok(BuiltModel {
        program,
        varmap: b.varmap,
        hours,
        period_repr,
        hour_period,
        affine_p,
        affine_q,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::builtin_case;
    use crate::model::{LoadModel, Scenario, ScenarioConfig};
    use crate::testutil::two_bus_case;

    fn cfg(s: Scenario, theta: f64) -> ScenarioConfig {
        ScenarioConfig::new(s, theta, TopologyMode::Hourly, false, LoadModel::Cp).unwrap()
    }

    #[test]
    fn two_bus_variable_census() {
        let case = two_bus_case();
        let m = build_model(&case, &cfg(Scenario::Sdn, 0.0), &ModelOptions::default()).unwrap();
        // V x2, I, P, Q, Psub, Qsub, Pinj x2, Qinj x2 = 11 and one cone
        assert_eq!(m.program.n_vars(), 11);
        assert_eq!(m.program.cones().len(), 1);
        assert!(m.program.binaries().is_empty());
        assert!(m.warnings.is_empty());
    }

    #[test]
    fn sdn_has_empty_integrality_set() {
        let case = builtin_case("ieee33").unwrap();
        let m = build_model(&case, &cfg(Scenario::Sdn, 0.0), &ModelOptions::default()).unwrap();
        assert!(m.program.binaries().is_empty());
    }

    #[test]
    fn cedntr_single_hour_counts() {
        let case = builtin_case("ieee33").unwrap();
        let m = build_model(
            &case,
            &cfg(Scenario::Cedntr, 0.05),
            &ModelOptions::single_hour(0),
        )
        .unwrap();
        assert_eq!(m.program.binaries().len(), 37);
        assert_eq!(m.program.cones().len(), 37);
        let count_row = m
            .program
            .row_meta()
            .iter()
            .position(|r| r.kind == RowKind::ClosedCount)
            .expect("counting row");
        assert_eq!(m.program.eq_rows()[count_row].rhs, 32.0);
    }

    #[test]
    fn fixing_switches_reproduces_cedn() {
        let case = builtin_case("ieee33").unwrap();
        let opts = ModelOptions::single_hour(0);
        let tr = build_model(&case, &cfg(Scenario::Cedntr, 0.05), &opts).unwrap();
        let base = build_model(&case, &cfg(Scenario::Cedn, 0.05), &opts).unwrap();

        let assignment: Vec<(usize, bool)> = case
            .branches
            .iter()
            .enumerate()
            .filter(|(_, br)| br.switchable)
            .map(|(e, br)| {
                (tr.varmap.expect(Quantity::Switch(e), 0), br.initially_closed)
            })
            .collect();
        let fixed = tr.program.fix_binaries(&assignment).unwrap();

        assert_eq!(fixed.n_vars(), base.program.n_vars());
        assert_eq!(fixed.bounds(), base.program.bounds());
        assert_eq!(fixed.eq_rows(), base.program.eq_rows());
        assert_eq!(fixed.binaries(), base.program.binaries());
        assert_eq!(fixed.objective(), base.program.objective());
    }

    #[test]
    fn empty_assignment_is_identity() {
        let case = builtin_case("ieee33").unwrap();
        let m =
            build_model(&case, &cfg(Scenario::Sdntr, 0.0), &ModelOptions::single_hour(0)).unwrap();
        let same = m.program.fix_binaries(&[]).unwrap();
        assert_eq!(same.bounds(), m.program.bounds());
        assert_eq!(same.binaries(), m.program.binaries());
    }

    #[test]
    fn fixing_a_non_binary_errors() {
        let case = builtin_case("ieee33").unwrap();
        let m =
            build_model(&case, &cfg(Scenario::Sdntr, 0.0), &ModelOptions::single_hour(0)).unwrap();
        let cone_var = m.program.cones()[0].i_sq;
        assert!(m.program.fix_binaries(&[(cone_var, true)]).is_err());
    }

    #[test]
    fn static_mode_shares_switch_variables() {
        let case = builtin_case("ieee33").unwrap();
        let config =
            ScenarioConfig::new(Scenario::Sdntr, 0.0, TopologyMode::Static, false, LoadModel::Cp)
                .unwrap();
        let opts = ModelOptions { hours: Some(vec![3, 4, 5]), ..Default::default() };
        let m = build_model(&case, &config, &opts).unwrap();
        assert_eq!(m.program.binaries().len(), 37);
        assert_eq!(m.period_repr, vec![3]);
        assert_eq!(m.switch_hour(5), 3);
    }
}
