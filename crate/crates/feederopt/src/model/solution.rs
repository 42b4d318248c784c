//! Recovery of physical per-hour solutions from raw primal vectors.

use super::build::BuiltModel;
use super::program::Quantity;
use super::ModelError;
use crate::case::NetworkCase;
use crate::oracle::FixedInjections;

const VSQ_NEGATIVE_TOL: f64 = -1e-9;

/// Physical solution for one hour.
#[derive(Debug, Clone)]
pub struct HourFrame {
    pub hour: usize,
    /// Voltage magnitudes per bus (p.u.).
    pub v: Vec<f64>,
    pub v_sq: Vec<f64>,
    /// Squared current per branch; zero on open branches.
    pub i_sq: Vec<f64>,
    pub p_flow: Vec<f64>,
    pub q_flow: Vec<f64>,
    /// Closed state per branch.
    pub closed: Vec<bool>,
    /// Substation net injections, aligned with `case.substations()`.
    pub p_sub: Vec<f64>,
    pub q_sub: Vec<f64>,
    /// Realized PV and curtailment per unit (empty when DERs are disabled).
    pub pv_p: Vec<f64>,
    pub pv_curt: Vec<f64>,
    pub bat_chg: Vec<f64>,
    pub bat_dchg: Vec<f64>,
    pub bat_q_chg: Vec<f64>,
    pub bat_q_dchg: Vec<f64>,
    pub bat_energy: Vec<f64>,
    pub gen_p: Vec<f64>,
    pub gen_q: Vec<f64>,
    /// Served load per bus from the model's affine ZIP surrogate (p.u.).
    pub load_p: Vec<f64>,
    pub load_q: Vec<f64>,
    /// Cone slack `i_sq * v_sq(from) - (p^2 + q^2)` per branch.
    pub cone_slack: Vec<f64>,
    /// Resistive loss this hour (p.u.).
    pub loss: f64,
}

impl HourFrame {
    pub fn open_branches(&self) -> Vec<usize> {
        self.closed.iter().enumerate().filter(|(_, c)| !**c).map(|(e, _)| e).collect()
    }

    pub fn served_p(&self) -> f64 {
        self.load_p.iter().sum()
    }

    /// Fixed injections (DER dispatch) for the sweep oracle.
    pub fn fixed_injections(&self, case: &NetworkCase) -> FixedInjections {
        let mut inj = FixedInjections::none(case.n_buses());
        for (p, pv) in case.pv_units.iter().enumerate() {
            if let (Some(&prod), Some(&curt)) = (self.pv_p.get(p), self.pv_curt.get(p)) {
                inj.p[pv.bus] += prod - curt;
            }
        }
        for (k, bat) in case.batteries.iter().enumerate() {
            if let (Some(&c), Some(&d)) = (self.bat_chg.get(k), self.bat_dchg.get(k)) {
                inj.p[bat.bus] += d - c;
            }
            if let (Some(&qc), Some(&qd)) = (self.bat_q_chg.get(k), self.bat_q_dchg.get(k)) {
                inj.q[bat.bus] += qd - qc;
            }
        }
        for (g, gen) in case.generators.iter().enumerate() {
            if let (Some(&p), Some(&q)) = (self.gen_p.get(g), self.gen_q.get(g)) {
                inj.p[gen.bus] += p;
                inj.q[gen.bus] += q;
            }
        }
        inj
    }
}

/// Full-horizon physical solution.
#[derive(Debug, Clone)]
pub struct SolutionFrame {
    pub hours: Vec<HourFrame>,
    /// Objective value: total resistive loss over the covered hours (p.u.).
    pub objective: f64,
}

/// Map a raw solver vector back to physical quantities.
pub fn extract_solution(
    model: &BuiltModel,
    raw: &[f64],
    case: &NetworkCase,
) -> Result<SolutionFrame, ModelError> {
    let want = model.program.n_vars();
    if raw.len() != want {
        return Err(ModelError::Program(super::ProgramError::BadLength {
            got: raw.len(),
            want,
        }));
    }

    let n = case.n_buses();
    let der = !model.hours.is_empty()
        && model.varmap.get(Quantity::PPv(0), model.hours[0]).is_some();
    let has_bat = !model.hours.is_empty()
        && model.varmap.get(Quantity::PChg(0), model.hours[0]).is_some();
    let has_gen = !model.hours.is_empty()
        && model.varmap.get(Quantity::PGen(0), model.hours[0]).is_some();

    let mut frames = Vec::with_capacity(model.hours.len());
    for &h in &model.hours {
        let mut v = Vec::with_capacity(n);
        let mut v_sq = Vec::with_capacity(n);
        for i in 0..n {
            let u = raw[model.varmap.expect(Quantity::VSq(i), h)];
            if u < VSQ_NEGATIVE_TOL {
                return Err(ModelError::Extraction(format!(
                    "negative squared voltage {u:.3e} at bus {} hour {h}",
                    case.buses[i].id
                )));
            }
            v_sq.push(u);
            v.push(u.max(0.0).sqrt());
        }

        let closed = model.closed_set(case, raw, h);
        let mut i_sq = Vec::with_capacity(case.n_branches());
        let mut p_flow = Vec::with_capacity(case.n_branches());
        let mut q_flow = Vec::with_capacity(case.n_branches());
        let mut cone_slack = Vec::with_capacity(case.n_branches());
        let mut loss = 0.0;
        for (e, br) in case.branches.iter().enumerate() {
            let cur = raw[model.varmap.expect(Quantity::ISq(e), h)];
            let p = raw[model.varmap.expect(Quantity::PFlow(e), h)];
            let q = raw[model.varmap.expect(Quantity::QFlow(e), h)];
            i_sq.push(cur);
            p_flow.push(p);
            q_flow.push(q);
            cone_slack.push(cur * v_sq[br.from] - (p * p + q * q));
            loss += br.r * cur;
        }

        let subs = case.substations();
        let p_sub: Vec<f64> = (0..subs.len())
            .map(|k| raw[model.varmap.expect(Quantity::PSub(k), h)])
            .collect();
        let q_sub: Vec<f64> = (0..subs.len())
            .map(|k| raw[model.varmap.expect(Quantity::QSub(k), h)])
            .collect();

        let grab = |q: &dyn Fn(usize) -> Quantity, count: usize, on: bool| -> Vec<f64> {
            if !on {
                return Vec::new();
            }
            (0..count).map(|k| raw[model.varmap.expect(q(k), h)]).collect()
        };
        let pv_p = grab(&Quantity::PPv, case.pv_units.len(), der);
        let pv_curt = grab(&Quantity::PCurt, case.pv_units.len(), der);
        let bat_chg = grab(&Quantity::PChg, case.batteries.len(), has_bat);
        let bat_dchg = grab(&Quantity::PDchg, case.batteries.len(), has_bat);
        let bat_q_chg = grab(&Quantity::QChg, case.batteries.len(), has_bat);
        let bat_q_dchg = grab(&Quantity::QDchg, case.batteries.len(), has_bat);
        let bat_energy = grab(&Quantity::Energy, case.batteries.len(), has_bat);
        let gen_p = grab(&Quantity::PGen, case.generators.len(), has_gen);
        let gen_q = grab(&Quantity::QGen, case.generators.len(), has_gen);

        let mut load_p = Vec::with_capacity(n);
        let mut load_q = Vec::with_capacity(n);
        for i in 0..n {
            let (pd, qd) = case.demand_at(i, h);
            load_p.push(pd * model.affine_p[i].eval_vsq(v_sq[i]));
            load_q.push(qd * model.affine_q[i].eval_vsq(v_sq[i]));
        }

        frames.push(HourFrame {
            hour: h,
            v,
            v_sq,
            i_sq,
            p_flow,
            q_flow,
            closed,
            p_sub,
            q_sub,
            pv_p,
            pv_curt,
            bat_chg,
            bat_dchg,
            bat_q_chg,
            bat_q_dchg,
            bat_energy,
            gen_p,
            gen_q,
            load_p,
            load_q,
            cone_slack,
            loss,
        });
    }

    let objective = model.program.objective_value(raw);
    Ok(SolutionFrame { hours: frames, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model, LoadModel, ModelOptions, Scenario, ScenarioConfig, TopologyMode};
    use crate::testutil::two_bus_case;

    #[test]
    fn wrong_length_is_an_error() {
        let case = two_bus_case();
        let cfg = ScenarioConfig::new(Scenario::Sdn, 0.0, TopologyMode::Hourly, false, LoadModel::Cp)
            .unwrap();
        let m = build_model(&case, &cfg, &ModelOptions::default()).unwrap();
        let raw = vec![0.0; m.program.n_vars() + 1];
        assert!(extract_solution(&m, &raw, &case).is_err());
    }

    #[test]
    fn negative_vsq_is_an_error() {
        let case = two_bus_case();
        let cfg = ScenarioConfig::new(Scenario::Sdn, 0.0, TopologyMode::Hourly, false, LoadModel::Cp)
            .unwrap();
        let m = build_model(&case, &cfg, &ModelOptions::default()).unwrap();
        let mut raw = vec![0.0; m.program.n_vars()];
        raw[m.varmap.expect(Quantity::VSq(0), 0)] = -1e-3;
        let err = extract_solution(&m, &raw, &case).unwrap_err();
        assert!(matches!(err, ModelError::Extraction(_)));
    }
}
