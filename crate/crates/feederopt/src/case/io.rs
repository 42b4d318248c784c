//! JSON case file reading and writing.
//!
//! The file is a single self-contained document. Strict mode rejects unknown
//! keys so typos in fixtures fail loudly; lenient mode ignores them.

use super::{
    validate_case, BatterySpec, BranchSpec, BusKind, BusSpec, CaseError, GeneratorSpec,
    NetworkCase, PvUnitSpec, ZipCoefficients, ZipTriple,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Serialize, Deserialize)]
struct MetaDoc {
    name: String,
    s_base_mva: f64,
    v_base_kv: f64,
    horizon: usize,
    #[serde(default = "one")]
    v_rated_pu: f64,
    #[serde(default)]
    description: String,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
struct BusDoc {
    id: String,
    kind: BusKind,
    #[serde(default, skip_serializing_if = "is_zero")]
    p: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    q: f64,
    v_min: f64,
    v_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v_set: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zip: Option<ZipDoc>,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ZipDoc {
    kz_p: f64,
    ki_p: f64,
    kp_p: f64,
    kz_q: f64,
    ki_q: f64,
    kp_q: f64,
}

impl From<ZipDoc> for ZipCoefficients {
    fn from(d: ZipDoc) -> Self {
        ZipCoefficients {
            active: ZipTriple { z: d.kz_p, i: d.ki_p, p: d.kp_p },
            reactive: ZipTriple { z: d.kz_q, i: d.ki_q, p: d.kp_q },
        }
    }
}

impl From<ZipCoefficients> for ZipDoc {
    fn from(z: ZipCoefficients) -> Self {
        ZipDoc {
            kz_p: z.active.z,
            ki_p: z.active.i,
            kp_p: z.active.p,
            kz_q: z.reactive.z,
            ki_q: z.reactive.i,
            kp_q: z.reactive.p,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct BranchDoc {
    id: String,
    from: String,
    to: String,
    r: f64,
    x: f64,
    i_max: f64,
    #[serde(default)]
    switchable: bool,
    #[serde(default = "yes")]
    closed: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Serialize, Deserialize)]
struct GeneratorDoc {
    id: String,
    bus: String,
    p_min: f64,
    p_max: f64,
    q_min: f64,
    q_max: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PvDoc {
    id: String,
    bus: String,
    profile: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BatteryDoc {
    id: String,
    bus: String,
    e_cap_mwh: f64,
    soc_min: f64,
    soc_max: f64,
    c_duration_h: f64,
    d_duration_h: f64,
    eta_chg: f64,
    eta_dchg: f64,
    e_init_mwh: f64,
    #[serde(default)]
    q_rating: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CaseDoc {
    meta: MetaDoc,
    buses: Vec<BusDoc>,
    branches: Vec<BranchDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    generators: Vec<GeneratorDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pv: Vec<PvDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    batteries: Vec<BatteryDoc>,
    zip_defaults: ZipDoc,
    load_profile: Vec<f64>,
}

/// Allowed keys per object, used for strict-mode checking.
const TOP_KEYS: &[&str] = &[
    "meta", "buses", "branches", "generators", "pv", "batteries", "zip_defaults", "load_profile",
];
const META_KEYS: &[&str] =
    &["name", "s_base_mva", "v_base_kv", "horizon", "v_rated_pu", "description"];
const BUS_KEYS: &[&str] = &["id", "kind", "p", "q", "v_min", "v_max", "v_set", "zip"];
const ZIP_KEYS: &[&str] = &["kz_p", "ki_p", "kp_p", "kz_q", "ki_q", "kp_q"];
const BRANCH_KEYS: &[&str] = &["id", "from", "to", "r", "x", "i_max", "switchable", "closed"];
const GEN_KEYS: &[&str] = &["id", "bus", "p_min", "p_max", "q_min", "q_max"];
const PV_KEYS: &[&str] = &["id", "bus", "profile"];
const BATTERY_KEYS: &[&str] = &[
    "id",
    "bus",
    "e_cap_mwh",
    "soc_min",
    "soc_max",
    "c_duration_h",
    "d_duration_h",
    "eta_chg",
    "eta_dchg",
    "e_init_mwh",
    "q_rating",
];

fn check_keys(v: &Value, allowed: &[&str], entity: &str) -> Result<(), CaseError> {
    if let Value::Object(map) = v {
        for k in map.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(CaseError::Schema {
                    entity: entity.to_string(),
                    message: format!("unknown key `{k}` (strict mode)"),
                });
            }
        }
    }
    Ok(())
}

fn check_strict(root: &Value) -> Result<(), CaseError> {
    check_keys(root, TOP_KEYS, "case")?;
    let obj = root.as_object().ok_or_else(|| CaseError::Parse("top level must be an object".into()))?;
    if let Some(m) = obj.get("meta") {
        check_keys(m, META_KEYS, "meta")?;
    }
    let arrays: &[(&str, &[&str])] = &[
        ("buses", BUS_KEYS),
        ("branches", BRANCH_KEYS),
        ("generators", GEN_KEYS),
        ("pv", PV_KEYS),
        ("batteries", BATTERY_KEYS),
    ];
    for (key, allowed) in arrays {
        if let Some(Value::Array(items)) = obj.get(*key) {
            for (i, item) in items.iter().enumerate() {
                let label = item
                    .get("id")
                    .and_then(|v| v.as_str())
                    .map(|s| format!("{key}[{s}]"))
                    .unwrap_or_else(|| format!("{key}[#{i}]"));
                check_keys(item, allowed, &label)?;
                if *key == "buses" {
                    if let Some(z) = item.get("zip") {
                        check_keys(z, ZIP_KEYS, &format!("{label}.zip"))?;
                    }
                }
            }
        }
    }
    if let Some(z) = obj.get("zip_defaults") {
        check_keys(z, ZIP_KEYS, "zip_defaults")?;
    }
    Ok(())
}

fn build_case(doc: CaseDoc) -> Result<NetworkCase, CaseError> {
    let bus_index = |id: &str, entity: &str| -> Result<usize, CaseError> {
        doc.buses.iter().position(|b| b.id == id).ok_or_else(|| CaseError::Schema {
            entity: entity.to_string(),
            message: format!("references undeclared bus `{id}`"),
        })
    };

    let s_base = doc.meta.s_base_mva;
    if !(s_base > 0.0) {
        return Err(CaseError::Schema {
            entity: "meta".into(),
            message: "s_base_mva must be positive".into(),
        });
    }

    let buses: Vec<BusSpec> = doc
        .buses
        .iter()
        .map(|b| BusSpec {
            id: b.id.clone(),
            kind: b.kind,
            p_demand: b.p,
            q_demand: b.q,
            v_min: b.v_min,
            v_max: b.v_max,
            v_set: b.v_set,
            zip: b.zip.map(Into::into),
        })
        .collect();

    let mut branches = Vec::with_capacity(doc.branches.len());
    for br in &doc.branches {
        branches.push(BranchSpec {
            id: br.id.clone(),
            from: bus_index(&br.from, &format!("branch {}", br.id))?,
            to: bus_index(&br.to, &format!("branch {}", br.id))?,
            r: br.r,
            x: br.x,
            i_max: br.i_max,
            switchable: br.switchable,
            initially_closed: br.closed,
        });
    }

    let mut generators = Vec::new();
    for g in &doc.generators {
        generators.push(GeneratorSpec {
            id: g.id.clone(),
            bus: bus_index(&g.bus, &format!("generator {}", g.id))?,
            p_min: g.p_min,
            p_max: g.p_max,
            q_min: g.q_min,
            q_max: g.q_max,
        });
    }

    let mut pv_units = Vec::new();
    for p in &doc.pv {
        pv_units.push(PvUnitSpec {
            id: p.id.clone(),
            bus: bus_index(&p.bus, &format!("pv {}", p.id))?,
            availability: p.profile.clone(),
        });
    }

    let mut batteries = Vec::new();
    for b in &doc.batteries {
        batteries.push(BatterySpec {
            id: b.id.clone(),
            bus: bus_index(&b.bus, &format!("battery {}", b.id))?,
            e_cap: b.e_cap_mwh / s_base,
            soc_min: b.soc_min,
            soc_max: b.soc_max,
            c_duration: b.c_duration_h,
            d_duration: b.d_duration_h,
            eta_chg: b.eta_chg,
            eta_dchg: b.eta_dchg,
            e_init: b.e_init_mwh / s_base,
            q_rating: b.q_rating,
        });
    }

    let case = NetworkCase {
        name: doc.meta.name,
        s_base_mva: s_base,
        v_base_kv: doc.meta.v_base_kv,
        v_rated: doc.meta.v_rated_pu,
        horizon: doc.meta.horizon,
        buses,
        branches,
        generators,
        pv_units,
        batteries,
        zip_defaults: doc.zip_defaults.into(),
        load_profile: doc.load_profile,
        description: doc.meta.description,
    };

    let report = validate_case(&case);
    if !report.is_empty() {
        return Err(CaseError::Validation(report));
    }
    Ok(case)
}

fn parse(source: &str, strict: bool) -> Result<NetworkCase, CaseError> {
    let root: Value =
        serde_json::from_str(source).map_err(|e| CaseError::Parse(e.to_string()))?;
    if strict {
        check_strict(&root)?;
    }
    let doc: CaseDoc = serde_json::from_value(root).map_err(|e| CaseError::Schema {
        entity: "case".into(),
        message: e.to_string(),
    })?;
    build_case(doc)
}

/// Parse and validate a case document, rejecting unknown keys.
pub fn load_case(source: &str) -> Result<NetworkCase, CaseError> {
    parse(source, true)
}

/// Parse and validate a case document, ignoring unknown keys.
pub fn load_case_lenient(source: &str) -> Result<NetworkCase, CaseError> {
    parse(source, false)
}

/// Serialize a case back to its file form. Round-trips through `load_case`.
pub fn case_to_json(case: &NetworkCase) -> String {
    let doc = CaseDoc {
        meta: MetaDoc {
            name: case.name.clone(),
            s_base_mva: case.s_base_mva,
            v_base_kv: case.v_base_kv,
            horizon: case.horizon,
            v_rated_pu: case.v_rated,
            description: case.description.clone(),
        },
        buses: case
            .buses
            .iter()
            .map(|b| BusDoc {
                id: b.id.clone(),
                kind: b.kind,
                p: b.p_demand,
                q: b.q_demand,
                v_min: b.v_min,
                v_max: b.v_max,
                v_set: b.v_set,
                zip: b.zip.map(Into::into),
            })
            .collect(),
        branches: case
            .branches
            .iter()
            .map(|b| BranchDoc {
                id: b.id.clone(),
                from: case.buses[b.from].id.clone(),
                to: case.buses[b.to].id.clone(),
                r: b.r,
                x: b.x,
                i_max: b.i_max,
                switchable: b.switchable,
                closed: b.initially_closed,
            })
            .collect(),
        generators: case
            .generators
            .iter()
            .map(|g| GeneratorDoc {
                id: g.id.clone(),
                bus: case.buses[g.bus].id.clone(),
                p_min: g.p_min,
                p_max: g.p_max,
                q_min: g.q_min,
                q_max: g.q_max,
            })
            .collect(),
        pv: case
            .pv_units
            .iter()
            .map(|p| PvDoc {
                id: p.id.clone(),
                bus: case.buses[p.bus].id.clone(),
                profile: p.availability.clone(),
            })
            .collect(),
        batteries: case
            .batteries
            .iter()
            .map(|b| BatteryDoc {
                id: b.id.clone(),
                bus: case.buses[b.bus].id.clone(),
                e_cap_mwh: b.e_cap * case.s_base_mva,
                soc_min: b.soc_min,
                soc_max: b.soc_max,
                c_duration_h: b.c_duration,
                d_duration_h: b.d_duration,
                eta_chg: b.eta_chg,
                eta_dchg: b.eta_dchg,
                e_init_mwh: b.e_init * case.s_base_mva,
                q_rating: b.q_rating,
            })
            .collect(),
        zip_defaults: case.zip_defaults.into(),
        load_profile: case.load_profile.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("case serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_case_json() -> String {
        r#"{
          "meta": {"name": "tiny", "s_base_mva": 1.0, "v_base_kv": 12.66, "horizon": 2},
          "buses": [
            {"id": "s", "kind": "substation", "v_min": 0.95, "v_max": 1.05, "v_set": 1.0},
            {"id": "a", "kind": "load", "p": 0.5, "q": 0.2, "v_min": 0.95, "v_max": 1.05}
          ],
          "branches": [
            {"id": "l1", "from": "s", "to": "a", "r": 0.02, "x": 0.01, "i_max": 2.0}
          ],
          "zip_defaults": {"kz_p": 0, "ki_p": 0, "kp_p": 1, "kz_q": 0, "ki_q": 0, "kp_q": 1},
          "load_profile": [1.0, 0.8]
        }"#
        .to_string()
    }

    #[test]
    fn loads_tiny_case() {
        let case = load_case(&tiny_case_json()).unwrap();
        assert_eq!(case.n_buses(), 2);
        assert_eq!(case.n_branches(), 1);
        assert_eq!(case.substations(), vec![0]);
        assert_eq!(case.horizon, 2);
    }

    #[test]
    fn rejects_unknown_key_in_strict_mode() {
        let src = tiny_case_json().replace("\"r\": 0.02", "\"r\": 0.02, \"colour\": \"blue\"");
        let err = load_case(&src).unwrap_err();
        match err {
            CaseError::Schema { entity, message } => {
                assert_eq!(entity, "branches[l1]");
                assert!(message.contains("colour"));
            }
            other => panic!("expected schema error, got {other:?}"),
        }
        assert!(load_case_lenient(&src).is_ok());
    }

    #[test]
    fn rejects_dangling_bus_reference() {
        let src = tiny_case_json().replace("\"to\": \"a\"", "\"to\": \"ghost\"");
        let err = load_case(&src).unwrap_err();
        match err {
            CaseError::Schema { entity, message } => {
                assert_eq!(entity, "branch l1");
                assert!(message.contains("ghost"));
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_json() {
        assert!(matches!(load_case("{not json"), Err(CaseError::Parse(_))));
    }

    #[test]
    fn round_trips_field_by_field() {
        let case = load_case(&tiny_case_json()).unwrap();
        let json = case_to_json(&case);
        let back = load_case(&json).unwrap();
        assert_eq!(case, back);
    }
}
