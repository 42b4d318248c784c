//! Bundled benchmark feeders.
//!
//! `ieee33` is the 12.66 kV 33-bus radial feeder (32 sectionalizing branches
//! plus 5 normally-open ties) with its standard impedances and nominal loads,
//! augmented with PV, storage and one dispatchable generator. `ieee123` is a
//! balanced single-phase equivalent of the 123-bus feeder: the standard
//! segment topology and switch placements, approximate per-configuration
//! impedances, and dispersed DERs. Both carry a default 24-hour load shape;
//! the shapes and DER placements are documented approximations, not published
//! data. See the asset files for the full provenance notes.

use super::{load_case, CaseError, NetworkCase};

const IEEE33: &str = include_str!("../assets/ieee33.json");
const IEEE123: &str = include_str!("../assets/ieee123.json");

pub const BUILTIN_NAMES: &[&str] = &["ieee33", "ieee123"];

/// Raw JSON text of a bundled case, if the name is known.
pub fn builtin_case_text(name: &str) -> Option<&'static str> {
    match name {
        "ieee33" => Some(IEEE33),
        "ieee123" => Some(IEEE123),
        _ => None,
    }
}

/// Load a bundled case by name.
pub fn builtin_case(name: &str) -> Result<NetworkCase, CaseError> {
    let text = builtin_case_text(name).ok_or_else(|| CaseError::UnknownBuiltin(name.to_string()))?;
    load_case(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::validate_case;

    #[test]
    fn ieee33_shape() {
        let case = builtin_case("ieee33").unwrap();
        assert_eq!(case.n_buses(), 33);
        assert_eq!(case.n_branches(), 37);
        assert_eq!(case.n_substations(), 1);
        let open: Vec<_> =
            case.branches.iter().filter(|b| !b.initially_closed).map(|b| b.id.clone()).collect();
        assert_eq!(open.len(), 5, "five normally-open ties, got {open:?}");
        assert!(validate_case(&case).is_empty());
    }

    #[test]
    fn ieee123_validates() {
        let case = builtin_case("ieee123").unwrap();
        assert!(validate_case(&case).is_empty());
        let closed = case.branches.iter().filter(|b| b.initially_closed).count();
        assert_eq!(closed, case.n_buses() - case.n_substations());
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(matches!(builtin_case("ieee9999"), Err(CaseError::UnknownBuiltin(_))));
    }
}
