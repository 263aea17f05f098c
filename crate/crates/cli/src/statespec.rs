//! State specifications: stabilizer indices, literal amplitudes, and the
//! named shortcuts covering the representative initial states of both
//! processes.

use qmagic_core::qlin::normalize;
use qmagic_core::{StabilizerAtlas64, TwoQubitState64, C64};

use crate::CliError;

/// Resolves a named shortcut.
///
/// `psi1`..`psi5b` are the Møller representatives; the NN set is reachable as
/// `nn-psi1`..`nn-psi3` (`psi1` and `nn-psi1` coincide). `bell` is the
/// (|00> + |11>)/sqrt(2) stabilizer and `T-tensor-T` the canonical two-qubit
/// magic product state.
pub fn named_state(name: &str) -> Option<TwoQubitState64> {
    let atlas = StabilizerAtlas64::new();
    let by_index = |k: usize| Some(atlas.stabilizer(k).unwrap().state);
    match name.to_ascii_lowercase().as_str() {
        "bell" => by_index(39),
        "t-tensor-t" => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let a = C64::new(r, 0.0);
            let t = C64::from_polar(r, std::f64::consts::FRAC_PI_4);
            Some(normalize([a * a, a * t, t * a, t * t]).expect("unit"))
        }
        "psi1" | "nn-psi1" => by_index(33),
        "psi2" => by_index(1),
        "psi3" => by_index(2),
        "psi4" | "nn-psi2" => by_index(34),
        "psi5a" => by_index(5),
        "psi5b" => by_index(9),
        "nn-psi3" => by_index(25),
        _ => None,
    }
}

/// Builds a state from 8 reals: (re, im) pairs in the fixed basis order.
pub fn state_from_amps(vals: &[f64]) -> Result<TwoQubitState64, CliError> {
    if vals.len() != 8 {
        return Err(CliError::Parse(format!(
            "--amps needs 8 reals (4 complex amplitudes), got {}",
            vals.len()
        )));
    }
    let v: [C64; 4] = std::array::from_fn(|k| C64::new(vals[2 * k], vals[2 * k + 1]));
    normalize(v).map_err(|e| CliError::Parse(format!("amplitudes not normalizable: {e}")))
}

/// Parses a combined state spec: a stabilizer index (1-60), a named
/// shortcut, or 8 comma-separated reals.
pub fn parse_state_spec(spec: &str) -> Result<TwoQubitState64, CliError> {
    if let Ok(index) = spec.parse::<usize>() {
        let atlas = StabilizerAtlas64::new();
        return atlas
            .stabilizer(index)
            .map(|s| s.state)
            .map_err(|e| CliError::Parse(e.to_string()));
    }
    if let Some(state) = named_state(spec) {
        return Ok(state);
    }
    if spec.contains(',') {
        let vals: Result<Vec<f64>, _> =
            spec.split(',').map(|tok| tok.trim().parse::<f64>()).collect();
        match vals {
            Ok(vals) => return state_from_amps(&vals),
            Err(_) => {
                return Err(CliError::Parse(format!(
                    "state spec '{spec}' has a non-numeric amplitude"
                )))
            }
        }
    }
    Err(CliError::Parse(format!(
        "unknown state spec '{spec}' (expected a stabilizer index, a name, or 8 comma-separated reals)"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_states_resolve() {
        let bell = named_state("bell").unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((bell.amp(0).re - r).abs() < 1e-15);
        assert!((bell.amp(3).re - r).abs() < 1e-15);
        assert!(named_state("T-tensor-T").is_some());
        for name in ["psi1", "psi2", "psi3", "psi4", "psi5a", "psi5b", "nn-psi2", "nn-psi3"] {
            assert!(named_state(name).is_some(), "{name}");
        }
        assert!(named_state("psi6").is_none());
        // psi1 is shared between the two processes; nn-psi2 is |up down>.
        assert_eq!(named_state("psi1"), named_state("nn-psi1"));
        assert_eq!(named_state("psi4"), named_state("nn-psi2"));
    }

    #[test]
    fn spec_parsing_covers_all_forms() {
        assert!(parse_state_spec("39").is_ok());
        assert!(parse_state_spec("psi5b").is_ok());
        assert!(parse_state_spec("1,0,0,0,0,0,0,0").is_ok());
        assert!(matches!(parse_state_spec("61"), Err(CliError::Parse(_))));
        assert!(matches!(parse_state_spec("wat"), Err(CliError::Parse(_))));
        assert!(matches!(parse_state_spec("1,2,three,4,5,6,7,8"), Err(CliError::Parse(_))));
        assert!(matches!(parse_state_spec("0,0,0,0,0,0,0,0"), Err(CliError::Parse(_))));
    }
}
