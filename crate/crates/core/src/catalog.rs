//! Lookup of every named state by its CLI label.

use crate::bb84::build_protocol_states;
use crate::dfstates::{
    eight_qubit_state, four_qubit_state, singlet, six_qubit_state, EIGHT_QUBIT_LABELS,
    FOUR_QUBIT_LABELS, SIX_QUBIT_LABELS,
};
use crate::error::{Error, Result};
use crate::statevec::StateVector;

pub const SIGNAL_LABELS: [&str; 4] = ["hat0", "hatplus", "hat1", "hatminus"];

/// All labels in the order the CLI lists them.
pub fn all_labels() -> Vec<&'static str> {
    std::iter::once("s")
        .chain(FOUR_QUBIT_LABELS)
        .chain(SIX_QUBIT_LABELS)
        .chain(SIGNAL_LABELS)
        .chain(EIGHT_QUBIT_LABELS)
        .collect()
}

/// Labels of the decoherence-free basis states (signals excluded).
pub fn basis_labels() -> Vec<&'static str> {
    all_labels()
        .into_iter()
        .filter(|l| !SIGNAL_LABELS.contains(l))
        .collect()
}

pub fn named_state(label: &str) -> Result<StateVector> {
    match label.len() {
        _ if label == "s" => Ok(singlet()),
        1 if FOUR_QUBIT_LABELS.contains(&label) => four_qubit_state(label),
        3 if SIX_QUBIT_LABELS.contains(&label) => six_qubit_state(label),
        4 if EIGHT_QUBIT_LABELS.contains(&label) => eight_qubit_state(label),
        _ if SIGNAL_LABELS.contains(&label) => {
            let p = build_protocol_states()?;
            Ok(match label {
                "hat0" => p.comp0,
                "hatplus" => p.had_plus,
                "hat1" => p.comp1,
                _ => p.had_minus,
            })
        }
        _ => Err(Error::UnknownLabel {
            label: label.to_owned(),
            valid: all_labels().into_iter().map(str::to_owned).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_label_resolves() {
        let labels = all_labels();
        assert_eq!(labels.len(), 1 + 2 + 5 + 4 + 14);
        for l in labels {
            let psi = named_state(l).unwrap();
            assert!(psi.is_normalized(1e-12), "{l}");
        }
    }

    #[test]
    fn unknown_label_lists_valid_ones() {
        let err = named_state("2").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("hatplus") && text.contains("0010"), "{text}");
    }
}
