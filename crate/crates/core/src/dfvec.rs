//! `DFVEC v1` text format.
//!
//! ```text
//! dfvec 1 <n_qubits>
//! <bitstring> <re> <im>
//! ...
//! ```
//!
//! One line per nonzero amplitude, sorted by bitstring, numbers written with
//! 17 significant digits. The reader accepts lines in any order but rejects
//! repeated bitstrings.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::{bitstring, parse_bitstring, StateVector, MAX_QUBITS};

const MAGIC: &str = "dfvec";
const VERSION: &str = "1";

pub fn to_string(psi: &StateVector) -> String {
    let n = psi.n_qubits();
    let mut out = format!("{MAGIC} {VERSION} {n}\n");
    for (k, a) in psi.amplitudes().iter().enumerate() {
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        let _ = writeln!(out, "{} {:.16e} {:.16e}", bitstring(k, n), a.re, a.im);
    }
    out
}

pub fn parse(text: &str) -> Result<StateVector> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad_header = |message: String| Error::Parse {
        line: header_line,
        message,
    };
    match fields.as_slice() {
        [MAGIC, VERSION, n] => {
            let n: usize = n
                .parse()
                .map_err(|_| bad_header(format!("bad qubit count `{n}`")))?;
            if n == 0 || n > MAX_QUBITS {
                return Err(bad_header(format!(
                    "qubit count {n} outside 1..={MAX_QUBITS}"
                )));
            }
            let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
            let mut seen = vec![false; 1 << n];
            for (line, body) in lines {
                let err = |message: String| Error::Parse { line, message };
                let parts: Vec<&str> = body.split_whitespace().collect();
                let [bits, re, im] = parts.as_slice() else {
                    return Err(err(format!(
                        "expected `<bitstring> <re> <im>`, found {} fields",
                        parts.len()
                    )));
                };
                if bits.len() != n {
                    return Err(err(format!("bitstring `{bits}` is not {n} qubits long")));
                }
                let index = parse_bitstring(bits).map_err(|e| err(e.to_string()))?;
                if std::mem::replace(&mut seen[index], true) {
                    return Err(err(format!("duplicate bitstring `{bits}`")));
                }
                let number = |s: &str| {
                    s.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| err(format!("bad number `{s}`")))
                };
                amplitudes[index] = Complex64::new(number(re)?, number(im)?);
            }
            StateVector::new(n, amplitudes)
        }
        [MAGIC, v, _] => Err(bad_header(format!("unsupported version `{v}`"))),
        _ => Err(bad_header(format!(
            "expected header `{MAGIC} {VERSION} <n_qubits>`"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_sorted_nonzero_lines() {
        let psi = StateVector::from_terms(2, &[("10", -0.5), ("01", 0.5)], 1.0).unwrap();
        let text = to_string(&psi);
        assert_eq!(
            text,
            "dfvec 1 2\n01 5.0000000000000000e-1 0.0000000000000000e0\n10 -5.0000000000000000e-1 0.0000000000000000e0\n"
        );
    }

    #[test]
    fn accepts_unsorted_input() {
        let text = "dfvec 1 2\n10 -0.5 0\n\n01 0.5 0.0\n";
        let psi = parse(text).unwrap();
        assert_eq!(psi.amplitude("01").unwrap().re, 0.5);
        assert_eq!(psi.amplitude("10").unwrap().re, -0.5);
    }

    #[test]
    fn rejects_duplicates_with_line_number() {
        let text = "dfvec 1 2\n01 0.5 0\n10 0.5 0\n01 0.1 0\n";
        match parse(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("duplicate"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_lines() {
        for (text, line) in [
            ("", 1),
            ("dfvec 2 2\n", 1),
            ("dfvec 1 x\n", 1),
            ("dfvec 1 11\n", 1),
            ("vec 1 2\n", 1),
            ("dfvec 1 2\n01 0.5\n", 2),
            ("dfvec 1 2\n011 0.5 0\n", 2),
            ("dfvec 1 2\n0a 0.5 0\n", 2),
            ("dfvec 1 2\n01 nan 0\n", 2),
            ("dfvec 1 2\n01 1 0\n10 abc 0\n", 3),
        ] {
            match parse(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }
}
