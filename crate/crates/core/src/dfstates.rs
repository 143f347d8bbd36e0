//! Named decoherence-free states, the DF-subspace solver, and basis completion.
//!
//! Bar-labels follow the usual notation: `"011"` is `|0̄1̄1̄>` and so on.
//! Embedding `|φ>_{ijk...}` places qubit 1 of `φ` on position `i`, qubit 2 on
//! `j`, and so forth.
//!
//! `|1̄1̄1̄>` (6 qubits) is obtained as the Gram-Schmidt residual of the four
//! product states inside the DF subspace. Its realized sign pattern, with the
//! `000111` amplitude fixed positive, is
//!
//! ```text
//! +000111 +001011 -001101 -001110 -010011 +011100
//! -100011 +101100 +110001 +110010 -110100 -111000   (each 1/(2√3))
//! ```
//!
//! The eight weight-3 strings anticorrelated on all of (1,2), (3,4), (5,6)
//! have zero amplitude, and flipping every bit negates the state.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{spin_residuals, stacked_spin_matrix};
use crate::statevec::{inner, permute, tensor, QubitPermutation, StateVector};

/// Labels of the 4-qubit basis.
pub const FOUR_QUBIT_LABELS: [&str; 2] = ["0", "1"];
/// Labels of the 6-qubit basis, in table order.
pub const SIX_QUBIT_LABELS: [&str; 5] = ["000", "011", "101", "110", "111"];
/// Labels of the 8-qubit basis: twelve products, the supersinglet, the residual state.
pub const EIGHT_QUBIT_LABELS: [&str; 14] = [
    "0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111", "0111", "1011", "1101",
    "1110", "0001", "0010",
];

/// Largest register handed to the dense nullspace solver.
pub const MAX_SOLVER_QUBITS: usize = 8;

/// Singular values below this are treated as zero.
const NULLSPACE_TOL: f64 = 1e-10;
/// Gram-Schmidt drops candidate vectors whose residual falls below this.
const GS_DROP_TOL: f64 = 1e-8;
/// Precondition tolerance for `complete_basis`.
const PRECONDITION_TOL: f64 = 1e-10;
/// Amplitudes below this are zeroed when canonicalizing derived states.
const CHOP: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionRecord {
    pub n_qubits: usize,
    pub exact_dim: u128,
    pub logical_qubits: f64,
    pub asymptotic_estimate: f64,
}

/// `d(N) = N! / ((N/2)! (N/2+1)!)`, the Catalan number `C_{N/2}`.
pub fn df_dimension(n: usize) -> Result<DimensionRecord> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::Domain(format!(
            "DF dimension is defined for even N >= 2, got {n}"
        )));
    }
    let half = (n / 2) as u128;
    // C_{k+1} = C_k * 2(2k+1) / (k+2); every intermediate quotient is exact.
    let mut catalan: u128 = 1;
    for k in 0..half {
        catalan = catalan
            .checked_mul(2 * (2 * k + 1))
            .ok_or_else(|| Error::Domain(format!("d({n}) overflows 128-bit integers")))?
            / (k + 2);
    }
    let nf = n as f64;
    Ok(DimensionRecord {
        n_qubits: n,
        exact_dim: catalan,
        logical_qubits: (catalan as f64).log2(),
        asymptotic_estimate: nf - 1.5 * nf.log2(),
    })
}

/// `|ψ⁻> = (|01> − |10>)/√2`.
pub fn singlet() -> StateVector {
    StateVector::from_terms(2, &[("01", 1.0), ("10", -1.0)], FRAC_1_SQRT_2)
        .expect("static 2-qubit state")
}

fn four_qubit_one() -> StateVector {
    StateVector::from_terms(
        4,
        &[
            ("0011", 2.0),
            ("0101", -1.0),
            ("0110", -1.0),
            ("1001", -1.0),
            ("1010", -1.0),
            ("1100", 2.0),
        ],
        1.0 / (2.0 * 3f64.sqrt()),
    )
    .expect("static 4-qubit state")
}

fn unknown_label(label: &str, valid: &[&str]) -> Error {
    Error::UnknownLabel {
        label: label.to_owned(),
        valid: valid.iter().map(|s| s.to_string()).collect(),
    }
}

/// Places factor states on the given (1-based) qubit positions of an
/// `n`-qubit register. The position lists must partition `1..=n`.
pub fn embed(parts: &[(&StateVector, &[usize])], n: usize) -> Result<StateVector> {
    let mut positions = Vec::with_capacity(n);
    let mut product: Option<StateVector> = None;
    for (state, pos) in parts {
        if state.n_qubits() != pos.len() {
            return Err(Error::Shape(format!(
                "{}-qubit factor placed on {} positions",
                state.n_qubits(),
                pos.len()
            )));
        }
        positions.extend_from_slice(pos);
        product = Some(match product {
            None => (*state).clone(),
            Some(acc) => tensor(&acc, state)?,
        });
    }
    let product = product.ok_or_else(|| Error::Shape("nothing to embed".into()))?;
    if positions.len() != n {
        return Err(Error::Shape(format!(
            "factors cover {} of {n} positions",
            positions.len()
        )));
    }
    let p = QubitPermutation::from_one_based(&positions)?;
    permute(&p, &product)
}

/// `|0̄>` = double singlet, `|1̄>` = 4-qubit supersinglet.
pub fn four_qubit_state(label: &str) -> Result<StateVector> {
    match label {
        "0" => tensor(&singlet(), &singlet()),
        "1" => Ok(four_qubit_one()),
        _ => Err(unknown_label(label, &FOUR_QUBIT_LABELS)),
    }
}

pub fn six_qubit_state(label: &str) -> Result<StateVector> {
    let s = singlet();
    let one = four_qubit_one();
    match label {
        "000" => embed(&[(&s, &[1, 2]), (&s, &[3, 4]), (&s, &[5, 6])], 6),
        "011" => embed(&[(&s, &[1, 2]), (&one, &[3, 4, 5, 6])], 6),
        "101" => embed(&[(&s, &[3, 4]), (&one, &[1, 2, 5, 6])], 6),
        "110" => embed(&[(&s, &[5, 6]), (&one, &[1, 2, 3, 4])], 6),
        "111" => genuine_six_qubit_state(),
        _ => Err(unknown_label(label, &SIX_QUBIT_LABELS)),
    }
}

fn genuine_six_qubit_state() -> Result<StateVector> {
    static CELL: OnceLock<StateVector> = OnceLock::new();
    if let Some(psi) = CELL.get() {
        return Ok(psi.clone());
    }
    let products = SIX_QUBIT_LABELS[..4]
        .iter()
        .map(|l| six_qubit_state(l))
        .collect::<Result<Vec<_>>>()?;
    let mut residual = complete_basis(&products, 6)?;
    if residual.len() != 1 {
        return Err(Error::Precondition(format!(
            "expected a 1-dimensional complement, found {}",
            residual.len()
        )));
    }
    let psi = residual.pop().expect("length checked");
    Ok(CELL.get_or_init(|| psi).clone())
}

/// Explicit 36-term state completing the 8-qubit basis, before the `1/(4√3)` factor.
const EIGHT_QUBIT_RESIDUAL_TERMS: [(&str, f64); 36] = [
    ("00010111", 1.0),
    ("00011011", 1.0),
    ("00011101", -1.0),
    ("00011110", -1.0),
    ("00100111", 1.0),
    ("00101011", 1.0),
    ("00101101", -1.0),
    ("00101110", -1.0),
    ("00110011", -2.0),
    ("00111100", 2.0),
    ("01000111", -1.0),
    ("01001011", -1.0),
    ("01001101", 1.0),
    ("01001110", 1.0),
    ("01110001", 1.0),
    ("01110010", 1.0),
    ("01110100", -1.0),
    ("01111000", -1.0),
    ("10000111", -1.0),
    ("10001011", -1.0),
    ("10001101", 1.0),
    ("10001110", 1.0),
    ("10110001", 1.0),
    ("10110010", 1.0),
    ("10110100", -1.0),
    ("10111000", -1.0),
    ("11000011", 2.0),
    ("11001100", -2.0),
    ("11010001", -1.0),
    ("11010010", -1.0),
    ("11010100", 1.0),
    ("11011000", 1.0),
    ("11100001", -1.0),
    ("11100010", -1.0),
    ("11100100", 1.0),
    ("11101000", 1.0),
];

pub fn eight_qubit_state(label: &str) -> Result<StateVector> {
    let s = singlet();
    let one = four_qubit_one();
    match label {
        "0000" => embed(
            &[(&s, &[1, 2]), (&s, &[3, 4]), (&s, &[5, 6]), (&s, &[7, 8])],
            8,
        ),
        "0011" => embed(&[(&s, &[1, 2]), (&s, &[3, 4]), (&one, &[5, 6, 7, 8])], 8),
        "0101" => embed(&[(&s, &[1, 2]), (&s, &[5, 6]), (&one, &[3, 4, 7, 8])], 8),
        "0110" => embed(&[(&s, &[1, 2]), (&s, &[7, 8]), (&one, &[3, 4, 5, 6])], 8),
        "1001" => embed(&[(&s, &[3, 4]), (&s, &[5, 6]), (&one, &[1, 2, 7, 8])], 8),
        "1010" => embed(&[(&s, &[3, 4]), (&s, &[7, 8]), (&one, &[1, 2, 5, 6])], 8),
        "1100" => embed(&[(&s, &[5, 6]), (&s, &[7, 8]), (&one, &[1, 2, 3, 4])], 8),
        "1111" => embed(&[(&one, &[1, 2, 3, 4]), (&one, &[5, 6, 7, 8])], 8),
        "0111" | "1011" | "1101" | "1110" => {
            let genuine = genuine_six_qubit_state()?;
            let (pair, rest): (&[usize], &[usize]) = match label {
                "0111" => (&[1, 2], &[3, 4, 5, 6, 7, 8]),
                "1011" => (&[3, 4], &[1, 2, 5, 6, 7, 8]),
                "1101" => (&[5, 6], &[1, 2, 3, 4, 7, 8]),
                _ => (&[7, 8], &[1, 2, 3, 4, 5, 6]),
            };
            embed(&[(&s, pair), (&genuine, rest)], 8)
        }
        "0001" => CoefficientRule::supersinglet(8)?.apply(),
        "0010" => StateVector::from_terms(
            8,
            &EIGHT_QUBIT_RESIDUAL_TERMS,
            1.0 / (4.0 * 3f64.sqrt()),
        ),
        _ => Err(unknown_label(label, &EIGHT_QUBIT_LABELS)),
    }
}

/// Signed integer coefficients over the distinct rearrangements of a word,
/// scaled by `normalizer`.
#[derive(Clone, Debug)]
pub struct CoefficientRule {
    pub word: String,
    pub weight_fn: fn(&str) -> i64,
    pub normalizer: f64,
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

/// `z!(N/2 − z)!(−1)^{N/2−z}` with `z` the number of zeros among the first
/// `N/2` characters.
fn supersinglet_weight(bits: &str) -> i64 {
    let half = bits.len() / 2;
    let z = bits[..half].bytes().filter(|&b| b == b'0').count() as u32;
    let rest = half as u32 - z;
    let sign = if rest % 2 == 0 { 1 } else { -1 };
    sign * factorial(z) * factorial(rest)
}

impl CoefficientRule {
    /// The N-qubit supersinglet for N ∈ {4, 8}.
    pub fn supersinglet(n: usize) -> Result<Self> {
        let normalizer = match n {
            4 => 1.0 / (2.0 * 3f64.sqrt()),
            8 => 1.0 / (24.0 * 5f64.sqrt()),
            _ => {
                return Err(Error::Domain(format!(
                    "supersinglet rule available for N = 4 or 8, got {n}"
                )))
            }
        };
        let word = "0".repeat(n / 2) + &"1".repeat(n / 2);
        Ok(Self {
            word,
            weight_fn: supersinglet_weight,
            normalizer,
        })
    }

    /// Integer coefficient of every distinct rearrangement, in bitstring order.
    pub fn integer_terms(&self) -> Vec<(String, i64)> {
        let n = self.word.len();
        let ones = self.word.bytes().filter(|&b| b == b'1').count() as u32;
        (0..1usize << n)
            .filter(|k| k.count_ones() == ones)
            .map(|k| {
                let bits = crate::statevec::bitstring(k, n);
                let w = (self.weight_fn)(&bits);
                (bits, w)
            })
            .collect()
    }

    pub fn apply(&self) -> Result<StateVector> {
        let terms = self.integer_terms();
        let borrowed: Vec<(&str, f64)> = terms
            .iter()
            .map(|(b, w)| (b.as_str(), *w as f64))
            .collect();
        StateVector::from_terms(self.word.len(), &borrowed, self.normalizer)
    }
}

/// Orthonormal basis of the common nullspace of `J_x, J_y, J_z` on `n` qubits.
#[derive(Clone, Debug)]
pub struct DfBasis {
    pub n_qubits: usize,
    pub states: Vec<StateVector>,
    pub labels: Vec<String>,
}

/// Solves for the DF subspace as the nullspace of the stacked spin operators.
/// Each vector is phase-canonicalized; labels are `"v0"`, `"v1"`, ...
pub fn df_subspace_basis(n: usize) -> Result<DfBasis> {
    static CACHE: [OnceLock<Vec<StateVector>>; 4] = [const { OnceLock::new() }; 4];
    if n == 0 || n % 2 != 0 {
        return Err(Error::Domain(format!(
            "DF subspace solver needs an even qubit count, got {n}"
        )));
    }
    if n > MAX_SOLVER_QUBITS {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_SOLVER_QUBITS,
        });
    }
    let states = CACHE[n / 2 - 1].get_or_init(|| solve_nullspace(n)).clone();
    Ok(DfBasis {
        n_qubits: n,
        labels: (0..states.len()).map(|k| format!("v{k}")).collect(),
        states,
    })
}

fn solve_nullspace(n: usize) -> Vec<StateVector> {
    let m = stacked_spin_matrix(n);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, sv)| **sv < NULLSPACE_TOL)
        .map(|(row, _)| {
            // Rows of V† are conjugated right singular vectors.
            let amps: Vec<Complex64> = v_t.row(row).iter().map(|z| z.conj()).collect();
            StateVector::new(n, amps)
                .expect("solver size within capacity")
                .with_canonical_phase(CHOP)
        })
        .collect()
}

/// Orthonormal completion of `existing` inside the `n`-qubit DF subspace.
///
/// Seeds are the solver's basis vectors, swept with modified Gram-Schmidt
/// and one re-orthogonalization pass. Output vectors are phase-canonicalized.
pub fn complete_basis(existing: &[StateVector], n: usize) -> Result<Vec<StateVector>> {
    let basis = df_subspace_basis(n)?;
    for (k, psi) in existing.iter().enumerate() {
        if psi.n_qubits() != n {
            return Err(Error::Shape(format!(
                "input state {k} has {} qubits, expected {n}",
                psi.n_qubits()
            )));
        }
        let residual = spin_residuals(psi).into_iter().fold(0.0, f64::max);
        if residual >= PRECONDITION_TOL {
            return Err(Error::Precondition(format!(
                "input state {k} is not decoherence-free (spin residual {residual:.3e})"
            )));
        }
        for (j, other) in existing.iter().enumerate().take(k + 1) {
            let target = if j == k { 1.0 } else { 0.0 };
            let overlap = inner(other, psi)?;
            if (overlap - target).norm() >= PRECONDITION_TOL {
                return Err(Error::Precondition(format!(
                    "input states {j} and {k} are not orthonormal (overlap {overlap})"
                )));
            }
        }
    }
    let target = basis.states.len().saturating_sub(existing.len());
    let mut accepted: Vec<StateVector> = Vec::with_capacity(target);
    for seed in &basis.states {
        if accepted.len() == target {
            break;
        }
        let mut v = seed.clone();
        for _pass in 0..2 {
            for e in existing.iter().chain(&accepted) {
                let c = inner(e, &v)?;
                v = v.add_scaled(e, -c)?;
            }
        }
        if v.norm() < GS_DROP_TOL {
            continue;
        }
        accepted.push(v.normalized()?);
    }
    Ok(accepted
        .into_iter()
        .map(|v| {
            v.with_canonical_phase(CHOP)
                .normalized()
                .expect("nonzero after Gram-Schmidt")
        })
        .collect())
}

/// `(cos θ + e^{iφ} sin θ P_24 P_13) |0̄1̄1̄>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalEncoding {
    pub theta: f64,
    pub phi: f64,
}

impl LogicalEncoding {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn encode(&self) -> Result<StateVector> {
        encode_logical(*self)
    }
}

pub fn encode_logical(enc: LogicalEncoding) -> Result<StateVector> {
    let base = six_qubit_state("011")?;
    let p = QubitPermutation::product_of_transpositions(6, &[(2, 4), (1, 3)])?;
    let swapped = permute(&p, &base)?;
    let (s, c) = enc.theta.sin_cos();
    base.scaled(Complex64::new(c, 0.0))
        .add_scaled(&swapped, Complex64::from_polar(s, enc.phi))
}
