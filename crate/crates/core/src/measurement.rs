//! Fixed single-qubit Pauli-product measurements and disjoint-support
//! discrimination.
//!
//! Outcome bit convention, for both `z` and `x`: `0` is eigenvalue +1 and `1`
//! is eigenvalue −1. An `x` readout is a Hadamard on that qubit followed by a
//! computational-basis readout.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dfstates::{six_qubit_state, SIX_QUBIT_LABELS};
use crate::error::{Error, Result};
use crate::statevec::{bitstring, Mat2, QubitPermutation, StateVector};

/// Probabilities below this are outside a state's support.
pub const SUPPORT_TOL: f64 = 1e-12;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;
const HADAMARD: Mat2 = [
    [Complex64::new(H, 0.0), Complex64::new(H, 0.0)],
    [Complex64::new(H, 0.0), Complex64::new(-H, 0.0)],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliBasis {
    Z,
    X,
}

impl PauliBasis {
    fn symbol(self) -> char {
        match self {
            PauliBasis::Z => 'z',
            PauliBasis::X => 'x',
        }
    }
}

/// Per-qubit basis choice, written like `zzxxzz`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeasurementSetting {
    bases: Vec<PauliBasis>,
}

impl MeasurementSetting {
    pub fn new(bases: Vec<PauliBasis>) -> Self {
        Self { bases }
    }

    pub fn all_z(n: usize) -> Self {
        Self::new(vec![PauliBasis::Z; n])
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[PauliBasis] {
        &self.bases
    }

    /// The setting that measures `permute(p, ψ)` the way `self` measures `ψ`.
    pub fn permuted(&self, p: &QubitPermutation) -> Result<Self> {
        Ok(Self::new(p.permute_items(&self.bases)?))
    }

    fn check_len(&self, psi: &StateVector) -> Result<()> {
        if self.len() != psi.n_qubits() {
            return Err(Error::Shape(format!(
                "setting `{self}` has {} positions but the state has {} qubits",
                self.len(),
                psi.n_qubits()
            )));
        }
        Ok(())
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidSetting(s.to_owned()));
        }
        s.chars()
            .map(|c| match c {
                'z' | 'Z' => Ok(PauliBasis::Z),
                'x' | 'X' => Ok(PauliBasis::X),
                _ => Err(Error::InvalidSetting(s.to_owned())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bases.iter().try_for_each(|b| write!(f, "{}", b.symbol()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    pub setting: MeasurementSetting,
    /// Indexed by outcome bitstring (qubit 1 most significant).
    pub probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn prob(&self, outcome: &str) -> Result<f64> {
        if outcome.len() != self.setting.len() {
            return Err(Error::Shape(format!("outcome `{outcome}` has the wrong length")));
        }
        Ok(self.probs[crate::statevec::parse_bitstring(outcome)?])
    }

    /// Outcomes with probability at least [`SUPPORT_TOL`].
    pub fn support(&self) -> Vec<bool> {
        self.probs.iter().map(|p| *p >= SUPPORT_TOL).collect()
    }
}

pub fn distribution(s: &MeasurementSetting, psi: &StateVector) -> Result<OutcomeDistribution> {
    s.check_len(psi)?;
    let mut rotated = psi.clone();
    for (q, basis) in s.bases.iter().enumerate() {
        if *basis == PauliBasis::X {
            rotated.apply_single_in_place(q, &HADAMARD);
        }
    }
    let probs = rotated
        .amplitudes()
        .iter()
        .map(|a| a.norm_sqr().max(0.0))
        .collect();
    Ok(OutcomeDistribution {
        setting: s.clone(),
        probs,
    })
}

/// Draws one outcome index.
pub fn sample_one<R: Rng + ?Sized>(dist: &OutcomeDistribution, rng: &mut R) -> usize {
    WeightedIndex::new(&dist.probs)
        .expect("probabilities are finite, nonnegative and sum to one")
        .sample(rng)
}

/// `shots` i.i.d. outcome indices; deterministic for a given seed.
pub fn sample(
    s: &MeasurementSetting,
    psi: &StateVector,
    rng_seed: u64,
    shots: usize,
) -> Result<Vec<usize>> {
    if shots == 0 {
        return Err(Error::Domain("shots must be at least 1".into()));
    }
    let dist = distribution(s, psi)?;
    let weights = WeightedIndex::new(&dist.probs)
        .map_err(|e| Error::Domain(format!("state cannot be sampled: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    Ok((0..shots).map(|_| weights.sample(&mut rng)).collect())
}

/// [`sample`] with outcomes rendered as bitstrings.
pub fn sample_bitstrings(
    s: &MeasurementSetting,
    psi: &StateVector,
    rng_seed: u64,
    shots: usize,
) -> Result<Vec<String>> {
    let n = psi.n_qubits();
    Ok(sample(s, psi, rng_seed, shots)?
        .into_iter()
        .map(|k| bitstring(k, n))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    A,
    B,
    /// Outside both supports.
    Impossible,
}

/// Outcome-to-label map for a pair of states with disjoint supports.
#[derive(Clone, Debug, PartialEq)]
pub struct Discriminator {
    pub setting: MeasurementSetting,
    decisions: Vec<Decision>,
}

impl Discriminator {
    pub fn decide(&self, outcome: usize) -> Decision {
        self.decisions[outcome]
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Discrimination {
    Success(Discriminator),
    /// Supports overlap; carries `½ Σ_o max(p_a(o), p_b(o))`.
    Failure { success_probability: f64 },
}

impl Discrimination {
    pub fn is_success(&self) -> bool {
        matches!(self, Discrimination::Success(_))
    }
}

/// Perfect single-copy discrimination of `a` from `b` with a fixed setting.
pub fn discriminate(
    s: &MeasurementSetting,
    a: &StateVector,
    b: &StateVector,
) -> Result<Discrimination> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::Shape(format!(
            "{}-qubit and {}-qubit states",
            a.n_qubits(),
            b.n_qubits()
        )));
    }
    let pa = distribution(s, a)?;
    let pb = distribution(s, b)?;
    let overlapping = pa
        .probs
        .iter()
        .zip(&pb.probs)
        .any(|(x, y)| x.min(*y) >= SUPPORT_TOL);
    if overlapping {
        let success_probability = 0.5
            * pa.probs
                .iter()
                .zip(&pb.probs)
                .map(|(x, y)| x.max(*y))
                .sum::<f64>();
        return Ok(Discrimination::Failure {
            success_probability,
        });
    }
    let decisions = pa
        .probs
        .iter()
        .zip(&pb.probs)
        .map(|(x, y)| {
            if *x >= SUPPORT_TOL {
                Decision::A
            } else if *y >= SUPPORT_TOL {
                Decision::B
            } else {
                Decision::Impossible
            }
        })
        .collect();
    Ok(Discrimination::Success(Discriminator {
        setting: s.clone(),
        decisions,
    }))
}

/// The printed settings distinguishing each pair of 6-qubit basis states.
pub const TABLE1: [(&str, &str, &str); 10] = [
    ("000", "011", "zzxxzz"),
    ("000", "101", "zzzzxx"),
    ("000", "110", "xxzzzz"),
    ("000", "111", "zzzzzz"),
    ("011", "101", "zzxxzz"),
    ("011", "110", "zzzzxx"),
    ("011", "111", "xxzzzz"),
    ("101", "110", "zzxxzz"),
    ("101", "111", "zzxxzz"),
    ("110", "111", "zzzzxx"),
];

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Row {
    pub label_a: String,
    pub label_b: String,
    pub setting: MeasurementSetting,
    pub passed: bool,
    /// Largest per-outcome `min(p_a, p_b)`; zero (to rounding) on a pass.
    pub max_overlap: f64,
    /// Single-shot success probability on a failure.
    pub success_probability: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
}

impl Table1Report {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.passed).count()
    }

    pub fn total(&self) -> usize {
        self.rows.len()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.total()
    }
}

impl fmt::Display for Table1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            let diagnostic = match r.success_probability {
                Some(p) => format!("success_probability={p:.12}"),
                None => format!("max_overlap={:.3e}", r.max_overlap),
            };
            writeln!(
                f,
                "{} {} {} {verdict} {diagnostic}",
                r.label_a, r.label_b, r.setting
            )?;
        }
        write!(f, "table1 {} {}", self.passed(), self.total())
    }
}

/// Runs [`discriminate`] on every pair of the 6-qubit basis with its printed setting.
pub fn verify_table1() -> Result<Table1Report> {
    debug_assert_eq!(SIX_QUBIT_LABELS.len() * (SIX_QUBIT_LABELS.len() - 1) / 2, TABLE1.len());
    let rows = TABLE1
        .iter()
        .map(|&(la, lb, setting)| {
            let setting: MeasurementSetting = setting.parse()?;
            let a = six_qubit_state(la)?;
            let b = six_qubit_state(lb)?;
            let pa = distribution(&setting, &a)?;
            let pb = distribution(&setting, &b)?;
            let max_overlap = pa
                .probs
                .iter()
                .zip(&pb.probs)
                .map(|(x, y)| x.min(*y))
                .fold(0.0, f64::max);
            let outcome = discriminate(&setting, &a, &b)?;
            let success_probability = match outcome {
                Discrimination::Success(_) => None,
                Discrimination::Failure {
                    success_probability,
                } => Some(success_probability),
            };
            Ok(Table1Row {
                label_a: la.to_owned(),
                label_b: lb.to_owned(),
                setting,
                passed: success_probability.is_none(),
                max_overlap,
                success_probability,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table1Report { rows })
}
