//! BB84 over permutations of one 6-qubit DF state.
//!
//! Alice's four signals are `|0̂> = |0̄1̄1̄>`, `|⊕̂> = P_13|0̂>`,
//! `|1̂> = P_24|⊕̂>` and `|⊖̂> = P_13|1̂>`. Bob reads the computational basis
//! with `zzxxzz` and the Hadamard basis with `xzzxzz`.
//!
//! Channel order per round: Alice, then noise, then Eve (if present), then
//! Bob. Eve resends the canonical signal for her inferred (bit, basis).
//! Outcomes outside both supports decode to a fair coin and are flagged.
//!
//! Note that the cross-basis overlaps of these signals are `1/4`, not `1/2`:
//! `⊕̂` and `⊖̂` carry half their weight outside `span{0̂, 1̂}`. See
//! [`mutually_unbiased_check`]. Eve's wrong-basis readout is nevertheless
//! independent of Alice's bit, so her wrong-basis disturbance is still `1/2`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dfstates::six_qubit_state;
use crate::error::{Error, Result};
use crate::measurement::{
    discriminate, distribution, sample_one, Decision, Discrimination, Discriminator,
    MeasurementSetting,
};
use crate::noise::{apply_noise_with, haar_su2_from, NoiseKind, NoiseModel};
use crate::statevec::{
    apply_collective, apply_independent, inner, permute, CollectiveUnitary, QubitPermutation,
    StateVector,
};

pub const COMPUTATIONAL_SETTING: &str = "zzxxzz";
pub const HADAMARD_SETTING: &str = "xzzxzz";

const OVERLAP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Computational,
    Hadamard,
}

impl Basis {
    fn from_bit(b: bool) -> Self {
        if b {
            Basis::Hadamard
        } else {
            Basis::Computational
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::Computational => "computational",
            Basis::Hadamard => "hadamard",
        }
    }
}

/// The four signal states, Bob's two settings, and their discriminators.
#[derive(Clone, Debug)]
pub struct ProtocolState {
    pub comp0: StateVector,
    pub had_plus: StateVector,
    pub comp1: StateVector,
    pub had_minus: StateVector,
    pub comp_setting: MeasurementSetting,
    pub had_setting: MeasurementSetting,
    pub comp_disc: Discriminator,
    pub had_disc: Discriminator,
}

/// Outcome of one fixed-setting readout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reading {
    pub bit: u8,
    /// The outcome lay outside both supports and `bit` is a coin flip.
    pub flagged: bool,
}

impl ProtocolState {
    pub fn signal(&self, bit: u8, basis: Basis) -> &StateVector {
        match (basis, bit) {
            (Basis::Computational, 0) => &self.comp0,
            (Basis::Computational, _) => &self.comp1,
            (Basis::Hadamard, 0) => &self.had_plus,
            (Basis::Hadamard, _) => &self.had_minus,
        }
    }

    pub fn setting(&self, basis: Basis) -> &MeasurementSetting {
        match basis {
            Basis::Computational => &self.comp_setting,
            Basis::Hadamard => &self.had_setting,
        }
    }

    pub fn discriminator(&self, basis: Basis) -> &Discriminator {
        match basis {
            Basis::Computational => &self.comp_disc,
            Basis::Hadamard => &self.had_disc,
        }
    }

    /// Measures `psi` with `basis`'s fixed setting and decodes the outcome.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        basis: Basis,
        psi: &StateVector,
        rng: &mut R,
    ) -> Result<Reading> {
        let dist = distribution(self.setting(basis), psi)?;
        let outcome = sample_one(&dist, rng);
        Ok(match self.discriminator(basis).decide(outcome) {
            Decision::A => Reading {
                bit: 0,
                flagged: false,
            },
            Decision::B => Reading {
                bit: 1,
                flagged: false,
            },
            Decision::Impossible => Reading {
                bit: rng.random::<bool>() as u8,
                flagged: true,
            },
        })
    }
}

/// Builds the four signals from `|0̄1̄1̄>` by qubit permutations alone.
pub fn build_protocol_states() -> Result<ProtocolState> {
    let p13 = QubitPermutation::transposition(6, 1, 3)?;
    let p24 = QubitPermutation::transposition(6, 2, 4)?;
    let comp0 = six_qubit_state("011")?;
    let had_plus = permute(&p13, &comp0)?;
    let comp1 = permute(&p24, &had_plus)?;
    let had_minus = permute(&p13, &comp1)?;

    let comp_setting: MeasurementSetting = COMPUTATIONAL_SETTING.parse()?;
    let had_setting: MeasurementSetting = HADAMARD_SETTING.parse()?;
    let comp_disc = match discriminate(&comp_setting, &comp0, &comp1)? {
        Discrimination::Success(d) => d,
        Discrimination::Failure { .. } => {
            return Err(Error::NoDiscriminator {
                basis: Basis::Computational.name(),
            })
        }
    };
    let had_disc = match discriminate(&had_setting, &had_plus, &had_minus)? {
        Discrimination::Success(d) => d,
        Discrimination::Failure { .. } => {
            return Err(Error::NoDiscriminator {
                basis: Basis::Hadamard.name(),
            })
        }
    };
    Ok(ProtocolState {
        comp0,
        had_plus,
        comp1,
        had_minus,
        comp_setting,
        had_setting,
        comp_disc,
        had_disc,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Eve {
    #[default]
    None,
    InterceptResend,
}

impl std::str::FromStr for Eve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Eve::None),
            "intercept" | "intercept-resend" => Ok(Eve::InterceptResend),
            _ => Err(Error::Domain(format!(
                "unknown eavesdropper `{s}` (expected none|intercept)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionConfig {
    pub rounds: usize,
    pub noise: NoiseModel,
    pub eve: Eve,
    pub rng_seed: u64,
}

impl SessionConfig {
    pub fn new(rounds: usize, noise: NoiseModel, eve: Eve, rng_seed: u64) -> Self {
        Self {
            rounds,
            noise,
            eve,
            rng_seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::Domain("rounds must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EveRecord {
    pub basis: Basis,
    pub reading: Reading,
}

/// Everything that happened in one transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub alice_bit: u8,
    pub alice_basis: Basis,
    pub eve: Option<EveRecord>,
    pub bob_basis: Basis,
    pub bob: Reading,
}

impl RoundRecord {
    pub fn sifted(&self) -> bool {
        self.alice_basis == self.bob_basis
    }

    pub fn is_error(&self) -> bool {
        self.sifted() && self.alice_bit != self.bob.bit
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionStats {
    pub rounds_sent: usize,
    pub rounds_sifted: usize,
    pub sifted_fraction: f64,
    pub errors_in_sifted: usize,
    pub qber: f64,
    /// QBER over sifted rounds in which Eve guessed the wrong basis.
    pub qber_given_eve_wrong_basis: Option<f64>,
    /// Sifted rounds whose readout fell outside both supports.
    pub flagged_in_sifted: usize,
    pub raw_key_alice: Vec<u8>,
    pub raw_key_bob: Vec<u8>,
}

impl SessionStats {
    pub fn from_transcript(rounds: &[RoundRecord]) -> Self {
        let sifted: Vec<&RoundRecord> = rounds.iter().filter(|r| r.sifted()).collect();
        let errors = sifted.iter().filter(|r| r.is_error()).count();
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let has_eve = rounds.iter().any(|r| r.eve.is_some());
        let qber_given_eve_wrong_basis = has_eve.then(|| {
            let wrong: Vec<_> = sifted
                .iter()
                .filter(|r| r.eve.is_some_and(|e| e.basis != r.alice_basis))
                .collect();
            ratio(wrong.iter().filter(|r| r.is_error()).count(), wrong.len())
        });
        SessionStats {
            rounds_sent: rounds.len(),
            rounds_sifted: sifted.len(),
            sifted_fraction: ratio(sifted.len(), rounds.len()),
            errors_in_sifted: errors,
            qber: ratio(errors, sifted.len()),
            qber_given_eve_wrong_basis,
            flagged_in_sifted: sifted.iter().filter(|r| r.bob.flagged).count(),
            raw_key_alice: sifted.iter().map(|r| r.alice_bit).collect(),
            raw_key_bob: sifted.iter().map(|r| r.bob.bit).collect(),
        }
    }
}

/// A channel realization held fixed for a whole session.
enum StaticChannel {
    Identity,
    Collective(CollectiveUnitary),
    Independent(Vec<CollectiveUnitary>),
}

impl StaticChannel {
    fn draw(model: &NoiseModel, n_qubits: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        match &model.kind {
            NoiseKind::None => StaticChannel::Identity,
            NoiseKind::CollectiveFixed(u) => StaticChannel::Collective(*u),
            NoiseKind::CollectiveHaar => StaticChannel::Collective(haar_su2_from(&mut rng)),
            NoiseKind::IndependentHaar => StaticChannel::Independent(
                (0..n_qubits).map(|_| haar_su2_from(&mut rng)).collect(),
            ),
        }
    }

    fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        match self {
            StaticChannel::Identity => Ok(psi.clone()),
            StaticChannel::Collective(u) => Ok(apply_collective(u, psi)),
            StaticChannel::Independent(us) => apply_independent(us, psi),
        }
    }
}

fn coin_basis<R: Rng + ?Sized>(rng: &mut R) -> Basis {
    Basis::from_bit(rng.random::<bool>())
}

fn simulate_round(
    protocol: &ProtocolState,
    cfg: &SessionConfig,
    fixed: Option<&StaticChannel>,
    round: u64,
) -> Result<RoundRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(round);

    let alice_bit = rng.random::<bool>() as u8;
    let alice_basis = coin_basis(&mut rng);
    let sent = protocol.signal(alice_bit, alice_basis);
    let mut in_flight = match fixed {
        Some(channel) => channel.apply(sent)?,
        None => apply_noise_with(&cfg.noise, sent, &mut rng),
    };

    let eve = match cfg.eve {
        Eve::None => None,
        Eve::InterceptResend => {
            let basis = coin_basis(&mut rng);
            let reading = protocol.measure(basis, &in_flight, &mut rng)?;
            in_flight = protocol.signal(reading.bit, basis).clone();
            Some(EveRecord { basis, reading })
        }
    };

    let bob_basis = coin_basis(&mut rng);
    let bob = protocol.measure(bob_basis, &in_flight, &mut rng)?;
    Ok(RoundRecord {
        alice_bit,
        alice_basis,
        eve,
        bob_basis,
        bob,
    })
}

/// Full per-round record of a session. Round `r` draws from ChaCha stream `r`
/// of the master seed, so the result does not depend on scheduling.
pub fn run_transcript(cfg: &SessionConfig) -> Result<Vec<RoundRecord>> {
    cfg.validate()?;
    let protocol = build_protocol_states()?;
    let fixed = (!cfg.noise.per_round)
        .then(|| StaticChannel::draw(&cfg.noise, protocol.comp0.n_qubits(), cfg.rng_seed));
    (0..cfg.rounds as u64)
        .into_par_iter()
        .map(|r| simulate_round(&protocol, cfg, fixed.as_ref(), r))
        .collect()
}

pub fn run_session(cfg: &SessionConfig) -> Result<SessionStats> {
    run_transcript(cfg).map(|t| SessionStats::from_transcript(&t))
}

/// Overlaps between and within the two signal bases.
#[derive(Clone, Debug, PartialEq)]
pub struct MubReport {
    /// `|<had_j|comp_i>|²`; rows `0̂, 1̂`, columns `⊕̂, ⊖̂`.
    pub cross: [[f64; 2]; 2],
    /// `|<0̂|1̂>|²` and `|<⊕̂|⊖̂>|²`.
    pub within: [f64; 2],
    /// `<ψ|ψ>` for `0̂, ⊕̂, 1̂, ⊖̂`.
    pub norms: [f64; 4],
}

impl MubReport {
    pub fn orthonormal(&self) -> bool {
        self.within.iter().all(|w| *w < OVERLAP_TOL)
            && self.norms.iter().all(|n| (n - 1.0).abs() < OVERLAP_TOL)
    }

    pub fn mutually_unbiased(&self) -> bool {
        self.cross.iter().flatten().all(|c| (c - 0.5).abs() < OVERLAP_TOL)
    }
}

impl fmt::Display for MubReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "           |<+^|.>|^2      |<-^|.>|^2")?;
        for (name, row) in ["0^", "1^"].iter().zip(&self.cross) {
            writeln!(f, "{name:>8}   {:<14.12} {:<14.12}", row[0], row[1])?;
        }
        writeln!(
            f,
            "within: |<0^|1^>|^2 = {:.3e}, |<+^|-^>|^2 = {:.3e}",
            self.within[0], self.within[1]
        )?;
        write!(
            f,
            "orthonormal={} mutually_unbiased={}",
            self.orthonormal(),
            self.mutually_unbiased()
        )
    }
}

pub fn mutually_unbiased_check() -> Result<MubReport> {
    let p = build_protocol_states()?;
    let sq = |a: &StateVector, b: &StateVector| inner(a, b).map(|z| z.norm_sqr());
    Ok(MubReport {
        cross: [
            [sq(&p.had_plus, &p.comp0)?, sq(&p.had_minus, &p.comp0)?],
            [sq(&p.had_plus, &p.comp1)?, sq(&p.had_minus, &p.comp1)?],
        ],
        within: [sq(&p.comp0, &p.comp1)?, sq(&p.had_plus, &p.had_minus)?],
        norms: [
            p.comp0.norm_sqr(),
            p.had_plus.norm_sqr(),
            p.comp1.norm_sqr(),
            p.had_minus.norm_sqr(),
        ],
    })
}
