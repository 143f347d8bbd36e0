//! Collective-noise channels: Haar-random `U^{⊗n}`, a fixed rotation, and an
//! independent per-qubit control channel.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::statevec::{apply_collective, apply_independent, fidelity, CollectiveUnitary, StateVector};

/// Haar-random SU(2) element `[[α, −β*], [β, α*]]` from a caller-supplied RNG.
pub fn haar_su2_from<R: Rng + ?Sized>(rng: &mut R) -> CollectiveUnitary {
    loop {
        let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            continue;
        }
        let alpha = Complex64::new(g[0], g[1]) / norm;
        let beta = Complex64::new(g[2], g[3]) / norm;
        return CollectiveUnitary::from_su2_unchecked([
            [alpha, -beta.conj()],
            [beta, alpha.conj()],
        ]);
    }
}

pub fn haar_su2(rng_seed: u64) -> CollectiveUnitary {
    haar_su2_from(&mut ChaCha8Rng::seed_from_u64(rng_seed))
}

#[derive(Clone, Debug, PartialEq)]
pub enum NoiseKind {
    None,
    CollectiveHaar,
    CollectiveFixed(CollectiveUnitary),
    IndependentHaar,
}

/// A noise channel plus whether protocol runs draw it afresh each round.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub per_round: bool,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind) -> Self {
        Self {
            kind,
            per_round: true,
        }
    }

    pub fn none() -> Self {
        Self::new(NoiseKind::None)
    }

    pub fn collective_haar() -> Self {
        Self::new(NoiseKind::CollectiveHaar)
    }

    pub fn independent_haar() -> Self {
        Self::new(NoiseKind::IndependentHaar)
    }

    pub fn with_per_round(mut self, per_round: bool) -> Self {
        self.per_round = per_round;
        self
    }

    pub fn is_collective(&self) -> bool {
        matches!(
            self.kind,
            NoiseKind::None | NoiseKind::CollectiveHaar | NoiseKind::CollectiveFixed(_)
        )
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::none()
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    /// `none`, `collective-haar`, `independent-haar`, or
    /// `collective-fixed:<8 floats>` giving re/im of `u00, u01, u10, u11`
    /// (comma or whitespace separated).
    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim() {
            "none" => NoiseKind::None,
            "collective-haar" => NoiseKind::CollectiveHaar,
            "independent-haar" => NoiseKind::IndependentHaar,
            other => {
                let body = other
                    .strip_prefix("collective-fixed:")
                    .ok_or_else(|| Error::InvalidNoiseModel(s.to_owned()))?;
                let nums = body
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidNoiseModel(s.to_owned()))?;
                let [a, b, c, d, e, f, g, h] = nums[..] else {
                    return Err(Error::InvalidNoiseModel(format!(
                        "{s}: expected 8 numbers, found {}",
                        nums.len()
                    )));
                };
                NoiseKind::CollectiveFixed(CollectiveUnitary::new([
                    [Complex64::new(a, b), Complex64::new(c, d)],
                    [Complex64::new(e, f), Complex64::new(g, h)],
                ])?)
            }
        };
        Ok(Self::new(kind))
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NoiseKind::None => write!(f, "none"),
            NoiseKind::CollectiveHaar => write!(f, "collective-haar"),
            NoiseKind::IndependentHaar => write!(f, "independent-haar"),
            NoiseKind::CollectiveFixed(u) => {
                let m = u.matrix();
                write!(
                    f,
                    "collective-fixed:{},{},{},{},{},{},{},{}",
                    m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im,
                    m[1][1].re, m[1][1].im
                )
            }
        }
    }
}

/// Passes `psi` through the channel. Random kinds draw from `rng`.
pub fn apply_noise_with<R: Rng + ?Sized>(
    m: &NoiseModel,
    psi: &StateVector,
    rng: &mut R,
) -> StateVector {
    match &m.kind {
        NoiseKind::None => psi.clone(),
        NoiseKind::CollectiveHaar => apply_collective(&haar_su2_from(rng), psi),
        NoiseKind::CollectiveFixed(u) => apply_collective(u, psi),
        NoiseKind::IndependentHaar => {
            let us: Vec<_> = (0..psi.n_qubits()).map(|_| haar_su2_from(rng)).collect();
            apply_independent(&us, psi).expect("one unitary per qubit")
        }
    }
}

pub fn apply_noise(m: &NoiseModel, psi: &StateVector, rng_seed: u64) -> StateVector {
    apply_noise_with(m, psi, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}

/// Minimum of `|<ψ|N(ψ)>|` over `trials` draws of the channel; trial `t`
/// uses seed `rng_seed + t`.
pub fn invariance_score_with(
    m: &NoiseModel,
    psi: &StateVector,
    trials: usize,
    rng_seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    (0..trials as u64)
        .map(|t| {
            let out = apply_noise(m, psi, rng_seed.wrapping_add(t));
            fidelity(psi, &out)
        })
        .try_fold(f64::INFINITY, |acc, f| f.map(|f| acc.min(f)))
}

/// [`invariance_score_with`] under Haar-random collective noise.
pub fn invariance_score(psi: &StateVector, trials: usize, rng_seed: u64) -> Result<f64> {
    invariance_score_with(&NoiseModel::collective_haar(), psi, trials, rng_seed)
}
