//! Decoherence-free multiqubit states under collective noise.
//!
//! * [`statevec`]: dense pure states, qubit permutations and `U^{⊗n}`.
//! * [`dfstates`]: the named 2-, 4-, 6- and 8-qubit DF states, the subspace
//!   solver and Gram-Schmidt completion.
//! * [`measurement`]: fixed Pauli-product readout and perfect discrimination.
//! * [`noise`]: Haar-random collective channels.
//! * [`bb84`]: the permutation-based BB84 simulator.
//! * [`dfvec`]: the `DFVEC v1` text format.

pub mod bb84;
pub mod catalog;
pub mod dfstates;
pub mod dfvec;
pub mod error;
pub mod measurement;
pub mod noise;
pub mod spin;
pub mod statevec;

pub use bb84::{
    build_protocol_states, mutually_unbiased_check, run_session, run_transcript, Basis, Eve,
    MubReport, ProtocolState, RoundRecord, SessionConfig, SessionStats,
};
pub use catalog::{all_labels, named_state};
pub use dfstates::{
    complete_basis, df_dimension, df_subspace_basis, eight_qubit_state, encode_logical,
    four_qubit_state, singlet, six_qubit_state, CoefficientRule, DfBasis, DimensionRecord,
    LogicalEncoding,
};
pub use error::{Error, Result};
pub use measurement::{
    discriminate, distribution, sample, verify_table1, Decision, Discrimination, Discriminator,
    MeasurementSetting, OutcomeDistribution, PauliBasis, Table1Report,
};
pub use noise::{apply_noise, haar_su2, invariance_score, NoiseKind, NoiseModel};
pub use spin::{collective_spin, is_decoherence_free, spin_residuals, SpinAxis};
pub use statevec::{
    apply_collective, apply_independent, fidelity, inner, permute, tensor, CollectiveUnitary,
    QubitPermutation, StateVector,
};
