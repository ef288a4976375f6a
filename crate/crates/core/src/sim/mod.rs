//! Dense state-vector simulator.
//!
//! Qubit 0 is the least significant bit of an amplitude index. Measurement
//! keys in [`Counts`] list measured qubits in the order they were first
//! measured, so a Bell circuit measuring `q0` then `q1` prints `q0` leftmost.
//!
//! Three levels of parallelism are available:
//!
//! - inner: gate application fans out over amplitude chunks on a private
//!   rayon pool ([`InnerParallelism`]),
//! - shot: independent shots are split across scoped threads
//!   ([`ShotRunner`]),
//! - task: handled one layer up, in [`crate::runtime`].
//!
//! All three are deterministic: a fixed seed gives bit-identical counts no
//! matter how many workers participate.

mod circuit;
mod counts;
mod instruction;
mod parallel;
mod pauli;
mod shots;
mod state;

pub use circuit::Circuit;
pub use counts::Counts;
pub use instruction::{GateKind, Instruction};
pub use parallel::InnerParallelism;
pub use pauli::{Pauli, PauliString};
pub use shots::{run_shots, shot_rng, SamplingStrategy, ShotRunner};
pub use state::StateVector;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("instruction {0} uses the same qubit more than once")]
    DuplicateQubit(String),
    #[error("modular multiplier {a} is not coprime to modulus {modulus}")]
    NotCoprime { a: u64, modulus: u64 },
    #[error("invalid modular multiplication: {0}")]
    InvalidModMul(String),
    #[error("measurement must go through measure(), not apply()")]
    MeasureNotUnitary,
    #[error("shot count must be positive")]
    ZeroShots,
    #[error("circuit '{0}' contains no Measure instruction")]
    NoMeasurement(String),
    #[error("amplitude vector of length {0} is not a power of two")]
    BadLength(usize),
    #[error("amplitude vector is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("failed to build worker pool: {0}")]
    Pool(String),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
