//! Workloads built on the simulator and runtime: the Bell kernel, Shor
//! order finding (serial and task-parallel drivers) and a one-parameter
//! deuteron VQE.

mod bell;
mod hamiltonian;
mod order;
mod qft;
mod shor;
mod vqe;

pub use bell::bell_kernel;
pub use hamiltonian::{deuteron_hamiltonian, Hamiltonian};
pub use order::{continued_fraction_denominators, estimate_order, modpow, OrderEstimate};
pub use qft::{inverse_qft, qft};
pub use shor::{
    counting_value, shor_attempt, shor_factor, shor_kernel, AttemptOutcome, AttemptReport,
    ShorConfig, ShorMode, ShorParams, ShorResult,
};
pub use vqe::{
    ansatz, vqe_minimize, GradientDescent, Objective, OptResult, Optimizer, VqeConfig, VqeObjective,
};

use crate::runtime::RuntimeError;
use crate::sim::SimError;

#[derive(Debug, thiserror::Error)]
pub enum AlgoError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("base {a} shares a factor with {n}")]
    NotCoprime { a: u64, n: u64 },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

pub type Result<T, E = AlgoError> = std::result::Result<T, E>;
