//! A small text format for kernels (`.xqk` files).
//!
//! ```text
//! // Bell pair
//! kernel bell(q) {
//!     H(q[0]);
//!     CX(q[0], q[1]);
//!     for i in 0..q.size() {
//!         Measure(q[i]);
//!     }
//! }
//! ```
//!
//! The first parameter names the qubit register, optionally with a fixed
//! size (`q[2]`); any further parameters are real scalars. Statements are
//! gate calls using the [`GateKind`](crate::sim::GateKind) names, or
//! half-open counted loops whose bounds are integers or `q.size()`.
//! Qubit indices may be `q[3]`, `q[i]`, `q[i + 1]` or `q[i - 1]`. Scalar
//! arguments are expressions over literals, `pi`, scalar parameters and
//! loop variables with `+ - * /` and parentheses.
//!
//! [`parse_kernel`] checks syntax, gate names and argument shapes, and name
//! binding. [`lower`] unrolls loops against a concrete register size and
//! argument list.

mod ast;
mod lexer;
mod lower;
mod parser;
mod pretty;

use std::fmt;

pub use ast::{
    Arg, BinOp, Bound, Expr, ForLoop, GateCall, Index, KernelSource, QubitRef, Register, Span, Stmt,
};
pub use lower::lower;
pub use parser::parse_kernel;

use crate::sim::SimError;

/// Shipped Bell kernel source.
pub const BELL_SOURCE: &str = include_str!("../../kernels/bell.xqk");
/// Shipped one-parameter VQE ansatz source.
pub const ANSATZ_SOURCE: &str = include_str!("../../kernels/ansatz.xqk");

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DslError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { msg: String, pos: Pos },
    #[error("{pos}: unknown gate '{name}'")]
    UnknownGate { name: String, pos: Pos },
    #[error("{pos}: unbound identifier '{name}'")]
    UnboundIdentifier { name: String, pos: Pos },
    #[error("{pos}: bad arguments to {gate}: {msg}")]
    BadArguments { gate: String, msg: String, pos: Pos },
    #[error("kernel takes {expected} scalar argument(s), got {got}")]
    Arity { expected: usize, got: usize },
    #[error("register declared with {declared} qubits, lowered with {given}")]
    SizeMismatch { declared: usize, given: usize },
    #[error("{pos}: qubit index {index} out of bounds for register of size {size}")]
    IndexOutOfBounds { index: i64, size: usize, pos: Pos },
    #[error("{pos}: {msg}")]
    BadValue { msg: String, pos: Pos },
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl DslError {
    /// Position of the offending token, when the error has one.
    pub fn pos(&self) -> Option<Pos> {
        match self {
            DslError::Syntax { pos, .. }
            | DslError::UnknownGate { pos, .. }
            | DslError::UnboundIdentifier { pos, .. }
            | DslError::BadArguments { pos, .. }
            | DslError::IndexOutOfBounds { pos, .. }
            | DslError::BadValue { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

pub type Result<T, E = DslError> = std::result::Result<T, E>;
