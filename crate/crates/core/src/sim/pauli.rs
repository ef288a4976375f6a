use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Sparse tensor product of single-qubit Paulis; absent qubits carry the
/// identity. The empty string is the identity operator.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString(BTreeMap<usize, Pauli>);

impl PauliString {
    pub fn identity() -> Self {
        PauliString::default()
    }

    pub fn new<I: IntoIterator<Item = (usize, Pauli)>>(ops: I) -> Self {
        PauliString(ops.into_iter().collect())
    }

    pub fn single(qubit: usize, op: Pauli) -> Self {
        PauliString::new([(qubit, op)])
    }

    /// Multiplies in another factor. Only disjoint supports are supported.
    pub fn with(mut self, qubit: usize, op: Pauli) -> Self {
        self.0.insert(qubit, op);
        self
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ops(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.0.iter().map(|(q, p)| (*q, *p))
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    /// Bit masks `(flip, sign, n_y)`: qubits flipped by X/Y, qubits whose
    /// value contributes a sign under Z/Y, and the number of Y factors.
    pub(crate) fn masks(&self) -> (usize, usize, u32) {
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut n_y = 0u32;
        for (&q, &p) in &self.0 {
            match p {
                Pauli::X => flip |= 1 << q,
                Pauli::Z => sign |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    sign |= 1 << q;
                    n_y += 1;
                }
            }
        }
        (flip, sign, n_y)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        let parts: Vec<String> = self.0.iter().map(|(q, p)| format!("{p:?}{q}")).collect();
        f.write_str(&parts.join(" "))
    }
}
