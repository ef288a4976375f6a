use std::fmt;

use crate::sim::{Pauli, PauliString, Result, StateVector};

/// Real-weighted sum of Pauli strings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Hamiltonian {
    terms: Vec<(f64, PauliString)>,
}

impl Hamiltonian {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Self {
        Hamiltonian { terms }
    }

    pub fn add_term(&mut self, coeff: f64, term: PauliString) -> &mut Self {
        self.terms.push((coeff, term));
        self
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest register that every term fits in.
    pub fn n_qubits(&self) -> usize {
        self.terms
            .iter()
            .filter_map(|(_, p)| p.max_qubit())
            .max()
            .map_or(0, |q| q + 1)
    }

    /// `<psi|H|psi>`, evaluated term by term.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        let mut total = 0.0;
        for (c, p) in &self.terms {
            total += c * state.expectation(p)?;
        }
        Ok(total)
    }
}

impl fmt::Display for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if *c < 0.0 { " - " } else { " + " })?;
            } else if *c < 0.0 {
                f.write_str("-")?;
            }
            write!(f, "{}", c.abs())?;
            if !p.is_identity() {
                write!(f, " {p}")?;
            }
        }
        Ok(())
    }
}

/// Two-qubit deuteron Hamiltonian:
/// `5.907 - 2.1433 X0X1 - 2.1433 Y0Y1 + 0.21829 Z0 - 6.125 Z1`.
pub fn deuteron_hamiltonian() -> Hamiltonian {
    use Pauli::{X, Y, Z};
    Hamiltonian::new(vec![
        (5.907, PauliString::identity()),
        (-2.1433, PauliString::new([(0, X), (1, X)])),
        (-2.1433, PauliString::new([(0, Y), (1, Y)])),
        (0.21829, PauliString::single(0, Z)),
        (-6.125, PauliString::single(1, Z)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_terms_on_two_qubits() {
        let h = deuteron_hamiltonian();
        assert_eq!(h.len(), 5);
        assert_eq!(h.n_qubits(), 2);
    }

    #[test]
    fn diagonal_on_zero_state() {
        let e = deuteron_hamiltonian()
            .expectation(&StateVector::new(2))
            .unwrap();
        assert!((e - 0.00029).abs() < 1e-12, "{e}");
    }

    #[test]
    fn display_reads_back_signs() {
        let s = deuteron_hamiltonian().to_string();
        assert!(s.starts_with("5.907 - 2.1433"), "{s}");
        assert!(s.contains("+ 0.21829"), "{s}");
    }
}
