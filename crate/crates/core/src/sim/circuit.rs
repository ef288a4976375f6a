use super::{Instruction, Result};

/// An ordered, validated list of instructions over a fixed register width.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    name: String,
    n_qubits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, n_qubits: usize) -> Self {
        Circuit {
            name: name.into(),
            n_qubits,
            instructions: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Appends `inst` after validating it against this circuit's width.
    pub fn push(&mut self, inst: Instruction) -> Result<&mut Self> {
        inst.validate(self.n_qubits)?;
        self.instructions.push(inst);
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = Instruction>>(&mut self, insts: I) -> Result<&mut Self> {
        for inst in insts {
            self.push(inst)?;
        }
        Ok(self)
    }

    /// Distinct measured qubits in order of first measurement. This is the
    /// column order of a [`super::Counts`] key.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for inst in &self.instructions {
            if let Instruction::Measure(q) = *inst {
                if !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        out
    }

    pub fn has_measurement(&self) -> bool {
        self.instructions.iter().any(Instruction::is_measure)
    }

    /// True when no unitary follows the first measurement, so the final
    /// distribution can be sampled directly.
    pub fn measurements_are_terminal(&self) -> bool {
        match self.instructions.iter().position(Instruction::is_measure) {
            Some(first) => self.instructions[first..]
                .iter()
                .all(Instruction::is_measure),
            None => true,
        }
    }

    /// The unitary prefix (everything before the first measurement).
    pub fn unitary_prefix(&self) -> &[Instruction] {
        let end = self
            .instructions
            .iter()
            .position(Instruction::is_measure)
            .unwrap_or(self.instructions.len());
        &self.instructions[..end]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SimError;

    #[test]
    fn push_validates() {
        let mut c = Circuit::new("t", 2);
        c.push(Instruction::H(0)).unwrap();
        assert_eq!(
            c.push(Instruction::X(2)).unwrap_err(),
            SimError::QubitOutOfRange {
                index: 2,
                n_qubits: 2
            }
        );
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn measured_qubits_keep_first_order() {
        let mut c = Circuit::new("m", 3);
        c.extend([
            Instruction::Measure(2),
            Instruction::H(0),
            Instruction::Measure(0),
            Instruction::Measure(2),
        ])
        .unwrap();
        assert_eq!(c.measured_qubits(), vec![2, 0]);
        assert!(!c.measurements_are_terminal());
        assert!(c.unitary_prefix().is_empty());
    }
}
