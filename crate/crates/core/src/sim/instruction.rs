use std::fmt;

use super::{Result, SimError};

/// Gate vocabulary, used for display and DSL name lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    Rx,
    Ry,
    Rz,
    CX,
    CZ,
    CPhase,
    Swap,
    Measure,
    CModMul,
}

impl GateKind {
    pub const ALL: [GateKind; 15] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::T,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::CX,
        GateKind::CZ,
        GateKind::CPhase,
        GateKind::Swap,
        GateKind::Measure,
        GateKind::CModMul,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::Rx => "Rx",
            GateKind::Ry => "Ry",
            GateKind::Rz => "Rz",
            GateKind::CX => "CX",
            GateKind::CZ => "CZ",
            GateKind::CPhase => "CPhase",
            GateKind::Swap => "SWAP",
            GateKind::Measure => "Measure",
            GateKind::CModMul => "CModMul",
        }
    }

    /// Case-sensitive lookup.
    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One step of a circuit.
///
/// Rotation angles are in radians. `CModMul` multiplies the integer held in
/// the work register `work_start..work_start + work_len` by `a` modulo
/// `modulus` whenever `control` is set; work values `>= modulus` are left
/// untouched so the map stays a permutation.
#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    T(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    CX {
        control: usize,
        target: usize,
    },
    CZ {
        control: usize,
        target: usize,
    },
    CPhase {
        control: usize,
        target: usize,
        angle: f64,
    },
    Swap(usize, usize),
    Measure(usize),
    CModMul {
        control: usize,
        work_start: usize,
        work_len: usize,
        a: u64,
        modulus: u64,
    },
}

impl Instruction {
    pub fn kind(&self) -> GateKind {
        match self {
            Instruction::H(_) => GateKind::H,
            Instruction::X(_) => GateKind::X,
            Instruction::Y(_) => GateKind::Y,
            Instruction::Z(_) => GateKind::Z,
            Instruction::S(_) => GateKind::S,
            Instruction::T(_) => GateKind::T,
            Instruction::Rx(..) => GateKind::Rx,
            Instruction::Ry(..) => GateKind::Ry,
            Instruction::Rz(..) => GateKind::Rz,
            Instruction::CX { .. } => GateKind::CX,
            Instruction::CZ { .. } => GateKind::CZ,
            Instruction::CPhase { .. } => GateKind::CPhase,
            Instruction::Swap(..) => GateKind::Swap,
            Instruction::Measure(_) => GateKind::Measure,
            Instruction::CModMul { .. } => GateKind::CModMul,
        }
    }

    /// Every qubit the instruction touches, control first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Instruction::H(q)
            | Instruction::X(q)
            | Instruction::Y(q)
            | Instruction::Z(q)
            | Instruction::S(q)
            | Instruction::T(q)
            | Instruction::Rx(q, _)
            | Instruction::Ry(q, _)
            | Instruction::Rz(q, _)
            | Instruction::Measure(q) => vec![q],
            Instruction::CX { control, target }
            | Instruction::CZ { control, target }
            | Instruction::CPhase {
                control, target, ..
            } => vec![control, target],
            Instruction::Swap(a, b) => vec![a, b],
            Instruction::CModMul {
                control,
                work_start,
                work_len,
                ..
            } => std::iter::once(control)
                .chain(work_start..work_start + work_len)
                .collect(),
        }
    }

    pub fn is_measure(&self) -> bool {
        matches!(self, Instruction::Measure(_))
    }

    /// Checks qubit bounds, distinctness and the `CModMul` arithmetic
    /// preconditions against a register of `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for &q in &qubits {
            if q >= n_qubits {
                return Err(SimError::QubitOutOfRange { index: q, n_qubits });
            }
        }
        let mut seen = qubits.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != qubits.len() {
            return Err(SimError::DuplicateQubit(self.to_string()));
        }
        if let Instruction::CModMul {
            work_len,
            a,
            modulus,
            ..
        } = *self
        {
            if work_len == 0 || work_len >= 63 {
                return Err(SimError::InvalidModMul(format!(
                    "work register width {work_len} must be in 1..63"
                )));
            }
            if modulus < 2 || modulus > (1u64 << work_len) {
                return Err(SimError::InvalidModMul(format!(
                    "modulus {modulus} does not fit a {work_len}-qubit work register"
                )));
            }
            if gcd(a % modulus, modulus) != 1 {
                return Err(SimError::NotCoprime { a, modulus });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instruction::Rx(q, t) | Instruction::Ry(q, t) | Instruction::Rz(q, t) => {
                write!(f, "{}(q[{q}], {t})", self.kind())
            }
            Instruction::CPhase {
                control,
                target,
                angle,
            } => write!(f, "CPhase(q[{control}], q[{target}], {angle})"),
            Instruction::CModMul {
                control,
                work_start,
                work_len,
                a,
                modulus,
            } => write!(
                f,
                "CModMul(q[{control}], q[{work_start}], {work_len}, {a}, {modulus})"
            ),
            _ => {
                let args: Vec<String> = self.qubits().iter().map(|q| format!("q[{q}]")).collect();
                write!(f, "{}({})", self.kind(), args.join(", "))
            }
        }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in GateKind::ALL {
            assert_eq!(GateKind::from_name(k.name()), Some(k));
        }
        assert_eq!(GateKind::from_name("cx"), None);
        assert_eq!(GateKind::from_name("Foo"), None);
    }

    #[test]
    fn validate_rejects_bad_indices() {
        assert_eq!(
            Instruction::H(2).validate(2),
            Err(SimError::QubitOutOfRange {
                index: 2,
                n_qubits: 2
            })
        );
        assert!(matches!(
            Instruction::CX {
                control: 1,
                target: 1
            }
            .validate(2),
            Err(SimError::DuplicateQubit(_))
        ));
    }

    #[test]
    fn validate_modmul() {
        let ok = Instruction::CModMul {
            control: 0,
            work_start: 1,
            work_len: 4,
            a: 7,
            modulus: 15,
        };
        assert!(ok.validate(5).is_ok());
        let not_coprime = Instruction::CModMul {
            control: 0,
            work_start: 1,
            work_len: 4,
            a: 5,
            modulus: 15,
        };
        assert_eq!(
            not_coprime.validate(5),
            Err(SimError::NotCoprime { a: 5, modulus: 15 })
        );
        let overlapping = Instruction::CModMul {
            control: 2,
            work_start: 1,
            work_len: 4,
            a: 7,
            modulus: 15,
        };
        assert!(matches!(
            overlapping.validate(5),
            Err(SimError::DuplicateQubit(_))
        ));
        let too_wide = Instruction::CModMul {
            control: 0,
            work_start: 1,
            work_len: 3,
            a: 7,
            modulus: 15,
        };
        assert!(matches!(
            too_wide.validate(4),
            Err(SimError::InvalidModMul(_))
        ));
    }
}
