use crate::sim::{Circuit, Instruction};

/// `H(q0); CX(q0, q1); Measure(q0); Measure(q1)`.
pub fn bell_kernel() -> Circuit {
    let mut c = Circuit::new("bell", 2);
    c.extend([
        Instruction::H(0),
        Instruction::CX {
            control: 0,
            target: 1,
        },
        Instruction::Measure(0),
        Instruction::Measure(1),
    ])
    .expect("bell kernel is valid on two qubits");
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run_shots, StateVector};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn structure() {
        let c = bell_kernel();
        assert_eq!(c.len(), 4);
        assert_eq!(c.n_qubits(), 2);
    }

    #[test]
    fn pre_measure_state() {
        let c = bell_kernel();
        let mut s = StateVector::new(2);
        for inst in c.unitary_prefix() {
            s.apply(inst).unwrap();
        }
        let expected = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn envelope() {
        let counts = run_shots(&bell_kernel(), 1024, 1, 1).unwrap();
        assert_eq!(counts.total(), 1024);
        assert!(counts.keys().all(|k| k == "00" || k == "11"));
        assert!(counts.iter().all(|(_, v)| (448..=576).contains(&v)));
    }
}
