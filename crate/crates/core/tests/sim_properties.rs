use std::collections::HashSet;

use nalgebra::{Complex, DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use qcrt_core::sim::{
    run_shots, Circuit, InnerParallelism, Instruction, Pauli, PauliString, SamplingStrategy,
    ShotRunner, StateVector,
};

fn gate_strategy(n: usize) -> impl Strategy<Value = Instruction> {
    let q = 0..n;
    let pair = (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b);
    let angle = -7.0f64..7.0;
    prop_oneof![
        q.clone().prop_map(Instruction::H),
        q.clone().prop_map(Instruction::X),
        q.clone().prop_map(Instruction::Y),
        q.clone().prop_map(Instruction::Z),
        q.clone().prop_map(Instruction::S),
        q.clone().prop_map(Instruction::T),
        (q.clone(), angle.clone()).prop_map(|(q, t)| Instruction::Rx(q, t)),
        (q.clone(), angle.clone()).prop_map(|(q, t)| Instruction::Ry(q, t)),
        (q, angle.clone()).prop_map(|(q, t)| Instruction::Rz(q, t)),
        pair.clone()
            .prop_map(|(control, target)| Instruction::CX { control, target }),
        pair.clone()
            .prop_map(|(control, target)| Instruction::CZ { control, target }),
        (pair.clone(), angle).prop_map(|((control, target), angle)| Instruction::CPhase {
            control,
            target,
            angle
        }),
        pair.prop_map(|(a, b)| Instruction::Swap(a, b)),
    ]
}

fn inverse(inst: &Instruction) -> Vec<Instruction> {
    use Instruction::*;
    match *inst {
        S(q) => vec![S(q), S(q), S(q)],
        T(q) => vec![T(q); 7],
        Rx(q, t) => vec![Rx(q, -t)],
        Ry(q, t) => vec![Ry(q, -t)],
        Rz(q, t) => vec![Rz(q, -t)],
        CPhase {
            control,
            target,
            angle,
        } => vec![CPhase {
            control,
            target,
            angle: -angle,
        }],
        ref other => vec![other.clone()],
    }
}

fn random_state(n: usize, gates: &[Instruction]) -> StateVector {
    let mut s = StateVector::new(n);
    for g in gates {
        s.apply(g).unwrap();
    }
    s
}

proptest! {
    #[test]
    fn norm_is_preserved(gates in prop::collection::vec(gate_strategy(4), 1..40)) {
        let mut s = StateVector::new(4);
        for g in &gates {
            s.apply(g).unwrap();
            let n = s.norm_sqr();
            prop_assert!((n - 1.0).abs() <= 1e-9, "norm {}", n);
        }
    }

    #[test]
    fn gate_then_inverse_restores(
        prefix in prop::collection::vec(gate_strategy(3), 0..10),
        g in gate_strategy(3),
    ) {
        let before = random_state(3, &prefix);
        let mut after = before.clone();
        after.apply(&g).unwrap();
        for inv in inverse(&g) {
            after.apply(&inv).unwrap();
        }
        for (a, b) in before.amplitudes().iter().zip(after.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-10);
        }
    }

    #[test]
    fn shot_counts_ignore_worker_count(seed in any::<u64>(), shots in 1u64..300) {
        let mut c = Circuit::new("bell", 2);
        c.extend([
            Instruction::H(0),
            Instruction::CX { control: 0, target: 1 },
            Instruction::Measure(0),
            Instruction::Measure(1),
        ]).unwrap();
        let base = run_shots(&c, shots, seed, 1).unwrap();
        prop_assert_eq!(base.total(), shots);
        prop_assert_eq!(&run_shots(&c, shots, seed, 2).unwrap(), &base);
        prop_assert_eq!(&run_shots(&c, shots, seed, 8).unwrap(), &base);
    }
}

#[test]
fn cx_twice_is_identity() {
    let before = random_state(
        3,
        &[
            Instruction::H(0),
            Instruction::Ry(1, 0.3),
            Instruction::T(2),
        ],
    );
    let mut after = before.clone();
    let cx = Instruction::CX {
        control: 2,
        target: 0,
    };
    after.apply(&cx).unwrap();
    after.apply(&cx).unwrap();
    assert_eq!(before, after);
}

#[test]
fn cmodmul_is_a_permutation_for_fifteen() {
    for a in [2u64, 4, 7, 8, 11, 13, 14] {
        let inst = Instruction::CModMul {
            control: 0,
            work_start: 1,
            work_len: 4,
            a,
            modulus: 15,
        };
        let mut images = HashSet::new();
        for index in 0..32 {
            let mut s = StateVector::basis(5, index);
            s.apply(&inst).unwrap();
            let hits: Vec<usize> = s
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, amp)| amp.norm() > 0.5)
                .map(|(i, _)| i)
                .collect();
            assert_eq!(hits.len(), 1);
            images.insert(hits[0]);
        }
        assert_eq!(images.len(), 32, "a = {a}");
    }
}

fn pauli_matrix(p: Option<Pauli>) -> DMatrix<Complex<f64>> {
    let z = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    match p {
        None => DMatrix::from_row_slice(2, 2, &[one, z, z, one]),
        Some(Pauli::X) => DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        Some(Pauli::Y) => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Some(Pauli::Z) => DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

/// Dense sandwich oracle, qubit 0 = least significant factor.
fn dense_expectation(state: &StateVector, ops: &[(usize, Pauli)]) -> f64 {
    let n = state.n_qubits();
    let mut m = DMatrix::from_element(1, 1, Complex::new(1.0, 0.0));
    for q in (0..n).rev() {
        let p = ops.iter().find(|(k, _)| *k == q).map(|(_, p)| *p);
        m = m.kronecker(&pauli_matrix(p));
    }
    let psi = DVector::from_iterator(
        1 << n,
        state.amplitudes().iter().map(|a| Complex::new(a.re, a.im)),
    );
    (psi.adjoint() * m * psi)[(0, 0)].re
}

#[test]
fn bell_expectations_match_dense_oracle() {
    let bell = random_state(
        2,
        &[
            Instruction::H(0),
            Instruction::CX {
                control: 0,
                target: 1,
            },
        ],
    );
    let cases: [(&[(usize, Pauli)], f64); 3] = [
        (&[(0, Pauli::X), (1, Pauli::X)], 1.0),
        (&[(0, Pauli::Z), (1, Pauli::Z)], 1.0),
        (&[(0, Pauli::Z)], 0.0),
    ];
    for (ops, frozen) in cases {
        let oracle = dense_expectation(&bell, ops);
        assert!((oracle - frozen).abs() < 1e-12);
        let got = bell
            .expectation(&PauliString::new(ops.iter().copied()))
            .unwrap();
        assert!((got - oracle).abs() < 1e-12, "{ops:?}: {got} vs {oracle}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn expectation_matches_dense_oracle(
        gates in prop::collection::vec(gate_strategy(3), 0..15),
        ops in prop::collection::btree_map(0usize..3, prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)], 0..4),
    ) {
        let s = random_state(3, &gates);
        let ops: Vec<(usize, Pauli)> = ops.into_iter().collect();
        let oracle = dense_expectation(&s, &ops);
        let got = s.expectation(&PauliString::new(ops.iter().copied())).unwrap();
        prop_assert!((got - oracle).abs() < 1e-10);
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&got));
    }
}

fn layered_circuit(n: usize, depth: usize) -> Vec<Instruction> {
    let mut out = Vec::new();
    for d in 0..depth {
        for q in 0..n {
            out.push(Instruction::Ry(q, 0.1 + 0.37 * (q + d) as f64));
            out.push(Instruction::H(q));
        }
        for q in 0..n - 1 {
            out.push(Instruction::CX {
                control: q,
                target: (q + 1 + d) % n,
            });
        }
        out.push(Instruction::CPhase {
            control: 0,
            target: n - 1,
            angle: 0.7,
        });
        out.push(Instruction::Swap(1, n - 2));
        out.push(Instruction::Rz(n / 2, 1.3));
    }
    out
}

#[test]
fn inner_parallel_application_is_bit_identical() {
    let n = 14;
    let gates = layered_circuit(n, 3);
    let mut serial = StateVector::new(n);
    for g in &gates {
        serial.apply(g).unwrap();
    }
    for workers in [2, 4] {
        let par = InnerParallelism::with_workers(workers).unwrap();
        let mut parallel = StateVector::new(n);
        for g in &gates {
            parallel.apply_with(g, &par).unwrap();
        }
        assert_eq!(serial, parallel, "workers = {workers}");
        let z0 = PauliString::single(0, Pauli::Z).with(5, Pauli::Y);
        assert_eq!(
            serial.expectation(&z0).unwrap().to_bits(),
            parallel.expectation_with(&z0, &par).unwrap().to_bits()
        );
    }
}

#[test]
fn inner_parallel_counts_match_serial() {
    let n = 13;
    let mut c = Circuit::new("wide", n);
    c.extend(layered_circuit(n, 2)).unwrap();
    for q in 0..4 {
        c.push(Instruction::Measure(q)).unwrap();
    }
    let serial = ShotRunner::new(1).run(&c, 20, 5).unwrap();
    let par = ShotRunner::new(2)
        .with_inner(InnerParallelism::with_workers(3).unwrap())
        .run(&c, 20, 5)
        .unwrap();
    assert_eq!(serial, par);
}

#[test]
fn fast_path_matches_reexecution_in_distribution() {
    // chi-square two-sample test on a 3-qubit non-uniform distribution
    let mut c = Circuit::new("skew", 3);
    c.extend([
        Instruction::Ry(0, 0.9),
        Instruction::Ry(1, 2.1),
        Instruction::CX {
            control: 1,
            target: 2,
        },
        Instruction::Rx(2, 0.4),
        Instruction::Measure(0),
        Instruction::Measure(1),
        Instruction::Measure(2),
    ])
    .unwrap();
    let shots = 20_000;
    let slow = ShotRunner::new(1).run(&c, shots, 11).unwrap();
    let fast = ShotRunner::new(1)
        .with_strategy(SamplingStrategy::TerminalFastPath)
        .run(&c, shots, 12)
        .unwrap();
    let keys: HashSet<&str> = slow.keys().chain(fast.keys()).collect();
    let mut chi2 = 0.0;
    for k in &keys {
        let (a, b) = (slow.get(k) as f64, fast.get(k) as f64);
        if a + b > 0.0 {
            chi2 += (a - b).powi(2) / (a + b);
        }
    }
    // 7 degrees of freedom, p = 0.001 critical value 24.32
    assert!(chi2 < 24.32, "chi2 = {chi2}");
}

#[test]
fn from_amplitudes_checks_shape_and_norm() {
    let z = Complex64::new(0.0, 0.0);
    assert!(StateVector::from_amplitudes(vec![z; 3]).is_err());
    assert!(StateVector::from_amplitudes(vec![z; 4]).is_err());
}
