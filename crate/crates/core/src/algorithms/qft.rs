use std::f64::consts::PI;

use crate::sim::Instruction;

/// Quantum Fourier transform on `start..start + len`, where qubit
/// `start + k` carries weight `2^k`:
/// `|x> -> 2^{-len/2} sum_y exp(2 pi i x y / 2^len) |y>`.
pub fn qft(start: usize, len: usize) -> Vec<Instruction> {
    let mut out = Vec::new();
    for j in (0..len).rev() {
        out.push(Instruction::H(start + j));
        for k in (0..j).rev() {
            out.push(Instruction::CPhase {
                control: start + k,
                target: start + j,
                angle: PI / (1u64 << (j - k)) as f64,
            });
        }
    }
    for i in 0..len / 2 {
        out.push(Instruction::Swap(start + i, start + len - 1 - i));
    }
    out
}

/// Inverse of [`qft`]: the same gates in reverse order with negated phases.
pub fn inverse_qft(start: usize, len: usize) -> Vec<Instruction> {
    qft(start, len)
        .into_iter()
        .rev()
        .map(|inst| match inst {
            Instruction::CPhase {
                control,
                target,
                angle,
            } => Instruction::CPhase {
                control,
                target,
                angle: -angle,
            },
            other => other,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::StateVector;
    use num_complex::Complex64;

    // oracle: the DFT formula applied to a basis state
    fn dft_column(x: usize, q: usize) -> Vec<Complex64> {
        let norm = 1.0 / (q as f64).sqrt();
        (0..q)
            .map(|y| Complex64::from_polar(norm, 2.0 * PI * (x * y) as f64 / q as f64))
            .collect()
    }

    #[test]
    fn qft_matches_dft_on_every_basis_state() {
        for len in 1..=4 {
            let q = 1 << len;
            for x in 0..q {
                let mut s = StateVector::basis(len, x);
                for g in qft(0, len) {
                    s.apply(&g).unwrap();
                }
                for (a, e) in s.amplitudes().iter().zip(dft_column(x, q)) {
                    assert!((a - e).norm() < 1e-12, "len={len} x={x}");
                }
            }
        }
    }

    #[test]
    fn inverse_undoes_forward_with_offset() {
        let mut s = StateVector::basis(5, 0b10110);
        let before = s.clone();
        for g in qft(1, 3).into_iter().chain(inverse_qft(1, 3)) {
            s.apply(&g).unwrap();
        }
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
