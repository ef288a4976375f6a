use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use rand::Rng;

use super::instruction::gcd;
use super::{InnerParallelism, Instruction, PauliString, Result, SimError};

/// Branches below this probability are treated as impossible outcomes.
const ZERO_BRANCH: f64 = 1e-12;

type Mat2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The `2^n` complex amplitudes of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> Self {
        StateVector::basis(n_qubits, 0)
    }

    /// Computational basis state `|index>`.
    ///
    /// # Panics
    /// If `index >= 2^n_qubits`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(
            index < dim,
            "basis index {index} out of range for {n_qubits} qubits"
        );
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        let state = StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        InnerParallelism::serial().sum(&self.amps, |_, a| a.norm_sqr())
    }

    /// Probability of every basis state, indexed like the amplitudes.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            Err(SimError::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Applies a unitary instruction serially.
    pub fn apply(&mut self, inst: &Instruction) -> Result<()> {
        self.apply_with(inst, &InnerParallelism::serial())
    }

    /// Applies a unitary instruction, fanning out over `par`'s workers for
    /// large states. Output is bit-identical to the serial path.
    pub fn apply_with(&mut self, inst: &Instruction, par: &InnerParallelism) -> Result<()> {
        inst.validate(self.n_qubits)?;
        let h = FRAC_1_SQRT_2;
        match *inst {
            Instruction::H(q) => {
                self.single(q, [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]], par)
            }
            Instruction::X(q) => {
                par.for_each_pair(&mut self.amps, q, |_, a, b| std::mem::swap(a, b))
            }
            Instruction::Y(q) => self.single(
                q,
                [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
                par,
            ),
            Instruction::Z(q) => self.phase_on_one(q, c(-1.0, 0.0), par),
            Instruction::S(q) => self.phase_on_one(q, c(0.0, 1.0), par),
            Instruction::T(q) => self.phase_on_one(q, Complex64::from_polar(1.0, FRAC_PI_4), par),
            Instruction::Rx(q, theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                self.single(q, [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]], par)
            }
            Instruction::Ry(q, theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                self.single(q, [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]], par)
            }
            Instruction::Rz(q, theta) => {
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = Complex64::from_polar(1.0, theta / 2.0);
                let mask = 1usize << q;
                par.for_each_amp(&mut self.amps, |i, a| {
                    *a *= if i & mask == 0 { lo } else { hi };
                });
            }
            Instruction::CX { control, target } => {
                let cmask = 1usize << control;
                par.for_each_pair(&mut self.amps, target, |i, a, b| {
                    if i & cmask != 0 {
                        std::mem::swap(a, b);
                    }
                });
            }
            Instruction::CZ { control, target } => {
                let mask = (1usize << control) | (1usize << target);
                par.for_each_amp(&mut self.amps, |i, a| {
                    if i & mask == mask {
                        *a = -*a;
                    }
                });
            }
            Instruction::CPhase {
                control,
                target,
                angle,
            } => {
                let mask = (1usize << control) | (1usize << target);
                let phase = Complex64::from_polar(1.0, angle);
                par.for_each_amp(&mut self.amps, |i, a| {
                    if i & mask == mask {
                        *a *= phase;
                    }
                });
            }
            Instruction::Swap(p, q) => {
                par.gather(&mut self.amps, |j| {
                    let bp = (j >> p) & 1;
                    let bq = (j >> q) & 1;
                    if bp == bq {
                        j
                    } else {
                        j ^ ((1 << p) | (1 << q))
                    }
                });
            }
            Instruction::Measure(_) => return Err(SimError::MeasureNotUnitary),
            Instruction::CModMul {
                control,
                work_start,
                work_len,
                a,
                modulus,
            } => {
                let inv =
                    mod_inverse(a % modulus, modulus).ok_or(SimError::NotCoprime { a, modulus })?;
                let cmask = 1usize << control;
                let wmask = (1usize << work_len) - 1;
                let n = modulus as usize;
                // new[j] = old[U^-1 j]
                par.gather(&mut self.amps, |j| {
                    if j & cmask == 0 {
                        return j;
                    }
                    let y = (j >> work_start) & wmask;
                    if y >= n {
                        return j;
                    }
                    let src = mul_mod(y as u64, inv, modulus) as usize;
                    (j & !(wmask << work_start)) | (src << work_start)
                });
            }
        }
        Ok(())
    }

    fn single(&mut self, q: usize, m: Mat2, par: &InnerParallelism) {
        par.for_each_pair(&mut self.amps, q, |_, a, b| {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        });
    }

    fn phase_on_one(&mut self, q: usize, phase: Complex64, par: &InnerParallelism) {
        par.for_each_pair(&mut self.amps, q, |_, _, b| *b *= phase);
    }

    /// Probability that qubit `q` reads 1.
    pub fn probability_of_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        Ok(self.branch_probability(q, 1, &InnerParallelism::serial()))
    }

    fn branch_probability(&self, q: usize, bit: usize, par: &InnerParallelism) -> f64 {
        par.sum(&self.amps, |i, a| {
            if (i >> q) & 1 == bit {
                a.norm_sqr()
            } else {
                0.0
            }
        })
    }

    /// Projective measurement of qubit `q` in the computational basis.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<u8> {
        self.measure_with(q, rng, &InnerParallelism::serial())
    }

    /// Born-rule sample of qubit `q` followed by collapse and renormalization.
    pub fn measure_with<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        rng: &mut R,
        par: &InnerParallelism,
    ) -> Result<u8> {
        self.check_qubit(q)?;
        let p0 = self.branch_probability(q, 0, par);
        let p1 = self.branch_probability(q, 1, par);
        let total = p0 + p1;
        let u: f64 = rng.random();
        let mut bit = if u * total < p1 { 1 } else { 0 };
        if bit == 1 && p1 < ZERO_BRANCH * total {
            bit = 0;
        } else if bit == 0 && p0 < ZERO_BRANCH * total {
            bit = 1;
        }
        let keep = if bit == 1 { p1 } else { p0 };
        let scale = 1.0 / keep.sqrt();
        par.for_each_amp(&mut self.amps, |i, a| {
            if (i >> q) & 1 == bit as usize {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        });
        Ok(bit)
    }

    /// `<psi|P|psi>` for a Pauli string.
    pub fn expectation(&self, pauli: &PauliString) -> Result<f64> {
        self.expectation_with(pauli, &InnerParallelism::serial())
    }

    pub fn expectation_with(&self, pauli: &PauliString, par: &InnerParallelism) -> Result<f64> {
        if let Some(q) = pauli.max_qubit() {
            self.check_qubit(q)?;
        }
        let (flip, sign, n_y) = pauli.masks();
        let global = match n_y % 4 {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        };
        let amps = &self.amps;
        // P|i> = global * (-1)^{popcount(i & sign)} |i ^ flip>
        let value = par.sum(amps, |i, a| {
            let s = if (i & sign).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            (amps[i ^ flip].conj() * global * a).re * s
        });
        Ok(value)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if gcd(a, m) != 1 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EPS: f64 = 1e-12;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < EPS
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::new(1);
        s.apply(&Instruction::H(0)).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(close(s.amplitudes()[0], c(h, 0.0)));
        assert!(close(s.amplitudes()[1], c(h, 0.0)));
    }

    #[test]
    fn cx_builds_bell_pair() {
        let h = FRAC_1_SQRT_2;
        // (|00> + |10>)/sqrt2 in q1q0 notation is q0 in superposition
        let mut s =
            StateVector::from_amplitudes(vec![c(h, 0.0), c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
                .unwrap();
        s.apply(&Instruction::CX {
            control: 0,
            target: 1,
        })
        .unwrap();
        let a = s.amplitudes();
        assert!(close(a[0], c(h, 0.0)));
        assert!(close(a[1], c(0.0, 0.0)));
        assert!(close(a[2], c(0.0, 0.0)));
        assert!(close(a[3], c(h, 0.0)));
    }

    #[test]
    fn cmodmul_seven_mod_fifteen_on_one() {
        // control q0, work q1..q5
        let inst = Instruction::CModMul {
            control: 0,
            work_start: 1,
            work_len: 4,
            a: 7,
            modulus: 15,
        };
        let mut s = StateVector::basis(5, 1 | (1 << 1));
        s.apply(&inst).unwrap();
        assert!(close(s.amplitudes()[1 | (7 << 1)], c(1.0, 0.0)));
    }

    #[test]
    fn cmodmul_matches_multiplication_table() {
        // oracle: direct modular multiplication for every y
        let inst = Instruction::CModMul {
            control: 0,
            work_start: 1,
            work_len: 4,
            a: 7,
            modulus: 15,
        };
        for ctrl in 0..2usize {
            for y in 0..16usize {
                let mut s = StateVector::basis(5, ctrl | (y << 1));
                s.apply(&inst).unwrap();
                let expected_y = if ctrl == 1 && y < 15 { (7 * y) % 15 } else { y };
                let idx = ctrl | (expected_y << 1);
                assert!(close(s.amplitudes()[idx], c(1.0, 0.0)), "ctrl={ctrl} y={y}");
            }
        }
    }

    #[test]
    fn cmodmul_rejects_non_coprime() {
        let inst = Instruction::CModMul {
            control: 0,
            work_start: 1,
            work_len: 4,
            a: 6,
            modulus: 15,
        };
        let mut s = StateVector::new(5);
        assert_eq!(
            s.apply(&inst),
            Err(SimError::NotCoprime { a: 6, modulus: 15 })
        );
    }

    #[test]
    fn out_of_range_gate_is_an_error() {
        let mut s = StateVector::new(2);
        assert!(matches!(
            s.apply(&Instruction::H(3)),
            Err(SimError::QubitOutOfRange { .. })
        ));
        assert_eq!(
            s.apply(&Instruction::Measure(0)),
            Err(SimError::MeasureNotUnitary)
        );
    }

    #[test]
    fn measure_deterministic_outcome() {
        let mut s = StateVector::basis(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(s.measure(0, &mut rng).unwrap(), 1);
        assert!(close(s.amplitudes()[3], c(1.0, 0.0)));
        assert!(s.measure(2, &mut rng).is_err());
    }

    #[test]
    fn bell_measurements_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut s = StateVector::new(2);
            s.apply(&Instruction::H(0)).unwrap();
            s.apply(&Instruction::CX {
                control: 0,
                target: 1,
            })
            .unwrap();
            let a = s.measure(0, &mut rng).unwrap();
            let b = s.measure(1, &mut rng).unwrap();
            assert_eq!(a, b);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn measure_frequency_follows_born_rule() {
        // |amp(1)|^2 = 0.25; 4 sigma of a 10k binomial is 0.0173 < 0.02
        let theta = 2.0 * (0.5f64).asin();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let trials = 10_000;
        let mut ones = 0;
        for _ in 0..trials {
            let mut s = StateVector::new(1);
            s.apply(&Instruction::Ry(0, theta)).unwrap();
            ones += s.measure(0, &mut rng).unwrap() as usize;
        }
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.25).abs() <= 0.02, "freq {freq}");
    }

    #[test]
    fn zero_probability_branch_never_chosen() {
        struct Max;
        impl rand::RngCore for Max {
            fn next_u32(&mut self) -> u32 {
                u32::MAX
            }
            fn next_u64(&mut self) -> u64 {
                u64::MAX
            }
            fn fill_bytes(&mut self, dst: &mut [u8]) {
                dst.fill(0xff)
            }
        }
        let mut s = StateVector::basis(1, 1);
        assert_eq!(s.measure(0, &mut Max).unwrap(), 1);
        let mut s = StateVector::basis(1, 0);
        assert_eq!(s.measure(0, &mut Max).unwrap(), 0);
    }

    #[test]
    fn expectation_examples() {
        use crate::sim::Pauli;
        let zero = StateVector::new(1);
        assert!((zero.expectation(&PauliString::single(0, Pauli::Z)).unwrap() - 1.0).abs() < EPS);
        let mut plus = StateVector::new(1);
        plus.apply(&Instruction::H(0)).unwrap();
        assert!((plus.expectation(&PauliString::single(0, Pauli::X)).unwrap() - 1.0).abs() < EPS);
        assert!(zero.expectation(&PauliString::single(1, Pauli::X)).is_err());
    }

    #[test]
    fn mod_inverse_small() {
        assert_eq!(mod_inverse(7, 15), Some(13));
        assert_eq!(mod_inverse(5, 15), None);
    }
}
