use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Circuit, Counts, InnerParallelism, Instruction, Result, SimError, StateVector};

/// How a multi-shot run turns one circuit into a histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingStrategy {
    /// Re-simulate the full circuit for every shot with mid-circuit collapse.
    #[default]
    Reexecute,
    /// When every measurement is trailing, simulate once and sample the final
    /// distribution per shot. Falls back to `Reexecute` otherwise.
    TerminalFastPath,
}

/// Random stream for one shot: the run seed selects the key and the shot
/// index selects the ChaCha stream, so every shot is reproducible in
/// isolation.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Multi-shot executor: shot-level fan-out over scoped threads plus an
/// optional inner pool for amplitude updates.
#[derive(Debug, Clone)]
pub struct ShotRunner {
    shot_workers: usize,
    inner: InnerParallelism,
    strategy: SamplingStrategy,
}

impl Default for ShotRunner {
    fn default() -> Self {
        ShotRunner::new(1)
    }
}

impl ShotRunner {
    pub fn new(shot_workers: usize) -> Self {
        ShotRunner {
            shot_workers: shot_workers.max(1),
            inner: InnerParallelism::serial(),
            strategy: SamplingStrategy::Reexecute,
        }
    }

    pub fn with_inner(mut self, inner: InnerParallelism) -> Self {
        self.inner = inner;
        self
    }

    pub fn with_strategy(mut self, strategy: SamplingStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn shot_workers(&self) -> usize {
        self.shot_workers
    }

    pub fn inner(&self) -> &InnerParallelism {
        &self.inner
    }

    /// Runs `shots` independent shots of `circuit`. Shot `s` draws from
    /// `shot_rng(seed, s)` so the histogram does not depend on how the shots
    /// are split across workers.
    pub fn run(&self, circuit: &Circuit, shots: u64, seed: u64) -> Result<Counts> {
        if shots == 0 {
            return Err(SimError::ZeroShots);
        }
        if !circuit.has_measurement() {
            return Err(SimError::NoMeasurement(circuit.name().to_owned()));
        }
        let measured = circuit.measured_qubits();
        let final_state = match self.strategy {
            SamplingStrategy::TerminalFastPath if circuit.measurements_are_terminal() => {
                let mut state = StateVector::new(circuit.n_qubits());
                for inst in circuit.unitary_prefix() {
                    state.apply_with(inst, &self.inner)?;
                }
                Some(cumulative(&state.probabilities()))
            }
            _ => None,
        };

        let run_range = |range: std::ops::Range<u64>| -> Result<BTreeMap<String, u64>> {
            let mut tally = BTreeMap::new();
            let mut bits = vec![0u8; measured.len()];
            for shot in range {
                let mut rng = shot_rng(seed, shot);
                match &final_state {
                    Some(cdf) => sample_terminal(cdf, &measured, &mut bits, &mut rng),
                    None => self.execute_once(circuit, &measured, &mut bits, &mut rng)?,
                }
                *tally.entry(bitstring(&bits)).or_insert(0) += 1;
            }
            Ok(tally)
        };

        let workers = (self.shot_workers as u64).min(shots);
        let partials: Vec<BTreeMap<String, u64>> = if workers <= 1 {
            vec![run_range(0..shots)?]
        } else {
            let per = shots.div_ceil(workers);
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let start = w * per;
                        let end = ((w + 1) * per).min(shots);
                        let run_range = &run_range;
                        scope.spawn(move || run_range(start..end))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("shot worker panicked"))
                    .collect::<Result<Vec<_>>>()
            })?
        };

        let mut counts = Counts::new();
        for part in partials {
            for (k, v) in part {
                counts.add(k, v);
            }
        }
        Ok(counts)
    }

    fn execute_once(
        &self,
        circuit: &Circuit,
        measured: &[usize],
        bits: &mut [u8],
        rng: &mut ChaCha8Rng,
    ) -> Result<()> {
        let mut state = StateVector::new(circuit.n_qubits());
        for inst in circuit.instructions() {
            match *inst {
                Instruction::Measure(q) => {
                    let bit = state.measure_with(q, rng, &self.inner)?;
                    let slot = measured
                        .iter()
                        .position(|&m| m == q)
                        .expect("measured qubit");
                    bits[slot] = bit;
                }
                ref gate => state.apply_with(gate, &self.inner)?,
            }
        }
        Ok(())
    }
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn sample_terminal(cdf: &[f64], measured: &[usize], bits: &mut [u8], rng: &mut ChaCha8Rng) {
    let total = *cdf.last().expect("non-empty distribution");
    let u: f64 = rng.random::<f64>() * total;
    let mut index = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
    // skip zero-probability entries that share the same cumulative value
    while index > 0 && cdf[index] == cdf[index - 1] {
        index -= 1;
    }
    for (slot, &q) in measured.iter().enumerate() {
        bits[slot] = ((index >> q) & 1) as u8;
    }
}

fn bitstring(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 1 { '1' } else { '0' })
        .collect()
}

/// Serial-gate convenience wrapper around [`ShotRunner`].
pub fn run_shots(circuit: &Circuit, shots: u64, seed: u64, workers: usize) -> Result<Counts> {
    ShotRunner::new(workers).run(circuit, shots, seed)
}
