use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::order::{estimate_order, gcd, modpow, OrderEstimate};
use super::qft::inverse_qft;
use super::{AlgoError, Result};
use crate::runtime::{AcceleratorConfig, Runtime, TaskHandle};
use crate::sim::{Circuit, Instruction};
use crate::splitmix64;

/// One order-finding problem: find the order of `a` modulo `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorParams {
    pub n: u64,
    pub a: u64,
    /// Shots per order-finding batch.
    pub n_shots: u64,
    /// Counting register width `t`; `Q = 2^t`.
    pub counting_qubits: usize,
}

impl ShorParams {
    /// Defaults: 10 shots, `t = 2 * ceil(log2 n)`.
    pub fn new(n: u64, a: u64) -> Self {
        ShorParams {
            n,
            a,
            n_shots: 10,
            counting_qubits: 2 * work_width(n),
        }
    }

    pub fn work_qubits(&self) -> usize {
        work_width(self.n)
    }

    pub fn total_qubits(&self) -> usize {
        self.counting_qubits + self.work_qubits()
    }

    /// `Q = 2^t`.
    pub fn q(&self) -> u64 {
        1u64 << self.counting_qubits
    }
}

/// Bits needed to hold every residue `0..n`.
fn work_width(n: u64) -> usize {
    (64 - n.saturating_sub(1).leading_zeros()).max(1) as usize
}

/// Phase-estimation order-finding circuit.
///
/// Counting qubits `0..t` (qubit `j` has weight `2^j`) start in uniform
/// superposition; the work register `t..t+w` starts at `|1>`. Counting qubit
/// `j` controls multiplication by `a^(2^j) mod n`. An inverse QFT and a
/// measurement of every counting qubit in index order finish the circuit.
pub fn shor_kernel(p: &ShorParams) -> Result<Circuit> {
    if p.n < 3 {
        return Err(AlgoError::InvalidParams(format!(
            "N = {} is too small",
            p.n
        )));
    }
    if p.a <= 1 || p.a >= p.n {
        return Err(AlgoError::InvalidParams(format!(
            "base {} not in (1, {})",
            p.a, p.n
        )));
    }
    if gcd(p.a, p.n) != 1 {
        return Err(AlgoError::NotCoprime { a: p.a, n: p.n });
    }
    if p.counting_qubits == 0 || p.total_qubits() > 30 {
        return Err(AlgoError::InvalidParams(format!(
            "{} counting + {} work qubits is out of range",
            p.counting_qubits,
            p.work_qubits()
        )));
    }
    let t = p.counting_qubits;
    let w = p.work_qubits();
    let mut c = Circuit::new(format!("shor_n{}_a{}", p.n, p.a), t + w);
    for j in 0..t {
        c.push(Instruction::H(j))?;
    }
    c.push(Instruction::X(t))?;
    let mut multiplier = p.a % p.n;
    for j in 0..t {
        c.push(Instruction::CModMul {
            control: j,
            work_start: t,
            work_len: w,
            a: multiplier,
            modulus: p.n,
        })?;
        multiplier = modpow(multiplier, 2, p.n);
    }
    c.extend(inverse_qft(0, t))?;
    for j in 0..t {
        c.push(Instruction::Measure(j))?;
    }
    Ok(c)
}

/// Integer value of a counting-register key: character `k` is counting
/// qubit `k`, weight `2^k`.
pub fn counting_value(key: &str) -> u64 {
    key.bytes()
        .enumerate()
        .filter(|(_, b)| *b == b'1')
        .map(|(k, _)| 1u64 << k)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptOutcome {
    /// `gcd(a, N) > 1`; no quantum call was made.
    GcdShortcut(u64),
    /// Verified even order with a non-trivial square root.
    Factors {
        order: u64,
        divisors: BTreeSet<u64>,
    },
    OrderNotFound,
    OddOrder(u64),
    /// `a^(r/2) = -1 (mod N)`.
    TrivialSquareRoot(u64),
    /// The verified exponent only produced trivial gcds.
    NoFactor(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttemptReport {
    pub a: u64,
    pub outcome: AttemptOutcome,
    pub estimate: Option<OrderEstimate>,
}

impl AttemptReport {
    pub fn divisors(&self, n: u64) -> Option<BTreeSet<u64>> {
        match &self.outcome {
            AttemptOutcome::GcdShortcut(d) => Some(with_cofactors([*d], n)),
            AttemptOutcome::Factors { divisors, .. } => Some(divisors.clone()),
            _ => None,
        }
    }
}

fn with_cofactors<I: IntoIterator<Item = u64>>(ds: I, n: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for d in ds {
        if d > 1 && d < n && n.is_multiple_of(d) {
            out.insert(d);
            out.insert(n / d);
        }
    }
    out
}

/// Quantum part of one attempt: run the order-finding kernel for
/// `p.n_shots` shots on the calling worker's accelerator, estimate the
/// order from all shots together, and derive divisors.
///
/// The calling worker must already be initialized in `rt`.
pub fn shor_attempt(rt: &Runtime, p: &ShorParams) -> Result<AttemptReport> {
    let kernel = shor_kernel(p)?;
    let buffer = rt.qalloc(kernel.n_qubits())?;
    rt.execute(&kernel, &buffer, p.n_shots)?;
    let mut samples = Vec::with_capacity(p.n_shots as usize);
    for (key, tally) in buffer.measurements().iter() {
        let m = counting_value(key);
        samples.extend(std::iter::repeat_n(m, tally as usize));
    }
    let estimate = estimate_order(&samples, p.q(), p.n, p.a);
    let outcome = match estimate.order {
        None => AttemptOutcome::OrderNotFound,
        Some(r) if r % 2 == 1 => AttemptOutcome::OddOrder(r),
        Some(r) => {
            let x = modpow(p.a, r / 2, p.n);
            if x == p.n - 1 {
                AttemptOutcome::TrivialSquareRoot(r)
            } else {
                let divisors = with_cofactors([gcd(x + p.n - 1, p.n), gcd(x + 1, p.n)], p.n);
                if divisors.is_empty() {
                    AttemptOutcome::NoFactor(r)
                } else {
                    AttemptOutcome::Factors { order: r, divisors }
                }
            }
        }
    };
    Ok(AttemptReport {
        a: p.a,
        outcome,
        estimate: Some(estimate),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShorMode {
    /// Attempts one after another on the calling thread.
    Serial,
    /// Coprime attempts run as spawned tasks, `concurrency` at a time, with
    /// shots spread across `shot_workers`.
    Parallel,
}

#[derive(Debug, Clone)]
pub struct ShorConfig {
    pub n: u64,
    pub seed: u64,
    pub mode: ShorMode,
    pub max_attempts: usize,
    pub n_shots: u64,
    /// Overrides `t = 2 * ceil(log2 n)`.
    pub counting_qubits: Option<usize>,
    /// Concurrent attempts per round in parallel mode.
    pub concurrency: usize,
    pub shot_workers: usize,
    pub inner_workers: usize,
    /// Bases tried before any random draw.
    pub forced_bases: Vec<u64>,
}

impl ShorConfig {
    pub fn new(n: u64, seed: u64, mode: ShorMode, max_attempts: usize) -> Self {
        let parallel = mode == ShorMode::Parallel;
        ShorConfig {
            n,
            seed,
            mode,
            max_attempts,
            n_shots: 10,
            counting_qubits: None,
            concurrency: if parallel { 2 } else { 1 },
            shot_workers: if parallel { 2 } else { 1 },
            inner_workers: 1,
            forced_bases: Vec::new(),
        }
    }

    pub fn with_forced_bases(mut self, bases: impl IntoIterator<Item = u64>) -> Self {
        self.forced_bases = bases.into_iter().collect();
        self
    }

    fn params(&self, a: u64) -> ShorParams {
        let mut p = ShorParams::new(self.n, a);
        p.n_shots = self.n_shots;
        if let Some(t) = self.counting_qubits {
            p.counting_qubits = t;
        }
        p
    }

    /// Accelerator settings for the attempt on base `a`; the seed depends
    /// only on `(seed, a)` so both modes sample identically.
    fn accelerator(&self, a: u64) -> AcceleratorConfig {
        AcceleratorConfig::default()
            .with_seed(splitmix64(self.seed ^ splitmix64(a)))
            .with_workers(self.inner_workers)
            .with_shot_workers(self.shot_workers)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorResult {
    pub n: u64,
    /// Non-trivial divisors; empty when nothing was found.
    pub divisors: BTreeSet<u64>,
    pub attempts: Vec<AttemptReport>,
}

impl ShorResult {
    pub fn found(&self) -> bool {
        !self.divisors.is_empty()
    }
}

struct BaseSampler {
    forced: std::vec::IntoIter<u64>,
    untried: Vec<u64>,
    rng: ChaCha8Rng,
}

impl BaseSampler {
    fn new(cfg: &ShorConfig) -> Self {
        BaseSampler {
            forced: cfg.forced_bases.clone().into_iter(),
            untried: (2..cfg.n).collect(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        }
    }

    fn next(&mut self) -> Option<u64> {
        if let Some(a) = self.forced.next() {
            self.untried.retain(|&x| x != a);
            return Some(a);
        }
        if self.untried.is_empty() {
            return None;
        }
        let i = self.rng.random_range(0..self.untried.len());
        Some(self.untried.swap_remove(i))
    }
}

/// Randomized factoring driver.
///
/// Draws bases uniformly from `(1, N)` without repetition; a base sharing a
/// factor with `N` returns immediately, otherwise the quantum order-finding
/// attempt runs. Returned divisors always divide `N` and exclude 1 and `N`;
/// exhausting `max_attempts` (or every base) yields an empty set.
///
/// Attempts use a private [`Runtime`], so the caller's worker binding and
/// the global registry are untouched.
pub fn shor_factor(cfg: &ShorConfig) -> Result<ShorResult> {
    let n = cfg.n;
    if n < 3 {
        return Err(AlgoError::InvalidParams(format!("cannot factor N = {n}")));
    }
    let mut result = ShorResult {
        n,
        divisors: BTreeSet::new(),
        attempts: Vec::new(),
    };
    if n.is_multiple_of(2) {
        result.divisors = with_cofactors([2], n);
        return Ok(result);
    }
    let rt = Runtime::new();
    let mut sampler = BaseSampler::new(cfg);
    let mut pending: Vec<(u64, TaskHandle<crate::runtime::Result<AttemptReport>>)> = Vec::new();

    for _ in 0..cfg.max_attempts {
        let Some(a) = sampler.next() else { break };
        let g = gcd(a, n);
        if g > 1 {
            if drain(&mut pending, &mut result)? {
                return Ok(result);
            }
            let report = AttemptReport {
                a,
                outcome: AttemptOutcome::GcdShortcut(g),
                estimate: None,
            };
            result.divisors = report.divisors(n).unwrap_or_default();
            result.attempts.push(report);
            return Ok(result);
        }
        match cfg.mode {
            ShorMode::Serial => {
                rt.initialize_worker("statevector", &cfg.accelerator(a))?;
                let report = shor_attempt(&rt, &cfg.params(a))?;
                let found = report.divisors(n);
                result.attempts.push(report);
                if let Some(ds) = found {
                    result.divisors = ds;
                    return Ok(result);
                }
            }
            ShorMode::Parallel => {
                let params = cfg.params(a);
                let task_rt = rt.clone();
                let handle = rt.spawn_initialized("statevector", cfg.accelerator(a), move || {
                    shor_attempt(&task_rt, &params).map_err(|e| match e {
                        AlgoError::Runtime(r) => r,
                        AlgoError::Sim(s) => s.into(),
                        other => crate::runtime::RuntimeError::InvalidConfig(other.to_string()),
                    })
                });
                pending.push((a, handle));
                if pending.len() >= cfg.concurrency.max(1) && drain(&mut pending, &mut result)? {
                    return Ok(result);
                }
            }
        }
    }
    drain(&mut pending, &mut result)?;
    Ok(result)
}

/// Joins every pending attempt in spawn order and records the first one
/// that produced divisors. Returns whether divisors were found.
fn drain(
    pending: &mut Vec<(u64, TaskHandle<crate::runtime::Result<AttemptReport>>)>,
    result: &mut ShorResult,
) -> Result<bool> {
    let mut found = false;
    for (_, mut handle) in pending.drain(..) {
        let report = handle.join()??;
        if !found {
            if let Some(ds) = report.divisors(result.n) {
                result.divisors = ds;
                found = true;
            }
            result.attempts.push(report);
        }
    }
    Ok(found)
}
