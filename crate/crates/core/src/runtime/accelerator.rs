use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use crate::sim::{Circuit, Counts, InnerParallelism, SamplingStrategy, ShotRunner};
use crate::splitmix64;

use super::{Result, RuntimeError};

/// Names accepted by [`get_accelerator`]. `qpp` is an alias kept for
/// familiarity; both build the same state-vector simulator.
pub const BACKENDS: [&str; 2] = ["statevector", "qpp"];

/// Environment variable holding the default inner worker count.
pub const WORKERS_ENV: &str = "QCRT_WORKERS_PER_KERNEL";

// Below this width the inner pool is never built; see sim::parallel.
const INNER_POOL_MIN_QUBITS: usize = 12;

/// Accelerator settings. Unset fields fall back to defaults when the
/// accelerator is built.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AcceleratorConfig {
    /// Shots used when a caller does not ask for a count (default 1024).
    pub shots: Option<u64>,
    /// Inner-simulator workers (default `$QCRT_WORKERS_PER_KERNEL`, else 1).
    pub workers: Option<usize>,
    /// Shot-level workers (default 1).
    pub shot_workers: Option<usize>,
    /// Sampling seed (default: drawn from the OS).
    pub seed: Option<u64>,
    pub sampling: SamplingStrategy,
}

impl AcceleratorConfig {
    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = Some(shots);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn with_shot_workers(mut self, workers: usize) -> Self {
        self.shot_workers = Some(workers);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_sampling(mut self, sampling: SamplingStrategy) -> Self {
        self.sampling = sampling;
        self
    }

    /// Builds a config from string pairs. Recognized keys: `shots`,
    /// `workers`, `shot-workers`, `seed`, `sampling` (`reexecute` or
    /// `terminal`).
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| RuntimeError::InvalidConfig(format!("{key}: cannot parse '{v}'")))
        }
        let mut cfg = AcceleratorConfig::default();
        for (key, value) in pairs {
            match key {
                "shots" => cfg.shots = Some(num(key, value)?),
                "workers" => cfg.workers = Some(num(key, value)?),
                "shot-workers" => cfg.shot_workers = Some(num(key, value)?),
                "seed" => cfg.seed = Some(num(key, value)?),
                "sampling" => {
                    cfg.sampling = match value {
                        "reexecute" => SamplingStrategy::Reexecute,
                        "terminal" => SamplingStrategy::TerminalFastPath,
                        other => {
                            return Err(RuntimeError::InvalidConfig(format!(
                                "sampling: unknown strategy '{other}'"
                            )))
                        }
                    }
                }
                other => {
                    return Err(RuntimeError::InvalidConfig(format!(
                        "unknown key '{other}'"
                    )))
                }
            }
        }
        Ok(cfg)
    }
}

/// Reads `$QCRT_WORKERS_PER_KERNEL`, falling back to 1.
pub(crate) fn env_workers() -> usize {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                log::warn!("ignoring {WORKERS_ENV}={v:?}: expected a positive integer");
                1
            }
        },
        Err(_) => 1,
    }
}

/// A state-vector simulator instance.
///
/// Each execution derives its run seed from the accelerator seed and an
/// execution counter, so repeated kernels on one accelerator see fresh
/// randomness while two accelerators never share a stream. `Clone` yields an
/// independent instance with the same settings and its own worker pool.
#[derive(Debug)]
pub struct Accelerator {
    backend: String,
    default_shots: u64,
    workers: usize,
    shot_workers: usize,
    sampling: SamplingStrategy,
    seed: AtomicU64,
    executions: AtomicU64,
    children: AtomicU64,
    inner: OnceLock<InnerParallelism>,
}

impl Clone for Accelerator {
    fn clone(&self) -> Self {
        Accelerator {
            backend: self.backend.clone(),
            default_shots: self.default_shots,
            workers: self.workers,
            shot_workers: self.shot_workers,
            sampling: self.sampling,
            seed: AtomicU64::new(self.seed()),
            executions: AtomicU64::new(self.executions.load(Ordering::Relaxed)),
            children: AtomicU64::new(self.children.load(Ordering::Relaxed)),
            inner: OnceLock::new(),
        }
    }
}

impl Accelerator {
    pub fn backend_name(&self) -> &str {
        &self.backend
    }

    pub fn default_shots(&self) -> u64 {
        self.default_shots
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn shot_workers(&self) -> usize {
        self.shot_workers
    }

    pub fn seed(&self) -> u64 {
        self.seed.load(Ordering::Relaxed)
    }

    /// Reseeds and restarts the execution counter.
    pub fn set_seed(&self, seed: u64) {
        self.seed.store(seed, Ordering::Relaxed);
        self.executions.store(0, Ordering::Relaxed);
    }

    pub fn executions(&self) -> u64 {
        self.executions.load(Ordering::Relaxed)
    }

    fn inner_for(&self, circuit: &Circuit) -> Result<InnerParallelism> {
        if self.workers <= 1 || circuit.n_qubits() < INNER_POOL_MIN_QUBITS {
            return Ok(InnerParallelism::serial());
        }
        if let Some(p) = self.inner.get() {
            return Ok(p.clone());
        }
        let pool = InnerParallelism::with_workers(self.workers)?;
        Ok(self.inner.get_or_init(|| pool).clone())
    }

    /// Runs `shots` shots of `circuit` and returns the histogram.
    pub fn run(&self, circuit: &Circuit, shots: u64) -> Result<Counts> {
        let n = self.executions.fetch_add(1, Ordering::Relaxed);
        let run_seed = splitmix64(self.seed() ^ splitmix64(n));
        let runner = ShotRunner::new(self.shot_workers)
            .with_inner(self.inner_for(circuit)?)
            .with_strategy(self.sampling);
        Ok(runner.run(circuit, shots, run_seed)?)
    }

    /// Runs with the accelerator's default shot count.
    pub fn run_default(&self, circuit: &Circuit) -> Result<Counts> {
        self.run(circuit, self.default_shots)
    }

    /// Config for a child task: same settings, seed derived from this
    /// accelerator's seed and a per-parent child counter.
    pub(crate) fn child_config(&self) -> AcceleratorConfig {
        let k = self.children.fetch_add(1, Ordering::Relaxed);
        AcceleratorConfig {
            shots: Some(self.default_shots),
            workers: Some(self.workers),
            shot_workers: Some(self.shot_workers),
            seed: Some(splitmix64(
                self.seed().rotate_left(17) ^ splitmix64(k ^ 0xc0ff_ee00),
            )),
            sampling: self.sampling,
        }
    }
}

/// Factory: every call returns a new, independent accelerator.
pub fn get_accelerator(backend: &str, config: &AcceleratorConfig) -> Result<Accelerator> {
    if !BACKENDS.contains(&backend) {
        return Err(RuntimeError::UnknownBackend(backend.to_owned()));
    }
    let shots = config.shots.unwrap_or(1024);
    if shots == 0 {
        return Err(RuntimeError::InvalidConfig("shots must be positive".into()));
    }
    let workers = config.workers.unwrap_or_else(env_workers);
    let shot_workers = config.shot_workers.unwrap_or(1);
    if workers == 0 || shot_workers == 0 {
        return Err(RuntimeError::InvalidConfig(
            "worker counts must be positive".into(),
        ));
    }
    Ok(Accelerator {
        backend: backend.to_owned(),
        default_shots: shots,
        workers,
        shot_workers,
        sampling: config.sampling,
        seed: AtomicU64::new(config.seed.unwrap_or_else(rand::random)),
        executions: AtomicU64::new(0),
        children: AtomicU64::new(0),
        inner: OnceLock::new(),
    })
}
