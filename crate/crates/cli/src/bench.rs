use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use qcrt_core::runtime::{AcceleratorConfig, Runtime};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::workload::{Digest, Prepared, TaskInput, Workload};

/// Version of the JSON report layout. Bump on any field change.
pub const SCHEMA_VERSION: u32 = 1;

const BACKEND: &str = "statevector";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Tasks run back to back on the calling thread.
    OneByOne,
    /// All tasks are spawned at once and joined.
    Parallel,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::OneByOne => "one-by-one",
            Mode::Parallel => "parallel",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub workload: Workload,
    pub tasks: usize,
    /// Inner simulator workers given to each task's accelerator.
    pub workers_per_kernel: usize,
    /// Shot-level workers per accelerator; 1 turns shot parallelism off.
    pub shot_workers: usize,
    /// `None` uses the workload default.
    pub shots: Option<u64>,
    pub seed: u64,
    pub reps: usize,
    pub warmup: usize,
    pub mode: Mode,
    /// Register size and scalar arguments for `file:` workloads.
    pub size: Option<usize>,
    pub args: Vec<f64>,
    /// Worker budget above which a warning is attached (default: available
    /// parallelism).
    pub worker_cap: Option<usize>,
}

impl BenchSpec {
    pub fn new(workload: Workload) -> Self {
        BenchSpec {
            workload,
            tasks: 2,
            workers_per_kernel: 1,
            shot_workers: 1,
            shots: None,
            seed: 42,
            reps: 5,
            warmup: 1,
            mode: Mode::OneByOne,
            size: None,
            args: Vec::new(),
            worker_cap: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tasks == 0 {
            bail!("tasks must be at least 1");
        }
        if self.reps == 0 {
            bail!("repetitions must be at least 1");
        }
        if self.workers_per_kernel == 0 || self.shot_workers == 0 {
            bail!("worker counts must be at least 1");
        }
        if self.shots == Some(0) {
            bail!("shots must be positive");
        }
        Ok(())
    }

    /// Threads the spec may keep busy at once.
    pub fn worker_budget(&self) -> usize {
        let per_task = self.workers_per_kernel * self.shot_workers;
        match self.mode {
            Mode::OneByOne => per_task,
            Mode::Parallel => per_task * self.tasks,
        }
    }

    fn cap(&self) -> usize {
        self.worker_cap.unwrap_or_else(available_workers)
    }

    fn accelerator(&self, task: usize, shots: u64) -> AcceleratorConfig {
        AcceleratorConfig::default()
            .with_seed(task_seed(self.seed, task))
            .with_shots(shots)
            .with_workers(self.workers_per_kernel)
            .with_shot_workers(self.shot_workers)
    }
}

pub fn available_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Seed for task `task`: an independent ChaCha stream per task index.
pub fn task_seed(seed: u64, task: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task as u64);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub workload: String,
    pub mode: Mode,
    pub tasks: usize,
    pub workers_per_kernel: usize,
    pub shot_workers: usize,
    pub shots: u64,
    pub seed: u64,
    pub repetitions: usize,
    pub warmup: usize,
    /// Wall time of each timed repetition, seconds.
    pub times_s: Vec<f64>,
    pub median_s: f64,
    /// One digest per task, from the first timed repetition.
    pub digests: Vec<Digest>,
    pub valid: bool,
    pub baseline: Option<String>,
    pub speedup: Option<f64>,
    pub warnings: Vec<String>,
}

impl BenchReport {
    pub fn label(&self) -> String {
        format!(
            "{}/{}/w{}",
            self.workload,
            self.mode.as_str(),
            self.workers_per_kernel
        )
    }

    /// Records `baseline.median / self.median`; left unset unless both
    /// reports are valid.
    pub fn compare_to(&mut self, baseline: &BenchReport) {
        self.baseline = Some(baseline.label());
        self.speedup = (self.valid && baseline.valid && self.median_s > 0.0)
            .then(|| baseline.median_s / self.median_s);
    }
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => v[n / 2],
        _ => (v[n / 2 - 1] + v[n / 2]) / 2.0,
    }
}

/// Runs `spec.warmup` discarded and `spec.reps` timed repetitions of the
/// whole task set. Each repetition gets a fresh [`Runtime`]; the clock
/// covers worker initialization, allocation, execution and joins.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchReport> {
    spec.validate()?;
    let mut warnings = Vec::new();
    let budget = spec.worker_budget();
    if budget > spec.cap() {
        let w = format!(
            "worker budget {budget} exceeds cap {} (oversubscribed)",
            spec.cap()
        );
        log::warn!("{w}");
        warnings.push(w);
    }
    let shots = spec.shots.unwrap_or_else(|| spec.workload.default_shots());
    let prepared = Arc::new(spec.workload.prepare(spec.size, &spec.args, spec.seed)?);

    let mut times = Vec::with_capacity(spec.reps);
    let mut digests: Option<Vec<Digest>> = None;
    let mut consistent = true;
    for rep in 0..spec.warmup + spec.reps {
        let rt = Runtime::new();
        let start = Instant::now();
        let ds = run_tasks(&rt, &prepared, spec, shots)?;
        let elapsed = start.elapsed().as_secs_f64();
        log::debug!("{} rep {rep}: {elapsed:.6}s", spec.workload);
        match &digests {
            Some(first) => consistent &= *first == ds,
            None => digests = Some(ds),
        }
        if rep >= spec.warmup {
            times.push(elapsed);
        }
    }
    let digests = digests.unwrap_or_default();
    if !consistent {
        warnings.push("task digests differed between repetitions".into());
    }
    let valid = consistent && digests.iter().all(Digest::is_valid);
    Ok(BenchReport {
        schema_version: SCHEMA_VERSION,
        workload: spec.workload.to_string(),
        mode: spec.mode,
        tasks: spec.tasks,
        workers_per_kernel: spec.workers_per_kernel,
        shot_workers: spec.shot_workers,
        shots,
        seed: spec.seed,
        repetitions: spec.reps,
        warmup: spec.warmup,
        median_s: median(&times),
        times_s: times,
        digests,
        valid,
        baseline: None,
        speedup: None,
        warnings,
    })
}

fn run_tasks(
    rt: &Runtime,
    prepared: &Arc<Prepared>,
    spec: &BenchSpec,
    shots: u64,
) -> Result<Vec<Digest>> {
    let input = |index| TaskInput {
        index,
        shots,
        size: spec.size,
        args: spec.args.clone(),
        circuit_seed: spec.seed,
    };
    match spec.mode {
        Mode::OneByOne => (0..spec.tasks)
            .map(|i| {
                rt.initialize_worker(BACKEND, &spec.accelerator(i, shots))?;
                prepared.run_task(rt, &input(i))
            })
            .collect(),
        Mode::Parallel => {
            let mut handles: Vec<_> = (0..spec.tasks)
                .map(|i| {
                    let (task_rt, prepared, input) = (rt.clone(), Arc::clone(prepared), input(i));
                    rt.spawn_initialized(BACKEND, spec.accelerator(i, shots), move || {
                        Ok(prepared.run_task(&task_rt, &input))
                    })
                })
                .collect();
            handles
                .iter_mut()
                .map(|h| h.join().map_err(|e| anyhow!(e))?.map_err(|e| anyhow!(e))?)
                .collect()
        }
    }
}

/// Matched-budget comparison: one-by-one with `total_workers` per kernel
/// against parallel with `max(1, total_workers / tasks)` per kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub schema_version: u32,
    pub total_workers: usize,
    pub baseline: BenchReport,
    pub parallel: BenchReport,
    pub speedup: Option<f64>,
    pub digests_match: bool,
}

pub fn compare(spec: &BenchSpec, total_workers: usize) -> Result<Comparison> {
    if total_workers == 0 {
        bail!("total workers must be at least 1");
    }
    let one = BenchSpec {
        mode: Mode::OneByOne,
        workers_per_kernel: total_workers,
        ..spec.clone()
    };
    let par = BenchSpec {
        mode: Mode::Parallel,
        workers_per_kernel: (total_workers / spec.tasks.max(1)).max(1),
        ..spec.clone()
    };
    let baseline = run_bench(&one)?;
    let mut parallel = run_bench(&par)?;
    parallel.compare_to(&baseline);
    Ok(Comparison {
        schema_version: SCHEMA_VERSION,
        total_workers,
        digests_match: baseline.digests == parallel.digests,
        speedup: parallel.speedup,
        baseline,
        parallel,
    })
}

/// Named spec adjustments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// Two tasks, 24 total workers (24 one-by-one, 12 each in parallel),
    /// shot-level parallelism off, 20-qubit random circuits unless a
    /// workload is given.
    PaperEval,
}

impl Preset {
    pub const PAPER_EVAL_WORKERS: usize = 24;

    pub fn apply(self, spec: &mut BenchSpec, workload_given: bool) -> usize {
        match self {
            Preset::PaperEval => {
                spec.tasks = 2;
                spec.shot_workers = 1;
                if !workload_given {
                    spec.workload = Workload::Random {
                        qubits: 20,
                        depth: 4,
                    };
                }
                Self::PAPER_EVAL_WORKERS
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub total_workers: usize,
    pub mode: Mode,
    pub workers_per_kernel: usize,
    pub median_s: f64,
    /// Relative to single-worker one-by-one.
    pub speedup: Option<f64>,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub schema_version: u32,
    pub workload: String,
    pub tasks: usize,
    pub rows: Vec<SweepRow>,
    pub reports: Vec<BenchReport>,
}

/// `1, 2, 4, ...` up to and including `max`.
pub fn sweep_points(max: usize) -> Vec<usize> {
    let mut pts: Vec<usize> = std::iter::successors(Some(1usize), |w| w.checked_mul(2))
        .take_while(|w| *w <= max)
        .collect();
    if pts.last() != Some(&max) && max > 0 {
        pts.push(max);
    }
    pts
}

/// Strong-scaling sweep over both modes. Parallel runs split each point's
/// worker total across tasks (`max(1, w / tasks)` per kernel).
pub fn scaling_sweep(spec: &BenchSpec, max_workers: usize) -> Result<Sweep> {
    if max_workers == 0 {
        bail!("max workers must be at least 1");
    }
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for w in sweep_points(max_workers) {
        for mode in [Mode::OneByOne, Mode::Parallel] {
            let wpk = match mode {
                Mode::OneByOne => w,
                Mode::Parallel => (w / spec.tasks.max(1)).max(1),
            };
            let s = BenchSpec {
                mode,
                workers_per_kernel: wpk,
                ..spec.clone()
            };
            let report = run_bench(&s)?;
            rows.push(SweepRow {
                total_workers: w,
                mode,
                workers_per_kernel: wpk,
                median_s: report.median_s,
                speedup: None,
                valid: report.valid,
            });
            reports.push(report);
        }
    }
    let base = &reports[0];
    for (row, report) in rows.iter_mut().zip(&reports) {
        row.speedup = (row.valid && base.valid).then(|| base.median_s / report.median_s);
    }
    for report in reports.iter_mut().skip(1) {
        let b = rows[0].clone();
        report.baseline = Some(format!(
            "{}/{}/w{}",
            spec.workload,
            b.mode.as_str(),
            b.workers_per_kernel
        ));
        report.speedup = (report.valid && b.valid).then(|| b.median_s / report.median_s);
    }
    Ok(Sweep {
        schema_version: SCHEMA_VERSION,
        workload: spec.workload.to_string(),
        tasks: spec.tasks,
        rows,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn points() {
        assert_eq!(sweep_points(8), vec![1, 2, 4, 8]);
        assert_eq!(sweep_points(24), vec![1, 2, 4, 8, 16, 24]);
        assert_eq!(sweep_points(1), vec![1]);
    }

    #[test]
    fn task_seeds_differ() {
        assert_ne!(task_seed(42, 0), task_seed(42, 1));
        assert_eq!(task_seed(42, 3), task_seed(42, 3));
    }

    #[test]
    fn invalid_specs() {
        let mut s = BenchSpec::new(Workload::Bell);
        s.tasks = 0;
        assert!(run_bench(&s).is_err());
        let mut s = BenchSpec::new(Workload::Bell);
        s.reps = 0;
        assert!(run_bench(&s).is_err());
    }

    #[test]
    fn speedup_needs_two_valid_reports() {
        let mut s = BenchSpec::new(Workload::Bell);
        s.reps = 1;
        let base = run_bench(&s).unwrap();
        let mut other = base.clone();
        other.valid = false;
        other.compare_to(&base);
        assert_eq!(other.speedup, None);
        let mut good = base.clone();
        good.compare_to(&base);
        assert_eq!(good.speedup, Some(1.0));
    }

    #[test]
    fn oversubscription_warns() {
        let mut s = BenchSpec::new(Workload::Bell);
        s.reps = 1;
        s.mode = Mode::Parallel;
        s.workers_per_kernel = 4;
        s.worker_cap = Some(2);
        let r = run_bench(&s).unwrap();
        assert!(r.valid);
        assert_eq!(r.warnings.len(), 1);
    }
}
