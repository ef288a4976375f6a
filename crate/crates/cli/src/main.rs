use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use qcrt_cli::bench::{self, available_workers, BenchSpec, Mode, Preset};
use qcrt_cli::report;
use qcrt_cli::{run_kernel_file, RunOptions, Workload};

#[derive(Parser)]
#[command(
    name = "qcrt",
    version,
    about = "Parallel quantum kernel runtime: run kernels and benchmark execution modes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time one execution mode.
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "one-by-one")]
        mode: Mode,
        /// Apply a named preset; `paper-eval` runs a matched-budget comparison.
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Worker total for the preset comparison.
        #[arg(long)]
        total_workers: Option<usize>,
    },
    /// One-by-one with N workers against parallel with N / tasks each.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        total_workers: Option<usize>,
    },
    /// Strong-scaling sweep over 1, 2, 4, ... workers in both modes.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_workers: Option<usize>,
    },
    /// Run a `.xqk` kernel and print the buffer as JSON.
    Run {
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 1024)]
        shots: u64,
        /// Scalar kernel arguments, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        args: Vec<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "QCRT_WORKERS_PER_KERNEL")]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// bell | shor[:N] | vqe | file:<path> | random:<qubits>:<depth>
    #[arg(long)]
    workload: Option<Workload>,
    #[arg(long, default_value_t = 2)]
    tasks: usize,
    #[arg(long, env = "QCRT_WORKERS_PER_KERNEL", default_value_t = 1)]
    workers_per_kernel: usize,
    /// Shot-level workers per kernel (1 = off).
    #[arg(long, default_value_t = 1)]
    shot_workers: usize,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    warmup: usize,
    /// Register size for file workloads.
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    args: Vec<f64>,
    /// Warn when the worker budget exceeds this (default: available cores).
    #[arg(long)]
    worker_cap: Option<usize>,
    /// Report path; `.csv` selects CSV, anything else JSON. Default stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn spec(&self, mode: Mode) -> BenchSpec {
        BenchSpec {
            workload: self.workload.clone().unwrap_or(Workload::Bell),
            tasks: self.tasks,
            workers_per_kernel: self.workers_per_kernel,
            shot_workers: self.shot_workers,
            shots: self.shots,
            seed: self.seed,
            reps: self.reps,
            warmup: self.warmup,
            mode,
            size: self.size,
            args: self.args.clone(),
            worker_cap: self.worker_cap,
        }
    }
}

fn comparison(common: &Common, spec: &BenchSpec, total: usize) -> Result<()> {
    let cmp = bench::compare(spec, total)?;
    match cmp.speedup {
        Some(s) => eprintln!("parallel speedup over one-by-one at {total} workers: {s:.3}x"),
        None => eprintln!("no speedup reported: a run failed validation"),
    }
    let out = common.out.as_deref();
    let text = if report::is_csv(out) {
        report::reports_csv(&[cmp.baseline, cmp.parallel])?
    } else {
        serde_json::to_string_pretty(&cmp)?
    };
    report::emit(&text, out)
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Bench {
            common,
            mode,
            preset,
            total_workers,
        } => {
            let mut spec = common.spec(mode);
            if let Some(p) = preset {
                let preset_total = p.apply(&mut spec, common.workload.is_some());
                return comparison(&common, &spec, total_workers.unwrap_or(preset_total));
            }
            let r = bench::run_bench(&spec)?;
            let out = common.out.as_deref();
            let text = if report::is_csv(out) {
                report::reports_csv(std::slice::from_ref(&r))?
            } else {
                serde_json::to_string_pretty(&r)?
            };
            report::emit(&text, out)
        }
        Command::Compare {
            common,
            total_workers,
        } => {
            let spec = common.spec(Mode::OneByOne);
            let total = total_workers.unwrap_or(spec.workers_per_kernel * spec.tasks);
            comparison(&common, &spec, total)
        }
        Command::Sweep {
            common,
            max_workers,
        } => {
            let spec = common.spec(Mode::OneByOne);
            let sweep = bench::scaling_sweep(&spec, max_workers.unwrap_or_else(available_workers))?;
            let out = common.out.as_deref();
            let text = if report::is_csv(out) {
                report::sweep_csv(&sweep)?
            } else {
                serde_json::to_string_pretty(&sweep)?
            };
            report::emit(&text, out)
        }
        Command::Run {
            kernel,
            size,
            shots,
            args,
            seed,
            workers,
        } => {
            let json = run_kernel_file(
                &kernel,
                &RunOptions {
                    size,
                    shots,
                    args,
                    seed,
                    workers,
                },
            )?;
            report::emit(&json, None)
        }
    }
}
