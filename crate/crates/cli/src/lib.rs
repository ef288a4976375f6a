//! Benchmark harness and command-line front end.
//!
//! [`bench::run_bench`] times a set of kernel tasks either one after another
//! or all at once; [`bench::compare`] pairs the two modes at a matched worker
//! budget and [`bench::scaling_sweep`] repeats that over worker counts.

pub mod bench;
pub mod report;
pub mod workload;

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use qcrt_core::dsl;
use qcrt_core::runtime::{self, AcceleratorConfig};

pub use bench::{
    compare, run_bench, scaling_sweep, BenchReport, BenchSpec, Comparison, Mode, Preset, Sweep,
};
pub use workload::{Digest, Workload};

/// Options for running a single kernel file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub size: Option<usize>,
    pub shots: u64,
    pub args: Vec<f64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

/// Parses and lowers a `.xqk` file, executes it on the calling thread's
/// accelerator in the global runtime and returns the buffer as JSON.
pub fn run_kernel_file(path: &Path, opts: &RunOptions) -> Result<String> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let src = dsl::parse_kernel(&text).map_err(|e| anyhow!("{}:{e}", path.display()))?;
    let size = opts.size.or(src.register.size).ok_or_else(|| {
        anyhow!(
            "{}: register size not declared; pass --size",
            path.display()
        )
    })?;
    let circuit =
        dsl::lower(&src, size, &opts.args).map_err(|e| anyhow!("{}: {e}", path.display()))?;

    let mut config = AcceleratorConfig::default().with_shots(opts.shots);
    if let Some(s) = opts.seed {
        config = config.with_seed(s);
    }
    if let Some(w) = opts.workers {
        config = config.with_workers(w);
    }
    runtime::initialize_worker("statevector", &config)?;
    let q = runtime::qalloc(size)?;
    runtime::execute(&circuit, &q, opts.shots)?;
    Ok(runtime::buffer_to_json(&q))
}
