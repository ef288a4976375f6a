use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use qcrt_core::algorithms::{bell_kernel, shor_attempt, vqe_minimize, ShorParams, VqeConfig};
use qcrt_core::dsl;
use qcrt_core::runtime::Runtime;
use qcrt_core::sim::{Circuit, Counts, Instruction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// What each benchmark task runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Workload {
    Bell,
    /// One order-finding attempt on `n`; task `i` uses the `i`-th base from
    /// [`shor_bases`], cycling.
    Shor {
        n: u64,
    },
    Vqe,
    File {
        path: PathBuf,
    },
    /// Layered random circuit, measured on every qubit.
    Random {
        qubits: usize,
        depth: usize,
    },
}

impl FromStr for Workload {
    type Err = anyhow::Error;

    /// `bell`, `shor`, `shor:<N>`, `vqe`, `file:<path>`, `random:<qubits>:<depth>`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        Ok(match (head, rest) {
            ("bell", "") => Workload::Bell,
            ("vqe", "") => Workload::Vqe,
            ("shor", "") => Workload::Shor { n: 15 },
            ("shor", n) => Workload::Shor {
                n: n.parse().with_context(|| format!("bad N in '{s}'"))?,
            },
            ("file", p) if !p.is_empty() => Workload::File { path: p.into() },
            ("random", spec) => {
                let (q, d) = spec
                    .split_once(':')
                    .ok_or_else(|| anyhow!("expected random:<qubits>:<depth>, got '{s}'"))?;
                Workload::Random {
                    qubits: q.parse().context("random qubit count")?,
                    depth: d.parse().context("random depth")?,
                }
            }
            _ => bail!("unknown workload '{s}'"),
        })
    }
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Workload::Bell => f.write_str("bell"),
            Workload::Shor { n } => write!(f, "shor:{n}"),
            Workload::Vqe => f.write_str("vqe"),
            Workload::File { path } => write!(f, "file:{}", path.display()),
            Workload::Random { qubits, depth } => write!(f, "random:{qubits}:{depth}"),
        }
    }
}

/// Bases used by the Shor workload: 2 and 7 where they are coprime to `n`,
/// else every coprime base.
pub fn shor_bases(n: u64) -> Vec<u64> {
    let coprime = |a: &u64| gcd(*a, n) == 1;
    let preferred: Vec<u64> = [2, 7]
        .into_iter()
        .filter(|a| *a < n)
        .filter(coprime)
        .collect();
    if preferred.is_empty() {
        (2..n).filter(coprime).collect()
    } else {
        preferred
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Per-task result summary. Equal specs and seeds give equal digests
/// regardless of mode or worker counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Digest {
    Counts {
        total: u64,
        outcomes: usize,
        /// Tallies when there are at most 16 outcomes.
        #[serde(skip_serializing_if = "Option::is_none", default)]
        tallies: Option<Counts>,
        valid: bool,
    },
    Divisors {
        n: u64,
        a: u64,
        order: Option<u64>,
        divisors: BTreeSet<u64>,
        valid: bool,
    },
    Vqe {
        opt_val: f64,
        opt_params: Vec<f64>,
        iterations: usize,
        valid: bool,
    },
}

impl Digest {
    pub fn is_valid(&self) -> bool {
        match self {
            Digest::Counts { valid, .. }
            | Digest::Divisors { valid, .. }
            | Digest::Vqe { valid, .. } => *valid,
        }
    }
}

/// Everything a single task needs besides the runtime.
#[derive(Debug, Clone)]
pub struct TaskInput {
    pub index: usize,
    pub shots: u64,
    /// Register size and scalar arguments for file workloads.
    pub size: Option<usize>,
    pub args: Vec<f64>,
    pub circuit_seed: u64,
}

impl Workload {
    /// Shots used when the spec leaves them unset.
    pub fn default_shots(&self) -> u64 {
        match self {
            Workload::Bell | Workload::File { .. } => 1024,
            Workload::Shor { .. } => 10,
            Workload::Vqe => 1,
            Workload::Random { .. } => 4,
        }
    }

    /// Loads and lowers anything that does not depend on the task. Call once
    /// before timing.
    pub fn prepare(
        &self,
        size: Option<usize>,
        args: &[f64],
        circuit_seed: u64,
    ) -> Result<Prepared> {
        Ok(match self {
            Workload::Bell => Prepared::Circuit(bell_kernel()),
            Workload::Shor { n } => {
                if *n < 3 {
                    bail!("shor workload needs N >= 3");
                }
                Prepared::Shor(*n, shor_bases(*n))
            }
            Workload::Vqe => Prepared::Vqe,
            Workload::File { path } => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let src =
                    dsl::parse_kernel(&text).map_err(|e| anyhow!("{}:{e}", path.display()))?;
                let size = size
                    .or(src.register.size)
                    .ok_or_else(|| anyhow!("{} needs a register size (--size)", path.display()))?;
                Prepared::Circuit(
                    dsl::lower(&src, size, args).map_err(|e| anyhow!("{}: {e}", path.display()))?,
                )
            }
            Workload::Random { qubits, depth } => {
                Prepared::Circuit(random_circuit(*qubits, *depth, circuit_seed)?)
            }
        })
    }
}

/// A workload after loading, shared read-only by all tasks.
#[derive(Debug, Clone)]
pub enum Prepared {
    Circuit(Circuit),
    Shor(u64, Vec<u64>),
    Vqe,
}

impl Prepared {
    /// Runs one task on the calling worker, which must be initialized in `rt`.
    pub fn run_task(&self, rt: &Runtime, input: &TaskInput) -> Result<Digest> {
        match self {
            Prepared::Circuit(c) => {
                let q = rt.qalloc(c.n_qubits())?;
                rt.execute(c, &q, input.shots)?;
                Ok(counts_digest(c, &q.measurements(), input.shots))
            }
            Prepared::Shor(n, bases) => {
                let a = bases[input.index % bases.len()];
                let mut p = ShorParams::new(*n, a);
                p.n_shots = input.shots;
                let report = shor_attempt(rt, &p)?;
                let divisors = report.divisors(*n).unwrap_or_default();
                let valid = divisors.iter().all(|d| *d > 1 && *d < *n && n % d == 0);
                Ok(Digest::Divisors {
                    n: *n,
                    a,
                    order: report.estimate.and_then(|e| e.order),
                    divisors,
                    valid,
                })
            }
            Prepared::Vqe => {
                // task i starts from a different point on the landscape
                let start = 0.5 + input.index as f64 * 0.25;
                let r = vqe_minimize(&VqeConfig {
                    initial_params: vec![start],
                    ..VqeConfig::default()
                })?;
                Ok(Digest::Vqe {
                    valid: r.converged && r.opt_val.is_finite(),
                    opt_val: r.opt_val,
                    opt_params: r.opt_params,
                    iterations: r.iterations,
                })
            }
        }
    }
}

fn counts_digest(c: &Circuit, counts: &Counts, shots: u64) -> Digest {
    let width = c.measured_qubits().len();
    let mut valid = counts.total() == shots && counts.keys().all(|k| k.len() == width);
    if c.name() == "bell" {
        // 4 sigma envelope around shots / 2
        let n00 = counts.get("00") as f64;
        let half = shots as f64 / 2.0;
        valid &= counts.keys().all(|k| k == "00" || k == "11")
            && (n00 - half).abs() <= 2.0 * (shots as f64).sqrt();
    }
    Digest::Counts {
        total: counts.total(),
        outcomes: counts.len(),
        tallies: (counts.len() <= 16).then(|| counts.clone()),
        valid,
    }
}

/// `depth` layers of random single-qubit rotations followed by a CX ladder
/// on alternating pairs, then a measurement of every qubit.
pub fn random_circuit(qubits: usize, depth: usize, seed: u64) -> Result<Circuit> {
    if qubits == 0 {
        bail!("random circuit needs at least one qubit");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(format!("random_{qubits}x{depth}"), qubits);
    for layer in 0..depth {
        for q in 0..qubits {
            let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            c.push(match rng.random_range(0..3) {
                0 => Instruction::Rx(q, theta),
                1 => Instruction::Ry(q, theta),
                _ => Instruction::Rz(q, theta),
            })?;
        }
        for q in (layer % 2..qubits.saturating_sub(1)).step_by(2) {
            c.push(Instruction::CX {
                control: q,
                target: q + 1,
            })?;
        }
    }
    for q in 0..qubits {
        c.push(Instruction::Measure(q))?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["bell", "vqe", "shor:21", "file:k.xqk", "random:20:4"] {
            assert_eq!(s.parse::<Workload>().unwrap().to_string(), s);
        }
        assert_eq!(
            "shor".parse::<Workload>().unwrap(),
            Workload::Shor { n: 15 }
        );
        assert!("nope".parse::<Workload>().is_err());
        assert!("random:3".parse::<Workload>().is_err());
    }

    #[test]
    fn bases() {
        assert_eq!(shor_bases(15), vec![2, 7]);
        assert_eq!(shor_bases(7), vec![2]);
        assert_eq!(shor_bases(21), vec![2]);
        assert_eq!(shor_bases(4), vec![3]);
    }

    #[test]
    fn random_circuit_is_seeded() {
        let a = random_circuit(5, 3, 1).unwrap();
        assert_eq!(a, random_circuit(5, 3, 1).unwrap());
        assert_ne!(a, random_circuit(5, 3, 2).unwrap());
        assert_eq!(a.measured_qubits().len(), 5);
    }
}
