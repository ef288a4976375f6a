use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rayon::ThreadPool;

use super::{Result, SimError};

/// States smaller than this run serially even when a pool is available.
pub(crate) const PAR_THRESHOLD: usize = 1 << 12;
const MIN_PAR_LEN: usize = 1 << 10;
// Fixed reduction granularity keeps sums bit-identical for any pool size.
const REDUCE_CHUNK: usize = 1 << 12;

/// Data-parallel worker pool for amplitude updates inside one simulation.
///
/// Each instance owns its own rayon pool so that two accelerators never
/// compete for the same threads. `workers <= 1` means plain serial loops.
#[derive(Clone, Default)]
pub struct InnerParallelism {
    pool: Option<Arc<ThreadPool>>,
}

impl fmt::Debug for InnerParallelism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InnerParallelism")
            .field("workers", &self.workers())
            .finish()
    }
}

impl InnerParallelism {
    pub fn serial() -> Self {
        InnerParallelism { pool: None }
    }

    pub fn with_workers(workers: usize) -> Result<Self> {
        if workers <= 1 {
            return Ok(InnerParallelism::serial());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("qcrt-inner-{i}"))
            .build()
            .map_err(|e| SimError::Pool(e.to_string()))?;
        Ok(InnerParallelism {
            pool: Some(Arc::new(pool)),
        })
    }

    pub fn workers(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }

    fn pool_for(&self, len: usize) -> Option<&ThreadPool> {
        if len >= PAR_THRESHOLD {
            self.pool.as_deref()
        } else {
            None
        }
    }

    /// Calls `f(i, a_i, a_j)` for every index pair `(i, j = i | 1 << target)`
    /// with bit `target` of `i` clear.
    pub(crate) fn for_each_pair<F>(&self, amps: &mut [Complex64], target: usize, f: F)
    where
        F: Fn(usize, &mut Complex64, &mut Complex64) + Send + Sync,
    {
        let half = 1usize << target;
        let block = half << 1;
        match self.pool_for(amps.len()) {
            None => {
                for (b, chunk) in amps.chunks_mut(block).enumerate() {
                    let (lo, hi) = chunk.split_at_mut(half);
                    let base = b * block;
                    for (k, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                        f(base + k, x, y);
                    }
                }
            }
            Some(pool) => pool.install(|| {
                amps.par_chunks_mut(block)
                    .enumerate()
                    .with_min_len((MIN_PAR_LEN / block).max(1))
                    .for_each(|(b, chunk)| {
                        let (lo, hi) = chunk.split_at_mut(half);
                        let base = b * block;
                        lo.par_iter_mut()
                            .zip(hi.par_iter_mut())
                            .enumerate()
                            .with_min_len(MIN_PAR_LEN)
                            .for_each(|(k, (x, y))| f(base + k, x, y));
                    })
            }),
        }
    }

    /// Calls `f(i, a_i)` for every amplitude.
    pub(crate) fn for_each_amp<F>(&self, amps: &mut [Complex64], f: F)
    where
        F: Fn(usize, &mut Complex64) + Send + Sync,
    {
        match self.pool_for(amps.len()) {
            None => amps.iter_mut().enumerate().for_each(|(i, a)| f(i, a)),
            Some(pool) => pool.install(|| {
                amps.par_iter_mut()
                    .enumerate()
                    .with_min_len(MIN_PAR_LEN)
                    .for_each(|(i, a)| f(i, a))
            }),
        }
    }

    /// Replaces the vector by `new[j] = old[source(j)]`. `source` must be a
    /// bijection on indices.
    pub(crate) fn gather<F>(&self, amps: &mut Vec<Complex64>, source: F)
    where
        F: Fn(usize) -> usize + Send + Sync,
    {
        let old = &*amps;
        let new: Vec<Complex64> = match self.pool_for(old.len()) {
            None => (0..old.len()).map(|j| old[source(j)]).collect(),
            Some(pool) => pool.install(|| {
                (0..old.len())
                    .into_par_iter()
                    .with_min_len(MIN_PAR_LEN)
                    .map(|j| old[source(j)])
                    .collect()
            }),
        };
        *amps = new;
    }

    /// Deterministic sum of `f(i, a_i)` over all amplitudes.
    pub(crate) fn sum<F>(&self, amps: &[Complex64], f: F) -> f64
    where
        F: Fn(usize, &Complex64) -> f64 + Send + Sync,
    {
        let chunk_sum = |(c, chunk): (usize, &[Complex64])| -> f64 {
            let base = c * REDUCE_CHUNK;
            chunk.iter().enumerate().map(|(k, a)| f(base + k, a)).sum()
        };
        let partials: Vec<f64> = match self.pool_for(amps.len()) {
            None => amps
                .chunks(REDUCE_CHUNK)
                .enumerate()
                .map(chunk_sum)
                .collect(),
            Some(pool) => pool.install(|| {
                amps.par_chunks(REDUCE_CHUNK)
                    .enumerate()
                    .map(chunk_sum)
                    .collect()
            }),
        };
        partials.into_iter().sum()
    }
}
