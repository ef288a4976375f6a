//! Multi-threaded quantum-classical runtime built on a parallel state-vector
//! simulator.
//!
//! - [`sim`]: state vectors, gates, measurement, multi-shot sampling.
//! - [`runtime`]: buffer allocation, accelerator factory, per-worker
//!   accelerator manager, kernel execution and task spawning.
//! - [`algorithms`]: Bell, Shor order finding and the deuteron VQE.
//! - [`dsl`]: parser and lowering for `.xqk` kernel files.
#![forbid(unsafe_code)]

pub mod algorithms;
pub mod dsl;
pub mod runtime;
pub mod sim;

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
