//! Data-parallel evaluation with a sequential fallback.
//!
//! Every Monte Carlo loop in the crate is expressed as an indexed map over
//! independent work items followed by an in-order merge. With the
//! `parallel` feature the map runs on rayon's pool; without it, or with
//! [`Execution::Sequential`], it runs on the calling thread. Both paths
//! produce identical results because each item derives its randomness from
//! its own index (see [`derive_seed`]) and results are merged by index.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Items per work chunk in the Monte Carlo drivers.
pub const CHUNK: usize = 4096;

/// `f(0), f(1), …, f(n-1)` in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// Splits `0..total` into `CHUNK`-sized ranges and maps each range.
pub fn map_chunks<T, F>(exec: Execution, total: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    let chunks = total.div_ceil(CHUNK);
    map_indexed(exec, chunks, |c| {
        let start = c * CHUNK;
        f(start..(start + CHUNK).min(total))
    })
}

/// Deterministic 64-bit seed for item `index` of stream `stream`.
///
/// SplitMix64 finaliser over a combination of the three inputs; distinct
/// (stream, index) pairs give well-separated seeds for the same base.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
