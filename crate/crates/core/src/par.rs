//! Per-block data parallelism.
//!
//! With the `parallel` feature the Fourier blocks are processed on the rayon
//! pool; without it the same closures run in a plain loop. Output order is
//! always block order, and callers reduce sequentially over the returned
//! vector, so results do not depend on the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}

/// Whether this build processes blocks on the rayon pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
