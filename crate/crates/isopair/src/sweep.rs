//! Data-parallel sweep helper.
//!
//! Verification sweeps over index tuples and truncation schedules are
//! embarrassingly parallel; results are collected in input order so
//! reports stay deterministic. With the `parallel` feature disabled the
//! crate is rayon-free and `map` degrades to the sequential path.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Order-preserving map over a batch of independent work items.
#[cfg(feature = "parallel")]
pub fn map<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    F: Fn(I) -> T,
{
    map_seq(items, f)
}

/// Sequential reference path; always available, used by the benches to
/// compare against the parallel path.
pub fn map_seq<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    F: Fn(I) -> T,
{
    items.into_iter().map(f).collect()
}

/// Caps the global thread pool (`ISOPAIR_THREADS`). Returns false if the
/// cap could not be applied (pool already started, or sequential build).
pub fn set_thread_cap(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let items: Vec<u64> = (0..1000).collect();
        let out = map(items.clone(), |x| x * x);
        let out_seq = map_seq(items, |x| x * x);
        assert_eq!(out, out_seq);
    }
}
