//! Batch evaluation across independent problem instances.
//!
//! Solves are deterministic and share no state, so sweeps over seeds or
//! instances are data-parallel. With the `parallel` feature (default) the
//! indexed map runs on rayon; without it, it degrades to the sequential
//! loop. `map_indexed_seq` is always sequential and exists so benchmarks
//! can compare the two paths in a single build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Apply `f` to every index in `0..count`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// Apply `f` to every index in `0..count`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(count, f)
}

/// Sequential reference path for the same map.
pub fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let par = map_indexed(64, |i| i * i);
        let seq = map_indexed_seq(64, |i| i * i);
        assert_eq!(par, seq);
    }
}
