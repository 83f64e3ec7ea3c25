//! Internal fan-out helper.
//!
//! `map_indexed` evaluates `f(0..n)` and collects in index order, so callers
//! aggregate over a deterministically ordered vector no matter how many
//! worker threads rayon uses. Without the `parallel` feature it is a plain
//! sequential map producing the same bytes.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
