//! Data-parallel map with a sequential fallback.
//!
//! All batch loops in the crate go through [`par_map`] so that the
//! `parallel` feature is the single switch between rayon and plain
//! iteration. The map preserves item order, and callers do any reduction
//! sequentially afterwards, which keeps results bitwise identical across
//! both modes and across thread counts.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Like [`par_map`] for fallible work; the first error (in item order) wins.
pub(crate) fn try_par_map<T, R, F>(items: &[T], f: F) -> crate::Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> crate::Result<R> + Sync + Send,
{
    par_map(items, f).into_iter().collect()
}
