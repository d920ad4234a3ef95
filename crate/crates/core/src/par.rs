//! Deterministic data-parallel helpers. Without the `parallel` feature they
//! run sequentially; results never depend on the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
pub(crate) fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// True iff `f(i)` holds for every `i < n`.
pub(crate) fn all<F>(n: u64, f: F) -> bool
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().all(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).all(f)
    }
}

/// The first `Some` produced by `f` over `0..n`, in index order.
pub(crate) fn find_first<R, F>(n: u64, f: F) -> Option<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(f)
    }
}
