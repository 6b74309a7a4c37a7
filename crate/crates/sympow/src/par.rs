//! Data-parallel driving loops with a sequential fallback.
//!
//! With the default `parallel` feature the heavy enumeration loops fan out
//! over a rayon pool; without it they run sequentially. Both paths produce
//! identical results: collection preserves the index order of the range, and
//! searches return the match at the smallest index.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(lo..hi).filter_map(f)` collected in index order.
pub(crate) fn filter_map_range<T, F>(lo: u64, hi: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (lo..hi).into_par_iter().filter_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (lo..hi).filter_map(f).collect()
    }
}

/// First (smallest-index) `Some` produced by `f` over `lo..hi`.
pub(crate) fn find_map_first_range<T, F>(lo: u64, hi: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (lo..hi).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (lo..hi).find_map(f)
    }
}

/// Apply `f` to every element, in order.
pub(crate) fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
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
