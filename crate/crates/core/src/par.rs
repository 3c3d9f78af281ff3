//! Dispatch points for the data-parallel scans.
//!
//! With the `parallel` feature these run on rayon; without it they fall back
//! to plain loops. Every primitive is order-preserving or reduces with an
//! associative, commutative `min`, so results do not depend on the mode or
//! the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n` and collect in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Map `f` over `items` and collect in order.
#[cfg(feature = "parallel")]
pub(crate) fn map_items<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_items<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Minimum of `f(i)` over `0..n`, ignoring `None`s. The canonical "first
/// violation" scans encode their scan order in the `Ord` of `U`.
#[cfg(feature = "parallel")]
pub(crate) fn min_map_range<U, F>(n: usize, f: F) -> Option<U>
where
    U: Ord + Send,
    F: Fn(usize) -> Option<U> + Sync + Send,
{
    (0..n).into_par_iter().filter_map(f).min()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn min_map_range<U, F>(n: usize, f: F) -> Option<U>
where
    U: Ord + Send,
    F: Fn(usize) -> Option<U> + Sync + Send,
{
    (0..n).filter_map(f).min()
}
