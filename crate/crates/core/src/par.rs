//! Thin shims over rayon so that the sequential build compiles the same call
//! sites. Every helper preserves input order in its result.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, keeping order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
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

/// Maps `f` over `0..n`, keeping order.
pub fn map_range<R, F>(n: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Returns the result for the lowest index in `0..n` where `f` yields `Some`.
pub fn find_map_first_range<R, F>(n: u64, f: F) -> Option<R>
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

/// Folds `f(i)` for `i in 0..n` with an associative, commutative `combine`.
pub fn fold_range<A, F, C>(n: u64, identity: impl Fn() -> A + Sync + Send, f: F, combine: C) -> A
where
    A: Send,
    F: Fn(A, u64) -> A + Sync + Send,
    C: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .fold(&identity, &f)
            .reduce(&identity, &combine)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &combine;
        (0..n).fold(identity(), f)
    }
}
