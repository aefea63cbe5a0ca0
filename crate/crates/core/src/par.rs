//! Deterministic map helpers with an optional rayon backend.

/// Applies `f` to every index in `0..n` and collects the results in index order.
#[cfg(feature = "parallel")]
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Applies `f` to every index in `0..n` and collects the results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sequential version, always available, used by benches for comparison.
pub fn map_range_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// True if any index in `0..n` satisfies `f`.
#[cfg(feature = "parallel")]
pub fn any_range<F>(n: u64, f: F) -> bool
where
    F: Fn(u64) -> bool + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().any(f)
}

/// True if any index in `0..n` satisfies `f`.
#[cfg(not(feature = "parallel"))]
pub fn any_range<F>(n: u64, f: F) -> bool
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..n).any(f)
}
