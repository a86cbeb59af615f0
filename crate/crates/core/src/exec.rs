//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] runs on the rayon
//! pool; without it, it degrades to the sequential path. Both strategies
//! produce bit-identical results: maps preserve input order and sums are
//! reduced over fixed-size chunks combined in ascending index order, so the
//! rounding sequence never depends on the thread count.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Number of terms per partial sum in [`sum_range`].
pub const SUM_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Whether this strategy actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Ordered map over a slice.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Ordered map over an index range.
pub fn map_range<R, F>(exec: Exec, range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

fn chunk_sum<F: Fn(u64) -> f64>(range: Range<u64>, f: &F) -> f64 {
    range.map(f).sum()
}

/// Deterministic sum of `f(i)` over `range`.
pub fn sum_range<F>(exec: Exec, range: Range<u64>, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    if range.start >= range.end {
        return 0.0;
    }
    let len = range.end - range.start;
    let chunks = len.div_ceil(SUM_CHUNK as u64);
    let start = range.start;
    let end = range.end;
    let bounds = move |c: u64| {
        let lo = start + c * SUM_CHUNK as u64;
        lo..(lo + SUM_CHUNK as u64).min(end)
    };
    let partials = map_range(exec, 0..chunks, |c| chunk_sum(bounds(c), &f));
    partials.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_bitwise() {
        let f = |i: u64| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        for n in [0u64, 1, 17, 4096, 4097, 100_003] {
            let a = sum_range(Exec::Sequential, 0..n, f);
            let b = sum_range(Exec::Parallel, 0..n, f);
            assert_eq!(a.to_bits(), b.to_bits(), "n = {n}");
        }
    }

    #[test]
    fn map_preserves_order() {
        let v: Vec<u64> = (0..10_000).collect();
        let a = map(Exec::Parallel, &v, |x| x * 3);
        let b = map(Exec::Sequential, &v, |x| x * 3);
        assert_eq!(a, b);
        assert_eq!(map_range(Exec::Parallel, 5..9, |i| i), vec![5, 6, 7, 8]);
    }

    #[test]
    fn offset_range_sum() {
        let s = sum_range(Exec::default(), 10..20, |i| i as f64);
        assert_eq!(s, 145.0);
    }
}
