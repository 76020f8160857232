//! Data-parallel mapping with a sequential fallback.
//!
//! With the `parallel` feature (default) the maps run on rayon; without it
//! they degrade to plain iterators. Work items are seeded by index, so the
//! two paths produce identical results and output order is always the input
//! order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_index<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
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

/// Map `f` over a slice, collecting results in input order.
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
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

/// Sequential twin of [`map_index`], kept unconditionally for benchmarks that
/// compare the two execution paths.
pub fn map_index_seq<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let par: Vec<u64> = map_index(100, |i| (i as u64).wrapping_mul(0x9E37));
        let seq: Vec<u64> = map_index_seq(100, |i| (i as u64).wrapping_mul(0x9E37));
        assert_eq!(par, seq);
    }

    #[test]
    fn map_slice_preserves_order() {
        let items: Vec<usize> = (0..50).collect();
        let out = map_slice(&items, |&x| x * 2);
        assert_eq!(out, (0..50).map(|x| x * 2).collect::<Vec<_>>());
    }
}
