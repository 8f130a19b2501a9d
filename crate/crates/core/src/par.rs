//! Data-parallel helpers. With the `parallel` feature the loops run on the
//! rayon pool; without it (or with [`Exec::Sequential`]) they run inline.
//! Results never depend on the strategy: reductions are associative merges.

use std::ops::Range;

/// Execution strategy for the exhaustive loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
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
    /// True when this strategy will actually use worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Folds `step` over `range` with one accumulator per worker, then merges.
pub fn fold_range<A, I, S, M>(exec: Exec, range: Range<u64>, init: I, step: S, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    S: Fn(&mut A, u64) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return range
            .into_par_iter()
            .fold(&init, |mut acc, i| {
                step(&mut acc, i);
                acc
            })
            .reduce(&init, &merge);
    }
    let _ = (&merge, exec);
    let mut acc = init();
    for i in range {
        step(&mut acc, i);
    }
    acc
}

/// Maps every index of `range` to a value, keeping index order.
pub fn map_range<T, F>(exec: Exec, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// First index (smallest) satisfying `pred`, deterministic under both
/// strategies.
pub fn find_first<F>(exec: Exec, range: Range<u64>, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return range.into_par_iter().find_first(|&i| pred(i));
    }
    let _ = exec;
    range.into_iter().find(|&i| pred(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let s = fold_range(exec, 0..1000, || 0u64, |a, i| *a += i * i, |a, b| a + b);
            assert_eq!(s, (0..1000u64).map(|i| i * i).sum::<u64>());
            assert_eq!(map_range(exec, 0..5, |i| i * 2), vec![0, 2, 4, 6, 8]);
            assert_eq!(find_first(exec, 0..1000, |i| i > 10 && i % 7 == 0), Some(14));
            assert_eq!(find_first(exec, 0..10, |_| false), None);
        }
    }
}
