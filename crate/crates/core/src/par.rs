//! Batch execution over independent items.
//!
//! With the `parallel` feature (on by default) batches run on the rayon
//! pool; without it, or with [`Execution::Sequential`], they run in a plain
//! loop. Results are always returned in item order, so output does not
//! depend on the choice.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without `parallel`.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// First index (in order) whose item satisfies `pred`.
pub fn find_first<F>(n: usize, exec: Execution, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().find_first(|&i| pred(i)),
        _ => (0..n).find(|&i| pred(i)),
    }
}
