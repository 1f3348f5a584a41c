//! Execution policy for the data-parallel loops.
//!
//! Every parallel entry point maps a contiguous index range to per-index
//! results and returns them in index order, so results never depend on the
//! worker count. Without the `parallel` feature everything runs on the
//! calling thread.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Use rayon; `None` means the global pool, `Some(j)` a dedicated pool
    /// with `j` workers.
    #[default]
    Parallel,
    Threads(usize),
}

impl Exec {
    /// `jobs = Some(1)` is sequential, `Some(j)` a `j`-worker pool, `None`
    /// the default pool.
    pub fn from_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            Some(0) | None => Exec::Parallel,
            Some(1) => Exec::Sequential,
            Some(j) => Exec::Threads(j),
        }
    }

    pub fn map_range<R, F>(&self, range: Range<u64>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => range.map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => par_map(range, &f),
            #[cfg(feature = "parallel")]
            Exec::Threads(j) => match rayon::ThreadPoolBuilder::new().num_threads(*j).build() {
                Ok(pool) => pool.install(|| par_map(range, &f)),
                Err(_) => par_map(range, &f),
            },
            #[cfg(not(feature = "parallel"))]
            _ => range.map(f).collect(),
        }
    }

    pub fn map_slice<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.map_range(0..items.len() as u64, |i| f(&items[i as usize]))
    }
}

#[cfg(feature = "parallel")]
fn par_map<R, F>(range: Range<u64>, f: &F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    use rayon::prelude::*;
    range.into_par_iter().map(f).collect()
}
