//! Index-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) work items run on the rayon pool;
//! without it, or with [`Execution::Sequential`], they run in order on the
//! calling thread. Results always come back in index order, so output is
//! identical either way.

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Maps `f` over `0..len`, returning results in index order.
pub fn map_indexed<T, F>(len: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..len).map(f).collect(),
        Execution::Parallel => parallel_map(len, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}

/// True when the crate was built with rayon support.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
