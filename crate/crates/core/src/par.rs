//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) independent work items run on the
//! rayon pool; without it, or when [`Execution::Sequential`] is requested,
//! they run in order on the calling thread. Output order always matches
//! input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map_indexed<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec.is_parallel() && items.len() > 1 {
            return items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect();
        }
    }
    let _ = exec;
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}
