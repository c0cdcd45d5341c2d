//! Order-preserving batch execution.
//!
//! With the `parallel` feature, [`Execution::Parallel`] fans work out over the
//! rayon global pool (or the pool installed by [`with_jobs`]). Without it every
//! batch runs sequentially.

/// How a batch is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Maps `f` over `items`, returning results in input order.
pub fn map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Runs `f` with batch parallelism capped at `jobs` threads.
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(jobs) = jobs {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
            return pool.install(f);
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let items: Vec<u64> = (0..1000).collect();
        let squares = map(&items, Execution::Parallel, |x| x * x);
        assert_eq!(squares, map(&items, Execution::Sequential, |x| x * x));
        assert_eq!(squares[999], 998_001);
    }

    #[test]
    fn capped_pool_runs() {
        let items: Vec<u32> = (0..64).collect();
        let sum: u32 = with_jobs(Some(2), || map(&items, Execution::Parallel, |x| *x).iter().sum());
        assert_eq!(sum, 2016);
    }
}
