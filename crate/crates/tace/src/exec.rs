//! Rollout parallelism over scoped OS threads.

use std::num::NonZeroUsize;

use tace_core::trainer::Executor;

pub const THREADS_ENV: &str = "TACE_THREADS";

/// Splits jobs into contiguous chunks, one per thread. Results come back in
/// job order, and every job draws from its own seed-derived stream, so the
/// thread count never changes the output.
#[derive(Debug, Clone, Copy)]
pub struct Threaded {
    threads: usize,
}

impl Threaded {
    pub fn new(threads: usize) -> Self {
        Self { threads: threads.max(1) }
    }

    /// `TACE_THREADS` when set to a positive integer, else the available parallelism.
    pub fn from_env() -> Self {
        let n = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get));
        Self::new(n)
    }

    pub fn threads(&self) -> usize {
        self.threads
    }
}

impl Executor for Threaded {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let threads = self.threads.min(n);
        if threads <= 1 {
            return (0..n).map(f).collect();
        }
        let chunk = n.div_ceil(threads);
        let f = &f;
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..n)
                .step_by(chunk)
                .map(|lo| s.spawn(move || (lo..(lo + chunk).min(n)).map(f).collect::<Vec<T>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("rollout worker panicked")).collect()
        })
    }
}
