//! Optional data parallelism for replication loops.
//!
//! Work is split by replication index and every replication owns its own
//! random stream, so results do not depend on the number of threads.

use rayon::prelude::*;

/// Environment variable holding the worker thread count. Unset or `1` runs
/// serially.
pub const THREADS_ENV: &str = "CANTOR_EVT_THREADS";

pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// `(0..n).map(f)` collected in index order, in parallel when configured.
pub fn map_indexed<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let threads = thread_count();
    if threads <= 1 {
        return (0..n).map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| (0..n).into_par_iter().map(f).collect()),
        Err(_) => (0..n).map(f).collect(),
    }
}
