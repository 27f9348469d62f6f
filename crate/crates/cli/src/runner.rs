use rayon::prelude::*;

/// Evaluates `f(i)` for every replica index `i < n` on `workers` threads.
///
/// Indices are split into `workers` contiguous ranges up front and the
/// per-range results are concatenated in index order, so the output does
/// not depend on the worker count as long as `f` depends only on `i`.
pub fn run_replicas<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let workers = workers.max(1);
    let chunk = n.div_ceil(workers).max(1);
    let ranges: Vec<(usize, usize)> = (0..n)
        .step_by(chunk)
        .map(|lo| (lo, (lo + chunk).min(n)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool construction");
    let parts: Vec<Vec<T>> = pool.install(|| {
        ranges
            .par_iter()
            .map(|&(lo, hi)| (lo..hi).map(|i| f(i as u64)).collect())
            .collect()
    });
    parts.into_iter().flatten().collect()
}
