//! Deterministic parallel map over trial indices.
//!
//! Trials are grouped into fixed blocks; workers race over blocks, but block
//! boundaries, per-trial randomness, and the final reduction order are all
//! functions of `(trials, master_seed)` alone. Running with one worker or
//! sixty-four therefore produces bit-identical results.

use rayon::prelude::*;

use super::stats::{merge_ordered, RunningStats};

const BLOCK: u64 = 1024;

/// Dedicated pool with `workers` threads (0 = one per core).
pub fn worker_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool construction cannot fail for sane thread counts")
}

fn block_ranges(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(BLOCK))
        .map(|b| (b * BLOCK, ((b + 1) * BLOCK).min(trials)))
        .collect()
}

/// Run `work(master_seed, trial)` for every trial; `workers = 0` uses all
/// cores. Results come back in trial order.
pub fn parallel_collect<F>(trials: u64, master_seed: u64, workers: usize, work: F) -> Vec<f64>
where
    F: Fn(u64, u64) -> f64 + Sync,
{
    let blocks = block_ranges(trials);
    let per_block: Vec<Vec<f64>> = worker_pool(workers).install(|| {
        blocks
            .par_iter()
            .map(|&(lo, hi)| (lo..hi).map(|t| work(master_seed, t)).collect())
            .collect()
    });
    per_block.concat()
}

/// Streamed variant of [`parallel_collect`]: per-block accumulators merged
/// in fixed order, for sweeps that never need the raw samples.
pub fn parallel_trials<F>(trials: u64, master_seed: u64, workers: usize, work: F) -> RunningStats
where
    F: Fn(u64, u64) -> f64 + Sync,
{
    let blocks = block_ranges(trials);
    let per_block: Vec<RunningStats> = worker_pool(workers).install(|| {
        blocks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut s = RunningStats::new();
                for t in lo..hi {
                    s.push(work(master_seed, t));
                }
                s
            })
            .collect()
    });
    merge_ordered(per_block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::rng::trial_rng;
    use rand::Rng;

    fn noisy(seed: u64, trial: u64) -> f64 {
        let mut rng = trial_rng(seed, trial, 0);
        rng.random::<f64>() * 2.0 - 1.0
    }

    #[test]
    fn worker_count_is_invisible() {
        let one = parallel_trials(10_000, 42, 1, noisy);
        let eight = parallel_trials(10_000, 42, 8, noisy);
        assert_eq!(one.count(), eight.count());
        assert!((one.mean() - eight.mean()).abs() <= 1e-12);
        let rel = (one.variance() - eight.variance()).abs() / one.variance();
        assert!(rel <= 1e-9);

        let a = parallel_collect(5_000, 42, 1, noisy);
        let b = parallel_collect(5_000, 42, 7, noisy);
        assert_eq!(a, b); // bitwise
    }

    #[test]
    fn constant_work() {
        let s = parallel_trials(3_000, 0, 4, |_, _| 5.0);
        assert_eq!(s.mean(), 5.0);
        assert_eq!(s.variance(), 0.0);
    }

    #[test]
    fn single_trial() {
        let s = parallel_trials(1, 9, 4, |_, _| 2.5);
        assert_eq!(s.count(), 1);
        assert_eq!(s.variance(), 0.0);
    }

    #[test]
    fn collect_preserves_trial_order() {
        let xs = parallel_collect(2_500, 11, 6, |_, t| t as f64);
        assert!(xs.iter().enumerate().all(|(i, &x)| x == i as f64));
    }
}
