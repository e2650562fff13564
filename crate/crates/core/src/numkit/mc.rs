//! Sharded Monte Carlo. Work is cut into a fixed number of shards, each
//! with its own [`RngStream::shard`], and the accumulators are merged in
//! shard order, so results are identical for any thread count.

use std::sync::OnceLock;

use rayon::prelude::*;
use rayon::ThreadPool;

use super::stats::Welford;
use crate::dist::RngStream;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SIMPLEX_KERNELS_THREADS";

const SHARDS: u64 = 32;

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
    })
}

/// Number of threads the Monte Carlo pool uses.
pub fn thread_count() -> usize {
    pool().current_num_threads()
}

/// Runs `op` inside the capped pool.
pub fn install<R: Send>(op: impl FnOnce() -> R + Send) -> R {
    pool().install(op)
}

/// Runs `draws` samples of `f`, which pushes `width` observations per
/// draw, and returns one accumulator per observation.
pub fn sharded<Fn_>(draws: u64, seed: u64, width: usize, f: Fn_) -> Vec<Welford>
where
    Fn_: Fn(&mut RngStream, &mut [f64]) + Sync,
{
    let per = draws / SHARDS;
    let extra = draws % SHARDS;
    let parts: Vec<Vec<Welford>> = pool().install(|| {
        (0..SHARDS)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngStream::shard(seed, i);
                let mut acc = vec![Welford::new(); width];
                let mut buf = vec![0.0; width];
                for _ in 0..per + u64::from(i < extra) {
                    f(&mut rng, &mut buf);
                    acc.iter_mut().zip(&buf).for_each(|(w, &v)| w.push(v));
                }
                acc
            })
            .collect()
    });
    let mut out = vec![Welford::new(); width];
    for p in &parts {
        out.iter_mut().zip(p).for_each(|(o, w)| o.merge(w));
    }
    out
}

/// Draws `count` items with `f`, shard by shard, and concatenates them in
/// shard order.
pub fn sharded_collect<T: Send>(count: u64, seed: u64, f: impl Fn(&mut RngStream) -> T + Sync) -> Vec<T> {
    let per = count / SHARDS;
    let extra = count % SHARDS;
    let parts: Vec<Vec<T>> = pool().install(|| {
        (0..SHARDS)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngStream::shard(seed, i);
                (0..per + u64::from(i < extra)).map(|_| f(&mut rng)).collect()
            })
            .collect()
    });
    parts.into_iter().flatten().collect()
}

/// Single-observation form of [`sharded`].
pub fn sharded_mean(draws: u64, seed: u64, f: impl Fn(&mut RngStream) -> f64 + Sync) -> Welford {
    sharded(draws, seed, 1, |rng, buf| buf[0] = f(rng)).pop().expect("width 1")
}
