//! Multi-threaded exhaustive search. Workers take the smallest chosen vote
//! of each subset as their unit of work; the answer equals the sequential one.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use peak_core::control::{CcavInstance, CcdvInstance, Search, SearchOptions, Solution};
use peak_core::error::Error;

/// Environment variable bounding the number of worker threads.
pub const THREADS_VAR: &str = "PEAKCTL_THREADS";

/// `PEAKCTL_THREADS` when set to a positive integer, else the machine's parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get))
}

/// Smallest size first; within a size, the lexicographically first subset.
pub fn run(search: &Search, threads: usize) -> Option<Solution> {
    if search.empty_works() {
        return Some(Solution::default());
    }
    let threads = threads.max(1);
    let items = search.item_count();
    for k in 1..=search.budget() {
        let next = AtomicUsize::new(0);
        let best = AtomicUsize::new(usize::MAX);
        let found: Mutex<Option<(usize, Solution)>> = Mutex::new(None);
        std::thread::scope(|s| {
            for _ in 0..threads.min(items) {
                s.spawn(|| loop {
                    let first = next.fetch_add(1, Ordering::Relaxed);
                    if first + k > items || first > best.load(Ordering::Relaxed) {
                        break;
                    }
                    if let Some(sol) = search.first_with(k, first) {
                        best.fetch_min(first, Ordering::Relaxed);
                        let mut slot = found.lock().expect("no worker panics while holding the lock");
                        if slot.as_ref().is_none_or(|(f, _)| first < *f) {
                            *slot = Some((first, sol));
                        }
                        break;
                    }
                });
            }
        });
        if let Some((_, sol)) = found.into_inner().expect("workers finished") {
            return Some(sol);
        }
    }
    None
}

pub fn brute_force_ccav(inst: &CcavInstance, opts: &SearchOptions, threads: usize) -> Result<Option<Solution>, Error> {
    Ok(run(&Search::ccav(inst, opts)?, threads))
}

pub fn brute_force_ccdv(inst: &CcdvInstance, opts: &SearchOptions, threads: usize) -> Result<Option<Solution>, Error> {
    Ok(run(&Search::ccdv(inst, opts)?, threads))
}
