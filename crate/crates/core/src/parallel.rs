//! Branch enumeration shared by the restriction-based solvers.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use crate::counters::WorkCounters;
use crate::error::Result;

/// Runs `visit` on branches `0..total` until one yields a value.
///
/// With one thread the branches are visited in order and the result is
/// deterministic. With more, branches are handed out dynamically and the
/// first witness found by any worker wins.
pub(crate) fn find_branch<T, F>(total: u64, threads: usize, visit: F) -> Result<(Option<T>, WorkCounters)>
where
    T: Send,
    F: Fn(u64, &mut WorkCounters) -> Result<Option<T>> + Sync,
{
    let mut counters = WorkCounters::default();
    if threads <= 1 || total <= 1 {
        for branch in 0..total {
            if let Some(hit) = visit(branch, &mut counters)? {
                return Ok((Some(hit), counters));
            }
        }
        return Ok((None, counters));
    }

    let next = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let outcome: Mutex<Option<Result<T>>> = Mutex::new(None);
    let per_thread: Vec<WorkCounters> = std::thread::scope(|scope| {
        let workers: Vec<_> = (0..threads)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = WorkCounters::default();
                    while !stop.load(Ordering::Relaxed) {
                        let branch = next.fetch_add(1, Ordering::Relaxed);
                        if branch >= total {
                            break;
                        }
                        match visit(branch, &mut local) {
                            Ok(None) => {}
                            Ok(Some(hit)) => {
                                stop.store(true, Ordering::Relaxed);
                                outcome.lock().unwrap().get_or_insert(Ok(hit));
                            }
                            Err(e) => {
                                stop.store(true, Ordering::Relaxed);
                                outcome.lock().unwrap().get_or_insert(Err(e));
                            }
                        }
                    }
                    local
                })
            })
            .collect();
        workers.into_iter().map(|w| w.join().unwrap()).collect()
    });
    for c in per_thread {
        counters += c;
    }
    match outcome.into_inner().unwrap() {
        Some(Ok(hit)) => Ok((Some(hit), counters)),
        Some(Err(e)) => Err(e),
        None => Ok((None, counters)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree_on_existence() {
        for threads in [1, 4] {
            let (hit, c) = find_branch(1000, threads, |b, c| {
                c.branches += 1;
                Ok((b == 777).then_some(b))
            })
            .unwrap();
            assert_eq!(hit, Some(777));
            assert!(c.branches >= 1);
            let (miss, c) = find_branch(100, threads, |_, c| {
                c.branches += 1;
                Ok(None::<u64>)
            })
            .unwrap();
            assert_eq!(miss, None);
            assert_eq!(c.branches, 100);
        }
    }
}
