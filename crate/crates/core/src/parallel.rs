//! Deterministic index-parallel maps.

use alloc::vec::Vec;

/// Evaluates `f(0), …, f(n-1)` and returns the results in index order.
///
/// With the `std` feature and `workers > 1` the index range is split into
/// contiguous chunks run on scoped threads. The output never depends on
/// `workers`.
pub fn map_indexed<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    #[cfg(feature = "std")]
    if workers > 1 && n > 1 {
        let workers = workers.min(n);
        let chunk = n.div_ceil(workers);
        let f = &f;
        return std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let start = w * chunk;
                    let end = ((w + 1) * chunk).min(n);
                    scope.spawn(move || (start..end).map(f).collect::<Vec<T>>())
                })
                .collect();
            let mut out = Vec::with_capacity(n);
            for h in handles {
                out.extend(h.join().expect("worker panicked"));
            }
            out
        });
    }
    #[cfg(not(feature = "std"))]
    let _ = workers;
    (0..n).map(f).collect()
}
