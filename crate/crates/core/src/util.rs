/// Worker cap for the few embarrassingly parallel loops (per-dimension
/// defect evaluation). `ENVCERT_THREADS` overrides the machine default.
pub(crate) fn thread_cap() -> usize {
    if let Ok(s) = std::env::var("ENVCERT_THREADS") {
        if let Ok(n) = s.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Map `f` over `items`, chunked across at most `thread_cap()` scoped
/// threads. Output order matches input order, so results are deterministic.
pub(crate) fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let cap = thread_cap();
    if cap <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let workers = cap.min(items.len());
    let chunk = items.len().div_ceil(workers);
    let chunks: Vec<Vec<T>> = {
        let mut chunks = Vec::new();
        let mut it = items.into_iter();
        loop {
            let c: Vec<T> = it.by_ref().take(chunk).collect();
            if c.is_empty() {
                break;
            }
            chunks.push(c);
        }
        chunks
    };
    std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|c| s.spawn(|| c.into_iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
