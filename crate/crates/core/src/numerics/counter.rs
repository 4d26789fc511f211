use std::sync::atomic::{AtomicU64, Ordering};

static TERMS: AtomicU64 = AtomicU64::new(0);

/// Adds to the process-wide count of series terms actually summed.
pub fn record_terms(n: u64) {
    TERMS.fetch_add(n, Ordering::Relaxed);
}

/// Series terms summed so far; cache hits do not count.
pub fn terms_summed() -> u64 {
    TERMS.load(Ordering::Relaxed)
}
