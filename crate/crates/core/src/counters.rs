//! Process-wide operation counters, used to confirm that cached runs do not
//! redo matrix work.

use std::sync::atomic::{AtomicU64, Ordering};

static ELIMINATIONS: AtomicU64 = AtomicU64::new(0);

pub(crate) fn record_elimination() {
    ELIMINATIONS.fetch_add(1, Ordering::Relaxed);
}

/// Number of matrix reductions (sparse eliminations and Smith forms)
/// performed so far in this process.
pub fn eliminations() -> u64 {
    ELIMINATIONS.load(Ordering::Relaxed)
}

static REORTHONORMALIZATIONS: AtomicU64 = AtomicU64::new(0);

pub(crate) fn record_reorthonormalization() {
    REORTHONORMALIZATIONS.fetch_add(1, Ordering::Relaxed);
}

/// Number of frames re-orthonormalized after drifting.
pub fn reorthonormalizations() -> u64 {
    REORTHONORMALIZATIONS.load(Ordering::Relaxed)
}
