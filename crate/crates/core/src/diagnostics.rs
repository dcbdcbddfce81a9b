//! Process-wide invariant violation counters.
//!
//! Hot paths check their postconditions and bump a counter instead of
//! panicking, so long benchmark runs can report violations at the end.

use std::sync::atomic::{AtomicU64, Ordering};

static FM_CUT_INCREASES: AtomicU64 = AtomicU64::new(0);
static PHI_OUT_OF_RANGE: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Violations {
    /// Refinement calls that returned a larger cut than they were given.
    pub fm_cut_increases: u64,
    /// Conductance values outside `[0, 1]`.
    pub phi_out_of_range: u64,
}

impl Violations {
    pub fn total(&self) -> u64 {
        self.fm_cut_increases + self.phi_out_of_range
    }
}

pub fn violations() -> Violations {
    Violations {
        fm_cut_increases: FM_CUT_INCREASES.load(Ordering::Relaxed),
        phi_out_of_range: PHI_OUT_OF_RANGE.load(Ordering::Relaxed),
    }
}

pub(crate) fn record_fm_cut_increase() {
    FM_CUT_INCREASES.fetch_add(1, Ordering::Relaxed);
}

pub(crate) fn record_phi_out_of_range() {
    PHI_OUT_OF_RANGE.fetch_add(1, Ordering::Relaxed);
}
