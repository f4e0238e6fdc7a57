//! Cheap global instrumentation counters.
//!
//! `ops` counts elementary tropical work items (one scalar max/add step in
//! a matrix product, one Floyd-Warshall relaxation, one entry transfer in
//! an image computation). `image_calls` counts invocations of the direct
//! affine-image routine. Counts depend only on input data, never on the
//! execution schedule, so they are reproducible under any thread count.

use std::sync::atomic::{AtomicU64, Ordering};

static OPS: AtomicU64 = AtomicU64::new(0);
static IMAGE_CALLS: AtomicU64 = AtomicU64::new(0);

pub(crate) fn add_ops(n: u64) {
    OPS.fetch_add(n, Ordering::Relaxed);
}

pub(crate) fn count_image_call() {
    IMAGE_CALLS.fetch_add(1, Ordering::Relaxed);
}

/// Reset both counters to zero.
pub fn reset() {
    OPS.store(0, Ordering::Relaxed);
    IMAGE_CALLS.store(0, Ordering::Relaxed);
}

/// Elementary tropical operations performed since the last [`reset`].
pub fn ops() -> u64 {
    OPS.load(Ordering::Relaxed)
}

/// Direct affine-image computations performed since the last [`reset`].
pub fn image_calls() -> u64 {
    IMAGE_CALLS.load(Ordering::Relaxed)
}
