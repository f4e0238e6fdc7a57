//! Helpers shared by the integration suites.
//!
//! Sampled coordinates are quarter-integers: sums and differences of such
//! values with integer bounds are exact in f64, so membership checks on
//! strict boundaries behave like real arithmetic.

#![allow(dead_code)]

use std::sync::{Mutex, MutexGuard, OnceLock};

use mpl_core::dbm::Dbm;
use mpl_core::tropical::TropicalMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Serializes tests that read the global instrumentation counters.
pub fn counter_lock() -> MutexGuard<'static, ()> {
    static LOCK: OnceLock<Mutex<()>> = OnceLock::new();
    LOCK.get_or_init(|| Mutex::new(()))
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The 3×3 matrix of the worked examples.
pub fn example_matrix() -> TropicalMatrix {
    TropicalMatrix::from_rows(&[
        vec![None, Some(1), Some(3)],
        vec![Some(5), None, Some(4)],
        vec![Some(7), Some(8), None],
    ])
    .unwrap()
}

/// A random point with quarter-integer coordinates in [-limit, limit].
pub fn random_point(n: usize, limit: i64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(-4 * limit..=4 * limit) as f64 / 4.0)
        .collect()
}

/// A random point inside a canonical non-empty DBM.
///
/// Coordinates are assigned in index order within the interval the already
/// fixed ones allow; canonical closure guarantees the interval is
/// non-empty and collapses to a point only when both endpoints are
/// non-strict.
pub fn sample_point(d: &Dbm, rng: &mut ChaCha8Rng) -> Vec<f64> {
    assert!(
        d.is_canonical() && !d.is_empty(),
        "sample_point needs a canonical non-empty DBM"
    );
    let n = d.n();
    let mut vals = vec![0.0f64; n + 1];
    for i in 1..=n {
        let mut lo = f64::NEG_INFINITY;
        let mut lo_strict = false;
        let mut hi = f64::INFINITY;
        let mut hi_strict = false;
        for (j, &vj) in vals.iter().enumerate().take(i) {
            if let Some(b) = d.bound(i, j).finite() {
                let cand = vj + b as f64;
                if cand > lo {
                    lo = cand;
                    lo_strict = d.sign(i, j).is_strict();
                } else if cand == lo {
                    lo_strict |= d.sign(i, j).is_strict();
                }
            }
            if let Some(b) = d.bound(j, i).finite() {
                let cand = vj - b as f64;
                if cand < hi {
                    hi = cand;
                    hi_strict = d.sign(j, i).is_strict();
                } else if cand == hi {
                    hi_strict |= d.sign(j, i).is_strict();
                }
            }
        }
        vals[i] = pick_quarter(lo, lo_strict, hi, hi_strict, rng);
    }
    let point = vals[1..].to_vec();
    debug_assert!(d.contains_point(&point).unwrap());
    point
}

fn pick_quarter(lo: f64, lo_strict: bool, hi: f64, hi_strict: bool, rng: &mut ChaCha8Rng) -> f64 {
    // coordinates stay dyadic: quarter grid when the interval allows it
    // and the exact midpoint of a narrow open interval otherwise
    let above = |v: f64, strict: bool| {
        let q = (v * 4.0).ceil() as i64;
        q + i64::from(strict && q as f64 / 4.0 == v)
    };
    let below = |v: f64, strict: bool| {
        let q = (v * 4.0).floor() as i64;
        q - i64::from(strict && q as f64 / 4.0 == v)
    };
    match (lo.is_finite(), hi.is_finite()) {
        (false, false) => rng.random_range(-200..=200) as f64 / 4.0,
        (true, false) => {
            let start = above(lo, lo_strict);
            rng.random_range(start..=start + 40) as f64 / 4.0
        }
        (false, true) => {
            let end = below(hi, hi_strict);
            rng.random_range(end - 40..=end) as f64 / 4.0
        }
        (true, true) => {
            assert!(
                lo < hi || (lo == hi && !lo_strict && !hi_strict),
                "canonical non-empty DBM produced an empty interval"
            );
            let start = above(lo, lo_strict);
            let end = below(hi, hi_strict);
            if start <= end {
                rng.random_range(start..=end) as f64 / 4.0
            } else {
                (lo + hi) / 2.0
            }
        }
    }
}
