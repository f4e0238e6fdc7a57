//! Seeded random benchmark instances.
//!
//! Instances follow the standard protocol: n×n matrices with a fixed
//! number of finite entries per row at distinct random columns and integer
//! values drawn uniformly from a range. Generation is fully determined by
//! `(seed, n, trial)` and a named PRNG, so instances reproduce across
//! platforms and thread counts.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::tropical::{TropicalMatrix, TropicalScalar};
use crate::{Error, Result};

/// Benchmark protocol parameters. The standard configuration uses two
/// finite entries per row with values in 1..=100, ten trials per
/// dimension and a ten-step reach horizon.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Dimensions to sweep.
    pub dims: Vec<usize>,
    /// Instances per dimension.
    pub trials: u32,
    /// Finite entries per row.
    pub finite_per_row: usize,
    /// Inclusive range of finite values.
    pub value_range: (i64, i64),
    /// Base seed; instances derive their streams from it.
    pub seed: u64,
    /// Reach horizon N.
    pub horizon: u32,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            dims: (3..=8).collect(),
            trials: 10,
            finite_per_row: 2,
            value_range: (1, 100),
            seed: 0,
            horizon: 10,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.finite_per_row == 0 {
            return Err(Error::Parse("finite_per_row must be at least 1".into()));
        }
        if let Some(&n) = self.dims.iter().find(|&&n| self.finite_per_row > n) {
            return Err(Error::Parse(format!(
                "finite_per_row = {} exceeds dimension {n}",
                self.finite_per_row
            )));
        }
        if self.value_range.0 > self.value_range.1 {
            return Err(Error::Parse(format!(
                "empty value range {}..={}",
                self.value_range.0, self.value_range.1
            )));
        }
        if self.trials == 0 {
            return Err(Error::Parse("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// The ChaCha8 stream for one instance: seed, n and trial packed
/// little-endian into the 32-byte key.
fn instance_rng(seed: u64, n: usize, trial: u32) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(n as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(trial as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// A random row-finite n×n matrix under the protocol: per row, the finite
/// columns are the first `finite_per_row` entries of a shuffled column
/// list (kept in ascending order), and values are drawn uniformly per
/// chosen column in that order.
pub fn random_row_finite(n: usize, cfg: &BenchConfig, trial: u32) -> Result<TropicalMatrix> {
    if cfg.finite_per_row == 0 || cfg.finite_per_row > n {
        return Err(Error::Parse(format!(
            "finite_per_row = {} out of range for n = {n}",
            cfg.finite_per_row
        )));
    }
    if cfg.value_range.0 > cfg.value_range.1 {
        return Err(Error::Parse(format!(
            "empty value range {}..={}",
            cfg.value_range.0, cfg.value_range.1
        )));
    }
    let mut rng = instance_rng(cfg.seed, n, trial);
    let mut matrix = TropicalMatrix::new(n, n);
    let mut columns: Vec<usize> = (0..n).collect();
    for row in 0..n {
        columns.shuffle(&mut rng);
        let mut chosen: Vec<usize> = columns[..cfg.finite_per_row].to_vec();
        chosen.sort_unstable();
        for col in chosen {
            let value = rng.random_range(cfg.value_range.0..=cfg.value_range.1);
            matrix.set(row, col, TropicalScalar::Finite(value));
        }
    }
    Ok(matrix)
}
