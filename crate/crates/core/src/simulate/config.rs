use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{argument, Result};

/// Settings shared by the Monte Carlo routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub seed: u64,
    pub replications: u64,
    /// Digits of `X_0` drawn from the stationary law (at most 128).
    pub depth: u32,
    /// Trajectory length for cluster statistics; `None` picks a default.
    pub horizon: Option<u64>,
    /// Bootstrap resamples for estimator confidence intervals.
    pub bootstrap: u32,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        MonteCarloConfig {
            seed: 0,
            replications: 10_000,
            depth: 64,
            horizon: None,
            bootstrap: 200,
        }
    }
}

impl MonteCarloConfig {
    pub fn new(seed: u64, replications: u64) -> Self {
        MonteCarloConfig {
            seed,
            replications,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return argument("replications must be positive");
        }
        if self.depth == 0 || self.depth > 128 {
            return argument(format!("depth must lie in 1..=128, got {}", self.depth));
        }
        if self.horizon == Some(0) {
            return argument("horizon must be positive");
        }
        Ok(())
    }

    /// Independent stream for replication `r`: ChaCha8 seeded from `seed`
    /// with stream number `r`.
    pub fn replication_rng(&self, r: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(r);
        rng
    }

    /// Stream reserved for bootstrap resampling.
    pub fn bootstrap_rng(&self) -> ChaCha8Rng {
        self.replication_rng(u64::MAX)
    }
}
