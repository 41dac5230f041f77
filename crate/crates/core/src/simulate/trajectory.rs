use crate::digits::{BernoulliWords, DigitReader, DigitStream};
use crate::error::{argument, Result};
use crate::params::Params;

use super::config::MonteCarloConfig;

/// A stationary trajectory `X_0, .., X_m`.
///
/// The digits are the primary record: `X_0` is known to `depth` digits and
/// `X_t` is `X_{t-1}` with innovation digit `eps_t` prepended, so
/// `X_t = beta X_{t-1} + eps_t` holds exactly in the digit representation.
/// `x` holds the values rounded to doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub x: Vec<f64>,
    /// `innovations[t - 1]` is one when `eps_t = 1 - beta`.
    pub innovations: Vec<u8>,
    pub x0_digits: DigitStream,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `eps_t` as a value in `{0, 1 - beta}`.
    pub fn epsilon(&self, params: &Params, t: usize) -> f64 {
        if t == 0 {
            return 0.0;
        }
        self.innovations[t - 1] as f64 * (1.0 - params.beta().value())
    }

    /// Known digits of `X_t`: `eps_t, .., eps_1, b_0, .., b_{K-1}`.
    pub fn digits_of(&self, t: usize) -> DigitStream {
        let mut d: Vec<u8> = self.innovations[..t].iter().rev().copied().collect();
        d.extend_from_slice(self.x0_digits.digits());
        DigitStream::new(d)
    }
}

/// Trajectory for replication 0 of the configured seed.
pub fn simulate_ar(params: &Params, cfg: &MonteCarloConfig, m: usize) -> Result<Trajectory> {
    simulate_ar_replication(params, cfg, 0, m)
}

pub fn simulate_ar_replication(
    params: &Params,
    cfg: &MonteCarloConfig,
    replication: u64,
    m: usize,
) -> Result<Trajectory> {
    if cfg.depth == 0 {
        return argument("depth must be positive");
    }
    let mut reader = DigitReader::new(
        BernoulliWords::for_params(params),
        cfg.replication_rng(replication),
    );
    let x0_digits = DigitStream::new((0..cfg.depth).map(|_| reader.next_digit()).collect());
    let beta = params.beta().value();
    let c = 1.0 - beta;
    let mut x = Vec::with_capacity(m + 1);
    x.push(x0_digits.value(beta));
    let mut innovations = Vec::with_capacity(m);
    for t in 0..m {
        let e = reader.next_digit();
        innovations.push(e);
        x.push(beta * x[t] + c * e as f64);
    }
    Ok(Trajectory {
        x,
        innovations,
        x0_digits,
    })
}
