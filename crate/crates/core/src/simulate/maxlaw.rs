use crate::digits::{BernoulliWords, PackedThreshold, Threshold};
use crate::error::{argument, Result};
use crate::exactlaw::{make_levels, LevelSet};
use crate::parallel::map_indexed;
use crate::params::Params;
use crate::stats::wilson_interval;

use super::config::MonteCarloConfig;
use super::kernel::{window_dependent, window_iid, WindowOutcome};

/// Which sequence the maximum is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// The autoregressive process itself.
    Dependent,
    /// Independent draws with the same stationary marginal.
    Iid,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Dependent => "dep",
            Mode::Iid => "iid",
        }
    }
}

/// Monte Carlo estimates of `P(M_{k_n} <= u_n(x))` over a grid of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalLaw {
    pub mode: Mode,
    pub n: u32,
    pub k_n: u64,
    pub replications: u64,
    pub x: Vec<f64>,
    /// Fraction of replications whose maximum was certainly below the level.
    pub estimate: Vec<f64>,
    /// Half-width of the 95% Wilson interval.
    pub ci_half_width: Vec<f64>,
    /// Replications the digit truncation left undecided (normally zero).
    pub ambiguous: Vec<u64>,
}

pub fn empirical_max_law(
    params: &Params,
    x_grid: &[f64],
    n: u32,
    cfg: &MonteCarloConfig,
    mode: Mode,
) -> Result<EmpiricalLaw> {
    cfg.validate()?;
    if x_grid.is_empty() {
        return argument("x grid is empty");
    }
    let levels: Vec<LevelSet> = x_grid
        .iter()
        .map(|&x| make_levels(params, x, n))
        .collect::<Result<_>>()?;
    let k_n = levels[0].k_n;
    // Compare against thresholds in increasing order of level.
    let mut order: Vec<usize> = (0..x_grid.len()).collect();
    order.sort_by(|&a, &b| x_grid[a].total_cmp(&x_grid[b]));
    let packed: Vec<PackedThreshold> = order
        .iter()
        .map(|&i| Threshold::for_level(params, &levels[i].u_exact()).packed())
        .collect();
    let words = BernoulliWords::for_params(params);
    let outcomes = map_indexed(cfg.replications, |r| {
        let mut rng = cfg.replication_rng(r);
        match mode {
            Mode::Dependent => window_dependent(&words, &mut rng, cfg.depth, &packed, k_n),
            Mode::Iid => window_iid(&words, &mut rng, cfg.depth, &packed, k_n),
        }
    });
    let g = x_grid.len();
    let mut below = vec![0u64; g];
    let mut ambiguous = vec![0u64; g];
    for rep in &outcomes {
        for (slot, o) in rep.iter().enumerate() {
            let i = order[slot];
            match o {
                WindowOutcome::Below => below[i] += 1,
                WindowOutcome::Ambiguous => ambiguous[i] += 1,
                WindowOutcome::Above => {}
            }
        }
    }
    let reps = cfg.replications;
    let mut estimate = Vec::with_capacity(g);
    let mut ci = Vec::with_capacity(g);
    for &b in &below {
        estimate.push(b as f64 / reps as f64);
        let (lo, hi) = wilson_interval(b, reps);
        ci.push(0.5 * (hi - lo));
    }
    Ok(EmpiricalLaw {
        mode,
        n,
        k_n,
        replications: reps,
        x: x_grid.to_vec(),
        estimate,
        ci_half_width: ci,
        ambiguous,
    })
}
