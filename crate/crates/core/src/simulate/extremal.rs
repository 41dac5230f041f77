use rand::Rng;

use crate::digits::{BernoulliWords, Threshold};
use crate::error::{Error, Result};
use crate::exactlaw::LevelSet;
use crate::marginal::cdf_exact;
use crate::parallel::map_indexed;
use crate::params::Params;
use crate::stats::sorted_quantile;

use super::config::MonteCarloConfig;
use super::kernel::{scan_dependent, scan_iid, ScanPlan, ScanStats, WindowOutcome};
use super::maxlaw::Mode;

/// Estimator of the extremal index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaMethod {
    /// Clusters per exceedance, clusters separated by at least `j_n`
    /// non-exceedances.
    Runs,
    /// `log P(M_{k_n} <= u_n) / (k_n log F(u_n))`.
    Ratio,
}

impl ThetaMethod {
    pub fn name(self) -> &'static str {
        match self {
            ThetaMethod::Runs => "runs",
            ThetaMethod::Ratio => "ratio",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaEstimate {
    pub method: ThetaMethod,
    pub mode: Mode,
    pub estimate: f64,
    /// Bootstrap percentile interval over replications (95%).
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// The value the estimator targets for the dependent process: `p`.
    pub theta_theory: f64,
    pub exceedances: u64,
    pub clusters: u64,
    /// Replications with `M_{k_n} <= u_n`.
    pub window_below: u64,
    pub replications: u64,
    /// Observations per replication used for cluster statistics.
    pub horizon: u64,
    pub ambiguous: u64,
}

impl ThetaEstimate {
    /// Mean number of exceedances per observation.
    pub fn exceedance_rate(&self) -> f64 {
        self.exceedances as f64 / (self.replications as f64 * self.horizon as f64)
    }
}

/// Default trajectory length for the runs estimator: long enough that the
/// boundary clusters are a small fraction even when `k_n` is small.
pub fn default_runs_horizon(levels: &LevelSet) -> u64 {
    levels.k_n.max(32 * (levels.j_n as u64 + 1))
}

fn simulate(
    params: &Params,
    levels: &LevelSet,
    cfg: &MonteCarloConfig,
    mode: Mode,
    plan: ScanPlan,
) -> Vec<ScanStats> {
    let words = BernoulliWords::for_params(params);
    let thr = Threshold::for_level(params, &levels.u_exact()).packed();
    map_indexed(cfg.replications, |r| {
        let mut rng = cfg.replication_rng(r);
        match mode {
            Mode::Dependent => scan_dependent(&words, &mut rng, cfg.depth, &thr, plan),
            Mode::Iid => scan_iid(&words, &mut rng, cfg.depth, &thr, plan),
        }
    })
}

struct Summary {
    exceedances: u64,
    clusters: u64,
    below: u64,
    ambiguous: u64,
}

fn summarise(stats: &[ScanStats]) -> Summary {
    stats.iter().fold(
        Summary {
            exceedances: 0,
            clusters: 0,
            below: 0,
            ambiguous: 0,
        },
        |mut s, r| {
            s.exceedances += r.exceedances;
            s.clusters += r.clusters;
            s.below += (r.window == WindowOutcome::Below) as u64;
            s.ambiguous += r.ambiguous;
            s
        },
    )
}

fn runs_value(clusters: u64, exceedances: u64) -> Option<f64> {
    (exceedances > 0).then(|| clusters as f64 / exceedances as f64)
}

fn ratio_value(below: u64, reps: u64, k_n: u64, log_f: f64) -> Option<f64> {
    (below > 0 && below < reps).then(|| (below as f64 / reps as f64).ln() / (k_n as f64 * log_f))
}

#[allow(clippy::too_many_arguments)]
fn estimate_from(
    method: ThetaMethod,
    mode: Mode,
    params: &Params,
    levels: &LevelSet,
    cfg: &MonteCarloConfig,
    stats: &[ScanStats],
    horizon: u64,
    log_f: f64,
) -> Result<ThetaEstimate> {
    let reps = cfg.replications;
    let s = summarise(stats);
    let value = |sum: &Summary| match method {
        ThetaMethod::Runs => runs_value(sum.clusters, sum.exceedances),
        ThetaMethod::Ratio => ratio_value(sum.below, reps, levels.k_n, log_f),
    };
    let estimate = value(&s).ok_or_else(|| {
        Error::Undefined(match method {
            ThetaMethod::Runs => "no exceedances observed".to_string(),
            ThetaMethod::Ratio => format!(
                "{} of {reps} windows stayed below the level; the ratio needs 0 < count < reps",
                s.below
            ),
        })
    })?;
    let mut rng = cfg.bootstrap_rng();
    let mut boot = Vec::with_capacity(cfg.bootstrap as usize);
    for _ in 0..cfg.bootstrap {
        let mut sum = Summary {
            exceedances: 0,
            clusters: 0,
            below: 0,
            ambiguous: 0,
        };
        for _ in 0..reps {
            let r = &stats[rng.random_range(0..reps) as usize];
            sum.exceedances += r.exceedances;
            sum.clusters += r.clusters;
            sum.below += (r.window == WindowOutcome::Below) as u64;
        }
        if let Some(v) = value(&sum) {
            boot.push(v);
        }
    }
    boot.sort_by(f64::total_cmp);
    let (ci_lo, ci_hi) = if boot.is_empty() {
        (estimate, estimate)
    } else {
        (sorted_quantile(&boot, 0.025), sorted_quantile(&boot, 0.975))
    };
    Ok(ThetaEstimate {
        method,
        mode,
        estimate,
        ci_lo,
        ci_hi,
        theta_theory: params.p(),
        exceedances: s.exceedances,
        clusters: s.clusters,
        window_below: s.below,
        replications: reps,
        horizon,
        ambiguous: s.ambiguous,
    })
}

/// Extremal index estimate at the level `u_n(x)` of `levels`.
pub fn estimate_extremal_index(
    params: &Params,
    levels: &LevelSet,
    cfg: &MonteCarloConfig,
    method: ThetaMethod,
    mode: Mode,
) -> Result<ThetaEstimate> {
    cfg.validate()?;
    let log_f = cdf_exact(params, &levels.u_exact(), 64)?.value.ln();
    let plan = match method {
        ThetaMethod::Ratio => ScanPlan {
            horizon: levels.k_n,
            window: levels.k_n,
            run_gap: levels.j_n as u64,
            stop_early: true,
        },
        ThetaMethod::Runs => ScanPlan {
            horizon: cfg.horizon.unwrap_or_else(|| default_runs_horizon(levels)),
            window: levels.k_n,
            run_gap: levels.j_n as u64,
            stop_early: false,
        },
    };
    let stats = simulate(params, levels, cfg, mode, plan);
    estimate_from(
        method,
        mode,
        params,
        levels,
        cfg,
        &stats,
        plan.horizon,
        log_f,
    )
}

/// Both estimators from one pass over the replications.
///
/// The trajectory length is the larger of the runs horizon and `k_n`.
pub fn estimate_extremal_index_both(
    params: &Params,
    levels: &LevelSet,
    cfg: &MonteCarloConfig,
    mode: Mode,
) -> Result<(Result<ThetaEstimate>, Result<ThetaEstimate>)> {
    cfg.validate()?;
    let log_f = cdf_exact(params, &levels.u_exact(), 64)?.value.ln();
    let horizon = cfg
        .horizon
        .unwrap_or_else(|| default_runs_horizon(levels))
        .max(levels.k_n);
    let plan = ScanPlan {
        horizon,
        window: levels.k_n,
        run_gap: levels.j_n as u64,
        stop_early: false,
    };
    let stats = simulate(params, levels, cfg, mode, plan);
    Ok((
        estimate_from(
            ThetaMethod::Runs,
            mode,
            params,
            levels,
            cfg,
            &stats,
            horizon,
            log_f,
        ),
        estimate_from(
            ThetaMethod::Ratio,
            mode,
            params,
            levels,
            cfg,
            &stats,
            horizon,
            log_f,
        ),
    ))
}
