//! Block decomposition of `P(M_{k_n} <= u_n)`.
//!
//! The `k_n` observations are cut into `r_n = floor(k_n / (j_n + 1))` blocks
//! of length `j_n + 1`; the maximum law is compared with the `r_n`-th power
//! of the exact block law.

use crate::error::{argument, Result};
use crate::marginal::psi_exact;
use crate::params::Params;
use crate::simulate::{empirical_max_law, Mode, MonteCarloConfig};

use super::levels::LevelSet;
use super::recursion::closed_form;

/// How the separating gap `l_n` between sub-blocks is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllRule {
    /// `ceil(sqrt(j_n))`, clamped to `j_n - 1`.
    SqrtJ,
    Fixed(u32),
}

impl EllRule {
    pub fn ell(self, j_n: u32) -> u32 {
        let raw = match self {
            EllRule::SqrtJ => (j_n as f64).sqrt().ceil() as u32,
            EllRule::Fixed(l) => l,
        };
        raw.min(j_n.saturating_sub(1))
    }
}

/// Deterministic pieces of the blocking error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockingBounds {
    pub ell: u32,
    pub r: u64,
    /// `j_n q^n psi(x)`: observations left over after the last block.
    pub t1: f64,
    /// `r_n l_n q^n psi(x)`: exceedances inside the separating gaps.
    pub t2: f64,
    /// `r_n (l_n + 1) q^n psi(x)`: cost of reinserting the gaps.
    pub t4: f64,
    /// `P(M_{j_n + 1} <= u_n)^{floor(k_n / j_n)}` from the closed form.
    pub block_power: f64,
}

impl BlockingBounds {
    pub fn total(&self) -> f64 {
        self.t1 + self.t2 + self.t4
    }
}

pub fn blocking_bounds(
    params: &Params,
    levels: &LevelSet,
    rule: EllRule,
    depth: u32,
) -> Result<BlockingBounds> {
    let j = levels.j_n;
    if j < 1 {
        return argument("blocking needs j_n >= 1");
    }
    let ell = rule.ell(j);
    let r = levels.k_n / (j as u64 + 1);
    let tail = params.q().powi(levels.n as i32) * psi_exact(params, levels.x_exact(), depth)?;
    let block = closed_form(params, levels, j + 1, depth)?;
    Ok(BlockingBounds {
        ell,
        r,
        t1: j as f64 * tail,
        t2: r as f64 * ell as f64 * tail,
        t4: r as f64 * (ell as f64 + 1.0) * tail,
        block_power: block.powf((levels.k_n / j as u64) as f64),
    })
}

/// Monte Carlo estimate of the blocking gap
/// `|P(M_{k_n} <= u_n) - P(M_{j_n+1} <= u_n)^{floor(k_n / j_n)}|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockingGap {
    pub bounds: BlockingBounds,
    pub max_law: f64,
    pub max_law_ci: f64,
    pub gap: f64,
}

impl BlockingGap {
    /// `gap <= T1 + T2 + T4 + CI`.
    pub fn within_bound(&self) -> bool {
        self.gap <= self.bounds.total() + self.max_law_ci
    }
}

pub fn blocking_gap(
    params: &Params,
    levels: &LevelSet,
    rule: EllRule,
    cfg: &MonteCarloConfig,
    depth: u32,
) -> Result<BlockingGap> {
    let bounds = blocking_bounds(params, levels, rule, depth)?;
    let law = empirical_max_law(params, &[levels.x], levels.n, cfg, Mode::Dependent)?;
    Ok(BlockingGap {
        bounds,
        max_law: law.estimate[0],
        max_law_ci: law.ci_half_width[0],
        gap: (law.estimate[0] - bounds.block_power).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlaw::make_levels;

    #[test]
    fn cantor_bounds_at_n8() {
        let pr = Params::ratio(1, 3, 0.5).unwrap();
        let lv = make_levels(&pr, -1.0, 8).unwrap();
        let b = blocking_bounds(&pr, &lv, EllRule::SqrtJ, 64).unwrap();
        assert_eq!(lv.j_n, 7);
        assert!((b.t1 - 7.0 / 256.0).abs() < 1e-15);
        assert_eq!(b.ell, 3);
        assert_eq!(b.r, 32);
        assert!((b.t2 - 32.0 * 3.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn ell_is_clamped() {
        assert_eq!(EllRule::SqrtJ.ell(1), 0);
        assert_eq!(EllRule::Fixed(10).ell(4), 3);
        assert_eq!(EllRule::SqrtJ.ell(9), 3);
    }
}
