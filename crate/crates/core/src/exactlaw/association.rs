//! Positive dependence of threshold events on disjoint or overlapping blocks.

use num_rational::BigRational;

use crate::digits::Threshold;
use crate::error::{argument, Result};
use crate::params::Params;

use super::enumeration::{max_event_brackets, Bracket};

/// `P(∩_s A_s)` against `∏_s P(A_s)` for `A_s = {max_{t in I_s} X_t <= u}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBound {
    pub joint: Bracket,
    pub factors: Vec<Bracket>,
    pub product_lower: f64,
    pub product_upper: f64,
    /// Joint probability minus product, using bracket midpoints.
    pub slack: f64,
    /// Worst case of the slack over the brackets.
    pub certified_slack: f64,
    /// Half-width of the joint bracket plus half-width of the product range.
    pub bracket_error: f64,
    /// Exact slack when no cylinder was left undecided.
    pub exact_slack: Option<BigRational>,
}

fn validate(blocks: &[Vec<u32>]) -> Result<()> {
    if blocks.is_empty() {
        return argument("need at least one block");
    }
    if blocks.iter().any(|b| b.is_empty()) {
        return argument("blocks must be non-empty");
    }
    Ok(())
}

fn union(blocks: &[Vec<u32>]) -> Vec<u32> {
    let mut all: Vec<u32> = blocks.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// Checks `P(∩ A_s) >= ∏ P(A_s)` by enumeration with `X_0` known to `k` digits.
pub fn check_product_bound(
    params: &Params,
    blocks: &[Vec<u32>],
    u: &BigRational,
    k: u32,
) -> Result<ProductBound> {
    validate(blocks)?;
    let threshold = Threshold::for_level(params, u);
    let mut sets: Vec<Vec<u32>> = blocks.to_vec();
    sets.push(union(blocks));
    let mut brackets = max_event_brackets(params, &threshold, &sets, k)?;
    let joint = brackets.pop().expect("joint bracket");
    let factors = brackets;
    let product_lower: f64 = factors.iter().map(|b| b.lower).product();
    let product_upper: f64 = factors.iter().map(|b| b.upper).product();
    let product_mid: f64 = factors.iter().map(|b| b.mid()).product();
    let exact_slack = if joint.is_exact() && factors.iter().all(|b| b.is_exact()) {
        let prod = factors
            .iter()
            .fold(BigRational::from_integer(1.into()), |acc, b| {
                acc * b.lower_exact(params)
            });
        Some(joint.lower_exact(params) - prod)
    } else {
        None
    };
    Ok(ProductBound {
        slack: joint.mid() - product_mid,
        certified_slack: joint.lower - product_upper,
        bracket_error: joint.half_width() + 0.5 * (product_upper - product_lower),
        product_lower,
        product_upper,
        joint,
        factors,
        exact_slack,
    })
}

/// `P(A_s | A_1 ∩ .. ∩ A_{s-1}) - P(A_s)` for one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalTerm {
    pub s: usize,
    pub conditional: f64,
    pub marginal: f64,
    pub diff: f64,
    /// Bracketing error carried by `diff`.
    pub error: f64,
}

/// Telescoping decomposition of `P(∩ A_s) - ∏ P(A_s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalBound {
    /// Terms for `s = 2 ..= r` (block indices are zero based, so `s >= 1` here).
    pub terms: Vec<ConditionalTerm>,
    /// `P(∩ A_s) - ∏ P(A_s)`.
    pub gap: f64,
    pub gap_error: f64,
    pub sum_terms: f64,
    pub sum_abs_terms: f64,
    pub terms_error: f64,
}

impl ConditionalBound {
    /// `|gap| <= sum |terms|` up to the bracketing errors.
    pub fn absolute_bound_holds(&self) -> bool {
        self.gap.abs() <= self.sum_abs_terms + self.gap_error + self.terms_error + 1e-15
    }

    /// `gap <= sum terms` up to the bracketing errors; this is the one-sided
    /// form that holds because every term is non-negative.
    pub fn sum_dominates_gap(&self) -> bool {
        self.gap <= self.sum_terms + self.gap_error + self.terms_error + 1e-15
    }

    pub fn terms_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| t.diff >= -t.error - 1e-15)
    }
}

pub fn check_conditional_bound(
    params: &Params,
    blocks: &[Vec<u32>],
    u: &BigRational,
    k: u32,
) -> Result<ConditionalBound> {
    validate(blocks)?;
    let r = blocks.len();
    let threshold = Threshold::for_level(params, u);
    let mut sets: Vec<Vec<u32>> = blocks.to_vec();
    for s in 2..=r {
        sets.push(union(&blocks[..s]));
    }
    let brackets = max_event_brackets(params, &threshold, &sets, k)?;
    let marg = &brackets[..r];
    // prefix[s] brackets the intersection of blocks 0..=s.
    let mut prefix: Vec<&Bracket> = vec![&marg[0]];
    prefix.extend(brackets[r..].iter());
    let mut terms = Vec::with_capacity(r - 1);
    for s in 1..r {
        let (num, den) = (prefix[s], prefix[s - 1]);
        let lo = if den.upper > 0.0 {
            num.lower / den.upper
        } else {
            0.0
        };
        let hi = if den.lower > 0.0 {
            (num.upper / den.lower).min(1.0)
        } else {
            1.0
        };
        let cond = 0.5 * (lo + hi);
        terms.push(ConditionalTerm {
            s,
            conditional: cond,
            marginal: marg[s].mid(),
            diff: cond - marg[s].mid(),
            error: 0.5 * (hi - lo) + marg[s].half_width(),
        });
    }
    let joint = prefix[r - 1];
    let pl: f64 = marg.iter().map(|b| b.lower).product();
    let pu: f64 = marg.iter().map(|b| b.upper).product();
    let pm: f64 = marg.iter().map(|b| b.mid()).product();
    Ok(ConditionalBound {
        gap: joint.mid() - pm,
        gap_error: joint.half_width() + 0.5 * (pu - pl),
        sum_terms: terms.iter().map(|t| t.diff).sum(),
        sum_abs_terms: terms.iter().map(|t| t.diff.abs()).sum(),
        terms_error: terms.iter().map(|t| t.error).sum(),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_runs_are_positively_correlated() {
        let pr = Params::ratio(1, 3, 0.5).unwrap();
        let u = BigRational::new(26.into(), 27.into());
        let pb = check_product_bound(&pr, &[vec![0, 1], vec![4, 5]], &u, 14).unwrap();
        assert!(pb.exact_slack.is_some());
        assert!(pb.slack >= 0.0);
        let cb = check_conditional_bound(&pr, &[vec![0, 1], vec![2, 3], vec![5]], &u, 10).unwrap();
        assert!(cb.terms_nonnegative());
        assert!(cb.sum_dominates_gap());
        assert!(cb.absolute_bound_holds());
    }

    #[test]
    fn single_block_has_zero_slack() {
        let pr = Params::ratio(1, 3, 0.5).unwrap();
        let u = BigRational::new(26.into(), 27.into());
        let pb = check_product_bound(&pr, &[vec![0, 1]], &u, 4).unwrap();
        assert_eq!(pb.slack, 0.0);
        assert!(check_product_bound(&pr, &[], &u, 4).is_err());
        assert!(check_product_bound(&pr, &[vec![0], vec![]], &u, 4).is_err());
    }
}
