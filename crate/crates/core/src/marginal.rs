//! The stationary law `F = F_{beta,p}` and the quantities derived from it.
//!
//! `F` is the unique solution of
//! `F(x) = p F(x / beta) + q F(x / beta + 1 - 1 / beta)`, evaluated here by
//! walking down the digit tree with exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

use crate::digits::{BernoulliWords, DigitReader, DigitStream};
use crate::error::{argument, domain, Result};
use crate::exact;
use crate::params::Params;

/// Default number of digit levels used by the evaluators.
pub const DEFAULT_DEPTH: u32 = 64;

/// A certified evaluation of `F(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfValue {
    /// The exact value of the descent, correctly rounded to a double. Exact
    /// results are therefore monotone in `x` even across different paths.
    pub value: f64,
    /// Bound on `|F(x) - value|` from truncating the descent, rounded up.
    pub error_bound: f64,
    /// The descent reached a gap or an endpoint: `value` is `F(x)` rounded.
    pub exact: bool,
}

impl CdfValue {
    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }
}

/// `F_{beta,p}(x)` for a double `x`, read exactly.
pub fn cdf(params: &Params, x: f64, depth: u32) -> Result<CdfValue> {
    if !x.is_finite() {
        return domain(format!("cdf argument must be finite, got {x}"));
    }
    let r = exact::rational_from_f64(x)?;
    cdf_exact(params, &r, depth)
}

/// Accumulated weight `acc / D^level` and cylinder mass `factor / D^level`,
/// where `p = P / D` and `q = Q / D`.
struct Weights {
    pn: BigInt,
    qn: BigInt,
    dn: BigInt,
    acc: BigInt,
    factor: BigInt,
    scale: BigInt,
}

impl Weights {
    fn new(params: &Params) -> Self {
        let pe = params.p_exact();
        let dn = pe.denom().clone();
        Weights {
            pn: pe.numer().clone(),
            qn: &dn - pe.numer(),
            dn,
            acc: BigInt::zero(),
            factor: BigInt::one(),
            scale: BigInt::one(),
        }
    }

    fn left(&mut self) {
        self.acc *= &self.dn;
        self.factor *= &self.pn;
        self.scale *= &self.dn;
    }

    fn right(&mut self) {
        self.acc = &self.acc * &self.dn + &self.factor * &self.pn;
        self.factor *= &self.qn;
        self.scale *= &self.dn;
    }

    /// `acc + factor * frac`, with `frac` one of `0`, `p` or `1`.
    fn finish(&self, plus: Option<&BigInt>) -> CdfValue {
        let (num, den) = match plus {
            None => (self.acc.clone(), self.scale.clone()),
            Some(w) => (
                &self.acc * &self.dn + &self.factor * w,
                &self.scale * &self.dn,
            ),
        };
        CdfValue {
            value: exact::ratio_to_f64(&num, &den),
            error_bound: 0.0,
            exact: true,
        }
    }

    fn midpoint(&self) -> CdfValue {
        let two = BigInt::from(2);
        let den = &self.scale * &two;
        let half = BigRational::new(self.factor.clone(), den.clone());
        CdfValue {
            value: exact::ratio_to_f64(&(&self.acc * &two + &self.factor), &den),
            error_bound: exact::to_f64_up(&half),
            exact: false,
        }
    }
}

/// `F_{beta,p}(x)` for an exact rational `x`.
///
/// At the boundary points `x = beta` and `x = 1 - beta` the left and right
/// branches are taken respectively; both give `F = p` there.
pub fn cdf_exact(params: &Params, x: &BigRational, depth: u32) -> Result<CdfValue> {
    if depth < 1 {
        return argument("depth must be at least 1");
    }
    let a = params.beta().numer();
    let d = params.beta().denom();
    let c: BigInt = d - a;
    let mut w = Weights::new(params);
    let all = w.dn.clone();
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    for _ in 0..depth {
        if !num.is_positive() {
            return Ok(w.finish(None));
        }
        if num >= den {
            return Ok(w.finish(Some(&all)));
        }
        let nd = &num * d;
        let aden = a * &den;
        if nd <= aden {
            w.left();
            num = nd;
            den = aden;
            continue;
        }
        let cden = &c * &den;
        if nd >= cden {
            w.right();
            num = nd - cden;
            den = aden;
        } else {
            let pn = w.pn.clone();
            return Ok(w.finish(Some(&pn)));
        }
    }
    if !num.is_positive() {
        return Ok(w.finish(None));
    }
    if num >= den {
        return Ok(w.finish(Some(&all)));
    }
    let nd = &num * d;
    if nd > a * &den && nd < &c * &den {
        let pn = w.pn.clone();
        return Ok(w.finish(Some(&pn)));
    }
    Ok(w.midpoint())
}

/// Oscillating factor `nu(t) = exp(-t log p / log beta) F(e^t)`.
///
/// `nu` has period `|log beta|`; `t` is first reduced into `(log beta, 0]`.
/// It is identically one in the uniform case `beta = p = 1/2`.
pub fn nu(params: &Params, t: f64, depth: u32) -> f64 {
    let period = params.beta().ln();
    let tr = reduce_period(t, period);
    let y = tr.exp();
    let f = match cdf(params, y, depth.max(1)) {
        Ok(v) => v.value,
        Err(_) => return f64::NAN,
    };
    // Dividing by y^alpha at the same rounded y keeps nu exactly one when F
    // is the identity.
    f / y.powf(params.alpha_exponent())
}

/// Reduces `t` into `(period, 0]` for a negative `period`.
pub fn reduce_period(t: f64, period: f64) -> f64 {
    let k = (t / period).floor();
    let tr = (-k).mul_add(period, t);
    if tr > 0.0 {
        tr + period
    } else if tr <= period {
        tr - period
    } else {
        tr
    }
}

/// Tail function `psi_{beta,q}(x) = (-x)^{log q / log beta} nu_{beta,q}(log(-x))`
/// for `x < 0`, evaluated as `q^{-j} F_{beta,q}(-x beta^j)` with `j` chosen so
/// the argument lies in `(beta, 1]`.
pub fn psi(params: &Params, x: f64, depth: u32) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("psi argument must be finite, got {x}"));
    }
    psi_exact(params, &exact::rational_from_f64(x)?, depth)
}

pub fn psi_exact(params: &Params, x: &BigRational, depth: u32) -> Result<f64> {
    if !x.is_negative() {
        return domain("psi is defined for x < 0 only");
    }
    let beta = params.beta().exact();
    let w = -x;
    // Initial guess from floating point, corrected exactly.
    let wf = exact::to_f64(&w);
    let mut j: i64 = if wf.is_finite() && wf > 0.0 {
        (wf.ln() / -params.beta().ln()).floor() as i64
    } else {
        0
    };
    let mut y = &w * exact::pow_i(&beta, j);
    while y > BigRational::one() {
        y *= &beta;
        j += 1;
    }
    while y <= beta {
        y /= &beta;
        j -= 1;
    }
    let f = cdf_exact(&params.swapped(), &y, depth)?.value;
    Ok(f / params.q().powi(j as i32))
}

/// Generalized inverse `inf{x : F(x) >= alpha}`, rounded up to a double.
///
/// When the digit descent does not terminate within `depth` levels the upper
/// end of the final cylinder is returned, so `F` of the exact result lies in
/// `[alpha, alpha + max(p, q)^depth]` (see [`quantile_exact`]). Rounding up
/// keeps `F(result) >= alpha`; the upper bound loosens by the mass of one ulp.
pub fn quantile(params: &Params, alpha: f64, depth: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return domain(format!("alpha must lie in [0, 1], got {alpha}"));
    }
    let a = exact::rational_from_f64(alpha)?;
    Ok(exact::to_f64_up(&quantile_exact(params, &a, depth)?))
}

pub fn quantile_exact(params: &Params, alpha: &BigRational, depth: u32) -> Result<BigRational> {
    if depth < 1 {
        return argument("depth must be at least 1");
    }
    if alpha.is_negative() || alpha > &BigRational::one() {
        return domain("alpha must lie in [0, 1]");
    }
    if alpha.is_zero() {
        return Ok(BigRational::zero());
    }
    let beta = params.beta().exact();
    let c = BigRational::one() - &beta;
    let (p, q) = (params.p_exact(), params.q_exact());
    let mut a = alpha.clone();
    let mut x = BigRational::zero();
    let mut scale = BigRational::one();
    for _ in 0..depth {
        if a.is_one() {
            // The rest of the digits are all ones: the cylinder's upper end.
            return Ok(x + scale);
        }
        if &a <= p {
            a /= p;
        } else {
            x += &c * &scale;
            a = (a - p) / q;
        }
        scale *= &beta;
    }
    Ok(x + scale)
}

/// One draw from the stationary law truncated to `depth` digits.
pub fn sample_stationary<R: RngCore>(params: &Params, rng: &mut R, depth: u32) -> Result<f64> {
    Ok(sample_digits(params, rng, depth)?.value(params.beta().value()))
}

/// Digits `b_0 .. b_{depth-1}` of a stationary draw.
pub fn sample_digits<R: RngCore>(params: &Params, rng: &mut R, depth: u32) -> Result<DigitStream> {
    if depth < 1 {
        return argument("depth must be at least 1");
    }
    let mut reader = DigitReader::new(BernoulliWords::for_params(params), rng);
    Ok(DigitStream::new(
        (0..depth).map(|_| reader.next_digit()).collect(),
    ))
}

/// Modulus of continuity bound: `|F(x) - F(y)| <= bound` whenever `|x - y| <= delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    pub bound: f64,
    /// Holder exponent `log max(p, q) / log beta`.
    pub exponent: f64,
}

/// `max(p, q)^k`: the mass of a single level-`k` cylinder, which is an interval
/// of length `beta^k`.
pub fn cdf_modulus(params: &Params, k: u32) -> f64 {
    params.max_weight().powi(k as i32)
}

/// Modulus for an arbitrary increment. An interval of length `beta^k` meets at
/// most two level-`k` cylinders, so the bound carries a factor two.
pub fn continuity_bound(params: &Params, delta: f64) -> Result<Modulus> {
    if delta.is_nan() || delta <= 0.0 {
        return domain("delta must be positive");
    }
    let m = params.max_weight();
    let lb = params.beta().ln();
    let exponent = m.ln() / lb;
    let bound = if delta >= 1.0 {
        1.0
    } else {
        let k = (delta.ln() / lb).floor().max(0.0);
        (2.0 * m.powf(k)).min(1.0)
    };
    Ok(Modulus { bound, exponent })
}

/// Worst observed defect of a pointwise identity, with the certified slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityDefect {
    pub max_defect: f64,
    /// Largest sum of truncation error bounds over the points checked.
    pub max_error_bound: f64,
    pub points: usize,
}

/// Checks `F_{beta,p}(x) + F_{beta,q}(1 - x) = 1`.
pub fn symmetry_check(params: &Params, xs: &[f64], depth: u32) -> Result<IdentityDefect> {
    let swapped = params.swapped();
    let mut out = IdentityDefect {
        max_defect: 0.0,
        max_error_bound: 0.0,
        points: xs.len(),
    };
    for &x in xs {
        let r = exact::rational_from_f64(x)?;
        let a = cdf_exact(params, &r, depth)?;
        let b = cdf_exact(&swapped, &(BigRational::one() - &r), depth)?;
        out.max_defect = out.max_defect.max((a.value + b.value - 1.0).abs());
        out.max_error_bound = out.max_error_bound.max(a.error_bound + b.error_bound);
    }
    Ok(out)
}

/// Checks the self-similarity `F(beta x) = p F(x)`.
pub fn scaling_check(params: &Params, xs: &[f64], depth: u32) -> Result<IdentityDefect> {
    let beta = params.beta().exact();
    let mut out = IdentityDefect {
        max_defect: 0.0,
        max_error_bound: 0.0,
        points: xs.len(),
    };
    for &x in xs {
        let r = exact::rational_from_f64(x)?;
        let a = cdf_exact(params, &(&beta * &r), depth)?;
        let b = cdf_exact(params, &r, depth)?;
        out.max_defect = out.max_defect.max((a.value - params.p() * b.value).abs());
        out.max_error_bound = out
            .max_error_bound
            .max(a.error_bound + params.p() * b.error_bound);
    }
    Ok(out)
}

/// Residual of the defining functional equation at `x`.
pub fn fixed_point_residual(params: &Params, x: &BigRational, depth: u32) -> Result<(f64, f64)> {
    let beta = params.beta().exact();
    let left = x / &beta;
    let right = &left + BigRational::one() - beta.recip();
    let f = cdf_exact(params, x, depth)?;
    let fl = cdf_exact(params, &left, depth)?;
    let fr = cdf_exact(params, &right, depth)?;
    let resid = f.value - params.p() * fl.value - params.q() * fr.value;
    let slack = f.error_bound + params.p() * fl.error_bound + params.q() * fr.error_bound;
    Ok((resid.abs(), slack))
}
