use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{argument, domain, Error, Result};
use crate::exact;
use crate::marginal::{psi_exact, DEFAULT_DEPTH};
use crate::params::Params;

/// Levels `u_n = 1 + beta^n x` and the associated norming constants.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    pub x: f64,
    pub n: u32,
    pub u_n: f64,
    /// `max{i : u_{n-i} > 0}`.
    pub j_n: u32,
    /// `floor(q^{-n})`: the number of observations in the maximum.
    pub k_n: u64,
    /// Scale `beta^{-n}`.
    pub a_n: f64,
    /// Location, always one.
    pub b_n: f64,
    /// `psi_{beta,q}(x)`, so that `1 - F(u_n) = q^n psi`.
    pub psi: f64,
    x_exact: BigRational,
    beta_exact: BigRational,
}

impl LevelSet {
    pub fn x_exact(&self) -> &BigRational {
        &self.x_exact
    }

    /// `u_{n-i} = 1 + beta^{n-i} x`, exactly.
    pub fn level(&self, i: u32) -> BigRational {
        let e = self.n as i64 - i as i64;
        BigRational::one() + exact::pow_i(&self.beta_exact, e) * &self.x_exact
    }

    pub fn u_exact(&self) -> BigRational {
        self.level(0)
    }

    /// `u_n` recovered from `x` through the norming constants.
    pub fn u_from_norming(&self) -> f64 {
        self.x / self.a_n + self.b_n
    }
}

/// Builds the level set for `x < 0` read exactly from a double.
pub fn make_levels(params: &Params, x: f64, n: u32) -> Result<LevelSet> {
    if !x.is_finite() {
        return domain(format!("x must be finite, got {x}"));
    }
    make_levels_exact(params, &exact::rational_from_f64(x)?, n)
}

pub fn make_levels_exact(params: &Params, x: &BigRational, n: u32) -> Result<LevelSet> {
    if !x.is_negative() {
        return domain("levels are defined for x < 0");
    }
    if n == 0 {
        return argument("n must be at least 1");
    }
    let beta = params.beta().exact();
    let w0 = exact::pow_i(&beta, n as i64) * (-x);
    if w0 >= BigRational::one() {
        return domain(format!("u_n = 1 + beta^n x is not positive for n = {n}"));
    }
    // beta^{n-i} |x| grows geometrically in i; count how long it stays below one.
    let mut j = 0u32;
    let mut w = w0.clone() / &beta;
    while w < BigRational::one() {
        j += 1;
        w /= &beta;
    }
    if j < 1 {
        return Err(Error::NTooSmall(format!(
            "j_n = 0 at n = {n}; need j_n >= 1"
        )));
    }
    let qn = num_traits::pow::pow(params.q_exact().clone(), n as usize);
    let inv = qn.recip();
    let (k_big, _): (BigInt, BigInt) = inv.numer().div_rem(inv.denom());
    let k_n = k_big
        .to_u64()
        .ok_or_else(|| Error::Resource(format!("k_n = floor(q^-n) overflows u64 at n = {n}")))?;
    let u = BigRational::one() - &w0;
    Ok(LevelSet {
        x: exact::to_f64(x),
        n,
        u_n: exact::to_f64(&u),
        j_n: j,
        k_n,
        a_n: exact::to_f64(&exact::pow_i(&beta, -(n as i64))),
        b_n: 1.0,
        psi: psi_exact(params, x, DEFAULT_DEPTH)?,
        x_exact: x.clone(),
        beta_exact: beta,
    })
}
