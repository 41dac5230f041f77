//! Model parameters `(beta, p)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{domain, Result};
use crate::exact;

/// Contraction factor `beta` in `(0, 1/2]`, held exactly as a ratio `num/den`.
///
/// Doubles are converted exactly, so `Beta::new(0.4)` is the binary fraction
/// nearest to `2/5`; use [`Beta::ratio`] when the exact fraction matters.
#[derive(Clone, PartialEq)]
pub struct Beta {
    num: BigInt,
    den: BigInt,
    value: f64,
}

impl Beta {
    pub fn new(beta: f64) -> Result<Self> {
        let r = exact::rational_from_f64(beta)?;
        Self::from_rational(&r)
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return domain("beta denominator is zero");
        }
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(r: &BigRational) -> Result<Self> {
        let half = BigRational::new(1.into(), 2.into());
        if !r.is_positive() || r > &half {
            return domain(format!(
                "beta must lie in (0, 1/2], got {}",
                exact::to_f64(r)
            ));
        }
        Ok(Beta {
            num: r.numer().clone(),
            den: r.denom().clone(),
            value: exact::to_f64(r),
        })
    }

    /// Nearest double to beta.
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn exact(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    /// `log(beta)`, the period of the oscillating factor `nu`.
    pub fn ln(&self) -> f64 {
        self.value.ln()
    }

    pub fn is_half(&self) -> bool {
        &self.num * 2 == self.den
    }
}

impl fmt::Debug for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Beta({}/{} ~ {})", self.num, self.den, self.value)
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.bits() <= 16 {
            write!(f, "{}/{}", self.num, self.den)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Parameters of `X_{k+1} = beta X_k + eps_{k+1}` with `P(eps = 0) = p` and
/// `P(eps = 1 - beta) = q = 1 - p`.
///
/// `p` is held exactly; `q` is its exact complement, so weights built from
/// `p_exact` and `q_exact` sum to one without rounding.
#[derive(Clone, PartialEq)]
pub struct Params {
    beta: Beta,
    p: f64,
    q: f64,
    p_exact: BigRational,
    q_exact: BigRational,
}

impl Params {
    pub fn new(beta: f64, p: f64) -> Result<Self> {
        Self::with_beta(Beta::new(beta)?, p)
    }

    /// Parameters with `beta = num/den` exactly.
    pub fn ratio(num: i64, den: i64, p: f64) -> Result<Self> {
        Self::with_beta(Beta::ratio(num, den)?, p)
    }

    pub fn with_beta(beta: Beta, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("p must lie in (0, 1), got {p}"));
        }
        let p_exact = exact::rational_from_f64(p)?;
        let q_exact = BigRational::one() - &p_exact;
        Ok(Params {
            beta,
            p,
            q: exact::to_f64(&q_exact),
            p_exact,
            q_exact,
        })
    }

    pub fn beta(&self) -> &Beta {
        &self.beta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p_exact(&self) -> &BigRational {
        &self.p_exact
    }

    pub fn q_exact(&self) -> &BigRational {
        &self.q_exact
    }

    /// `max(p, q)`: the contraction rate of the digit descent.
    pub fn max_weight(&self) -> f64 {
        self.p.max(self.q)
    }

    /// The same beta with the roles of `p` and `q` exchanged.
    pub fn swapped(&self) -> Params {
        Params {
            beta: self.beta.clone(),
            p: self.q,
            q: self.p,
            p_exact: self.q_exact.clone(),
            q_exact: self.p_exact.clone(),
        }
    }

    /// `beta = 1/2, p = 1/2`: the stationary law is uniform on `[0, 1]`.
    pub fn is_degenerate(&self) -> bool {
        self.beta.is_half() && self.p_exact == BigRational::new(1.into(), 2.into())
    }

    /// Exponent `log p / log beta` of the power-law envelope of `F` at zero.
    pub fn alpha_exponent(&self) -> f64 {
        self.p.ln() / self.beta.ln()
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(crate::Error::Degenerate)
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Params(beta={:?}, p={})", self.beta, self.p)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "beta={}, p={}", self.beta, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(Params::new(0.0, 0.5).is_err());
        assert!(Params::new(0.6, 0.5).is_err());
        assert!(Params::new(0.3, 0.0).is_err());
        assert!(Params::new(0.3, 1.0).is_err());
        assert!(Params::new(0.3, f64::NAN).is_err());
        assert!(Params::new(0.5, 0.5).is_ok());
    }

    #[test]
    fn complement_is_exact() {
        let pr = Params::new(0.4, 0.1).unwrap();
        assert_eq!(pr.p_exact() + pr.q_exact(), BigRational::one());
        let sw = pr.swapped();
        assert_eq!(sw.p_exact(), pr.q_exact());
        assert_eq!(sw.swapped(), pr);
    }

    #[test]
    fn degenerate_detection() {
        assert!(Params::ratio(1, 2, 0.5).unwrap().is_degenerate());
        assert!(!Params::ratio(1, 3, 0.5).unwrap().is_degenerate());
        assert_eq!(Params::ratio(2, 4, 0.5).unwrap().beta().to_string(), "1/2");
    }
}
