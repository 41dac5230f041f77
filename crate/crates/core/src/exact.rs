//! Small helpers around arbitrary precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| crate::Error::Domain(format!("{x} is not finite")))
}

/// Parses `a/b`, an integer, or a decimal literal into an exact rational.
///
/// Decimal literals are read as the nearest double and then converted exactly,
/// so `0.1` means the double closest to one tenth.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| crate::Error::Domain(format!("bad numerator in {s:?}")))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| crate::Error::Domain(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return domain(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    let x: f64 = s
        .parse()
        .map_err(|_| crate::Error::Domain(format!("cannot parse {s:?} as a number")))?;
    rational_from_f64(x)
}

/// `r^e` for any integer exponent (negative exponents invert).
pub fn pow_i(r: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow::pow(r.clone(), e as usize)
    } else {
        num_traits::pow::pow(r.recip(), e.unsigned_abs() as usize)
    }
}

/// Nearest double, computed from an exact integer ratio without overflow.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let neg = num.is_negative() != den.is_negative();
    let (n, d) = (num.abs(), den.abs());
    // Scale so that the integer quotient carries at least 64 significant bits.
    let shift = 66i64 - (n.bits() as i64 - d.bits() as i64);
    let (q, r) = if shift >= 0 {
        (&n << shift as usize).div_rem(&d)
    } else {
        n.div_rem(&(&d << (-shift) as usize))
    };
    // Sticky bit keeps round-to-nearest correct when the remainder is non-zero.
    let q = if r.is_zero() {
        q
    } else {
        (q << 1usize) | BigInt::one()
    };
    let extra = if r.is_zero() { 0 } else { 1 };
    let v = q.to_f64().unwrap_or(f64::INFINITY);
    let v = scale_pow2(v, -(shift + extra));
    if neg {
        -v
    } else {
        v
    }
}

fn scale_pow2(v: f64, e: i64) -> f64 {
    let mut v = v;
    let mut e = e;
    while e > 600 {
        v *= 2f64.powi(600);
        e -= 600;
    }
    while e < -600 {
        v *= 2f64.powi(-600);
        e += 600;
    }
    v * 2f64.powi(e as i32)
}

/// Nearest double to a rational.
pub fn to_f64(r: &BigRational) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

/// Smallest double that is `>=` the rational.
pub fn to_f64_up(r: &BigRational) -> f64 {
    let v = to_f64(r);
    match BigRational::from_float(v) {
        Some(e) if &e < r => v.next_up(),
        _ => v,
    }
}

/// Largest double that is `<=` the rational.
pub fn to_f64_down(r: &BigRational) -> f64 {
    let v = to_f64(r);
    match BigRational::from_float(v) {
        Some(e) if &e > r => v.next_down(),
        _ => v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        let third = parse_rational("1/3").unwrap();
        assert_eq!(third, BigRational::new(1.into(), 3.into()));
        assert_eq!(
            parse_rational("0.25").unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn conversion_rounds_to_nearest() {
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(to_f64(&third), 1.0 / 3.0);
        assert!(to_f64_down(&third) <= to_f64_up(&third));
        assert!(BigRational::from_float(to_f64_up(&third)).unwrap() >= third);
        assert!(BigRational::from_float(to_f64_down(&third)).unwrap() <= third);
        let tiny = BigRational::new(1.into(), BigInt::from(3) << 2000usize);
        assert!(to_f64(&tiny) == 0.0);
        let x = rational_from_f64(0.1).unwrap();
        assert_eq!(to_f64(&x), 0.1);
    }

    #[test]
    fn negative_powers_invert() {
        let r = BigRational::new(2.into(), 5.into());
        assert_eq!(pow_i(&r, -2), BigRational::new(25.into(), 4.into()));
        assert_eq!(pow_i(&r, 0), BigRational::one());
    }
}
