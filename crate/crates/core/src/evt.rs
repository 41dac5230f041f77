//! Limit laws of the maxima and the max-semistable family they belong to.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::exactlaw::make_levels;
use crate::marginal::{nu, psi};
use crate::params::Params;

fn check_x(params: &Params, x: f64) -> Result<()> {
    params.require_nondegenerate()?;
    if x.is_nan() || x >= 0.0 {
        return domain(format!("limit laws are evaluated at x < 0, got {x}"));
    }
    Ok(())
}

/// `exp(-psi_{beta,q}(x))`: the limit law of i.i.d. maxima.
pub fn limit_law_iid(params: &Params, x: f64, depth: u32) -> Result<f64> {
    check_x(params, x)?;
    Ok((-psi(params, x, depth)?).exp())
}

/// `exp(-p psi_{beta,q}(x))`: the limit law of the process maxima; the
/// extremal index is `p`.
pub fn limit_law_dependent(params: &Params, x: f64, depth: u32) -> Result<f64> {
    check_x(params, x)?;
    Ok((-params.p() * psi(params, x, depth)?).exp())
}

/// Periodic factor of a max-semistable law.
pub type PeriodicFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `G(x) = exp(-y nu(log y))` with `y = (1 + xi x)^{-1/xi}`, and
/// `G(x) = exp(-e^{-x} nu(x))` when `xi = 0`.
#[derive(Clone)]
pub struct MssLaw {
    xi: f64,
    c: f64,
    nu: PeriodicFn,
}

impl fmt::Debug for MssLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MssLaw")
            .field("xi", &self.xi)
            .field("c", &self.c)
            .finish_non_exhaustive()
    }
}

/// Grid points used to validate a periodic factor over one period.
const VALIDATION_POINTS: usize = 257;

impl MssLaw {
    /// Validates `nu` on a one-period grid: finite, positive, and periodic
    /// with period `log c` to a relative tolerance of `1e-9`.
    pub fn new(xi: f64, c: f64, nu: PeriodicFn) -> Result<Self> {
        if !xi.is_finite() {
            return Err(Error::InvalidLaw(format!("xi must be finite, got {xi}")));
        }
        if !(c > 1.0 && c.is_finite()) {
            return Err(Error::InvalidLaw(format!("c must exceed 1, got {c}")));
        }
        let period = c.ln();
        for i in 0..VALIDATION_POINTS {
            let t = -period * i as f64 / (VALIDATION_POINTS - 1) as f64;
            let (a, b) = (nu(t), nu(t + period));
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidLaw(format!(
                    "nu({t}) = {a} is not positive and finite"
                )));
            }
            if (a - b).abs() > 1e-9 * a.abs().max(1.0) {
                return Err(Error::InvalidLaw(format!(
                    "nu is not periodic with period log c: nu({t}) = {a}, nu({}) = {b}",
                    t + period
                )));
            }
        }
        Ok(MssLaw { xi, c, nu })
    }

    /// The max-stable law with shape `xi` (`nu` identically one).
    pub fn max_stable(xi: f64) -> Self {
        MssLaw {
            xi,
            c: std::f64::consts::E,
            nu: Arc::new(|_| 1.0),
        }
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn nu_at(&self, t: f64) -> f64 {
        (self.nu)(t)
    }
}

pub fn msstable_general(law: &MssLaw, x: f64) -> f64 {
    let xi = law.xi;
    if xi == 0.0 {
        return (-(-x).exp() * law.nu_at(x)).exp();
    }
    let base = 1.0 + xi * x;
    if base <= 0.0 {
        // Below the lower endpoint for xi > 0, above the upper one for xi < 0.
        return if xi > 0.0 { 0.0 } else { 1.0 };
    }
    let y = base.powf(-1.0 / xi);
    (-y * law.nu_at(y.ln())).exp()
}

/// Unique root in `(0, 1)` of `q^m + q - 1`, by bisection.
///
/// When `q` is this root the dependent and i.i.d. limit laws are of the same
/// type: `p = q^m` and `G_dep(x) = G_iid(beta^m x)`.
pub fn same_type_q(m: u32) -> f64 {
    let m = m.max(1) as i32;
    let f = |q: f64| q.powi(m) + q - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Norming constants: `u_n = x / a_n + b_n` and `k_n` observations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norming {
    pub a_n: f64,
    pub b_n: f64,
    pub k_n: u64,
    /// Limit of `k_{n+1} / k_n`, equal to `1/q`.
    pub c: f64,
}

pub fn norming_sequences(params: &Params, n: u32) -> Result<Norming> {
    // x = -beta^n keeps u_n = 1 - beta^{2n} admissible for every n >= 1.
    let beta = params.beta().value();
    let lv = make_levels(params, -beta.powi(n as i32).max(f64::MIN_POSITIVE), n)
        .or_else(|_| make_levels(params, -1.0, n))?;
    Ok(Norming {
        a_n: lv.a_n,
        b_n: lv.b_n,
        k_n: lv.k_n,
        c: 1.0 / params.q(),
    })
}

/// `k_{n+1} / k_n` for each `n` in the range.
pub fn norming_ratios(
    params: &Params,
    ns: std::ops::RangeInclusive<u32>,
) -> Result<Vec<(u32, f64)>> {
    let mut out = Vec::new();
    for n in ns {
        let a = norming_sequences(params, n)?.k_n as f64;
        let b = norming_sequences(params, n + 1)?.k_n as f64;
        out.push((n, b / a));
    }
    Ok(out)
}

/// Affine change of variables placing a limit law in the family above:
/// `G(x) = msstable_general(law, (x - location) / scale)`.
#[derive(Debug, Clone)]
pub struct AffineRepresentation {
    pub law: MssLaw,
    pub scale: f64,
    pub location: f64,
    /// Largest difference between the two sides over the checking grid.
    pub max_defect: f64,
}

/// Representation of `exp(-theta psi(x))` (`theta = 1` i.i.d., `theta = p`
/// dependent).
///
/// With `a = log q / log beta`, the law is `exp(-y nu~(log y))` for
/// `y = theta (-x)^a`, `nu~(s) = nu_{beta,q}((s - log theta) / a)`, which has
/// period `log(1/q)`. Matching `y = (1 + xi z)^{-1/xi}` gives `xi = -1/a`,
/// `scale = 1 / (a theta^{1/a})`, `location = -theta^{-1/a}`. The identity is
/// then checked numerically on `grid` and the worst defect recorded.
pub fn semistable_representation(
    params: &Params,
    theta: f64,
    grid: &[f64],
    depth: u32,
) -> Result<AffineRepresentation> {
    params.require_nondegenerate()?;
    if !(theta > 0.0 && theta <= 1.0) {
        return domain(format!("theta must lie in (0, 1], got {theta}"));
    }
    let sw = params.swapped();
    let a = params.q().ln() / params.beta().ln();
    let log_theta = theta.ln();
    let nu_q = {
        let sw = sw.clone();
        move |s: f64| nu(&sw, (s - log_theta) / a, depth)
    };
    let law = MssLaw::new(-1.0 / a, 1.0 / params.q(), Arc::new(nu_q))?;
    let scale = 1.0 / (a * theta.powf(1.0 / a));
    let location = -theta.powf(-1.0 / a);
    let mut max_defect = 0.0f64;
    for &x in grid {
        if x >= 0.0 {
            continue;
        }
        let direct = (-theta * psi(params, x, depth)?).exp();
        let via = msstable_general(&law, (x - location) / scale);
        max_defect = max_defect.max((direct - via).abs());
    }
    Ok(AffineRepresentation {
        law,
        scale,
        location,
        max_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_limit_values() {
        let pr = Params::ratio(1, 3, 0.5).unwrap();
        assert!((limit_law_iid(&pr, -1.0, 64).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((limit_law_dependent(&pr, -1.0, 64).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!(limit_law_iid(&pr, 0.0, 64).is_err());
        let deg = Params::new(0.5, 0.5).unwrap();
        assert_eq!(limit_law_iid(&deg, -1.0, 64), Err(Error::Degenerate));
    }

    #[test]
    fn gumbel_and_frechet_at_zero() {
        let e1 = (-1.0f64).exp();
        assert!((msstable_general(&MssLaw::max_stable(0.0), 0.0) - e1).abs() < 1e-16);
        assert!((msstable_general(&MssLaw::max_stable(1.0), 0.0) - e1).abs() < 1e-16);
        assert_eq!(msstable_general(&MssLaw::max_stable(1.0), -2.0), 0.0);
        assert_eq!(msstable_general(&MssLaw::max_stable(-1.0), 2.0), 1.0);
    }

    #[test]
    fn invalid_periodic_factor() {
        let c = 2.0f64;
        assert!(MssLaw::new(0.5, c, Arc::new(|t: f64| 2.0 + t.sin())).is_err());
        assert!(MssLaw::new(0.5, c, Arc::new(|_| -1.0)).is_err());
        let per = 2.0 * std::f64::consts::PI / c.ln();
        assert!(MssLaw::new(0.5, c, Arc::new(move |t: f64| 2.0 + (per * t).sin())).is_ok());
        assert!(MssLaw::new(0.5, 1.0, Arc::new(|_| 1.0)).is_err());
    }

    #[test]
    fn same_type_roots() {
        assert!((same_type_q(1) - 0.5).abs() < 1e-15);
        assert!((same_type_q(2) - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        let q3 = same_type_q(3);
        assert!((q3.powi(3) + q3 - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn norming_examples() {
        let pr = Params::ratio(1, 3, 0.5).unwrap();
        let nm = norming_sequences(&pr, 5).unwrap();
        assert_eq!(nm.k_n, 32);
        assert_eq!(nm.a_n, 243.0);
        assert_eq!(nm.b_n, 1.0);
        assert_eq!(nm.c, 2.0);
        let pr = Params::new(0.5, 0.25).unwrap();
        assert_eq!(norming_sequences(&pr, 3).unwrap().k_n, 2);
    }
}
