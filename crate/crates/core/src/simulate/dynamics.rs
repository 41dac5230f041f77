//! The expanding map `f_beta` that runs the process backwards in time.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::exact;
use crate::exactlaw::make_levels;
use crate::marginal::{cdf_exact, psi};
use crate::params::{Beta, Params};

use super::trajectory::Trajectory;

/// `f_beta(x) = x / beta` for `x < 1 - beta`, `x / beta + 1 - 1/beta` otherwise.
pub fn map_point(beta: f64, x: f64) -> f64 {
    if x < 1.0 - beta {
        x / beta
    } else {
        x / beta + 1.0 - 1.0 / beta
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        domain(format!("orbit start must lie in [0, 1], got {x}"))
    }
}

/// An orbit of `f_beta`, cut short when it leaves `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<T> {
    pub points: Vec<T>,
    /// Index of the first point outside `[0, 1]` (it is the last point kept).
    /// Points in the gaps `(beta, 1 - beta)` and their preimages escape.
    pub escaped_at: Option<usize>,
}

/// Floating-point orbit `x_0, f(x_0), ..`. The map multiplies rounding errors
/// by `1/beta` at every step, so only the first few dozen points are
/// meaningful; use [`iterate_map_exact`] for long orbits.
pub fn iterate_map(beta: &Beta, x0: f64, steps: usize) -> Result<Orbit<f64>> {
    check_unit(x0)?;
    let b = beta.value();
    let mut points = Vec::with_capacity(steps + 1);
    points.push(x0);
    let mut x = x0;
    for k in 1..=steps {
        x = map_point(b, x);
        points.push(x);
        if !(0.0..=1.0).contains(&x) {
            return Ok(Orbit {
                points,
                escaped_at: Some(k),
            });
        }
    }
    Ok(Orbit {
        points,
        escaped_at: None,
    })
}

pub fn iterate_map_exact(
    beta: &Beta,
    x0: &BigRational,
    steps: usize,
) -> Result<Orbit<BigRational>> {
    let (zero, one) = (BigRational::zero(), BigRational::one());
    if x0 < &zero || x0 > &one {
        return domain("orbit start must lie in [0, 1]");
    }
    let b = beta.exact();
    let c = &one - &b;
    let mut points = Vec::with_capacity(steps + 1);
    points.push(x0.clone());
    for k in 1..=steps {
        let x = points.last().expect("non-empty");
        let next = if x < &c { x / &b } else { (x - &c) / &b };
        let out = next < zero || next > one;
        points.push(next);
        if out {
            return Ok(Orbit {
                points,
                escaped_at: Some(k),
            });
        }
    }
    Ok(Orbit {
        points,
        escaped_at: None,
    })
}

/// Lyapunov exponent of `f_beta`; the derivative is `1/beta` everywhere.
pub fn lyapunov(beta: &Beta) -> f64 {
    -beta.ln()
}

/// Average of `log |f'|` along an orbit.
pub fn orbit_lyapunov(beta: &Beta, orbit: &[f64]) -> f64 {
    let mut mean = 0.0;
    for (k, _) in orbit.iter().enumerate() {
        let v = lyapunov(beta);
        mean += (v - mean) / (k + 1) as f64;
    }
    mean
}

/// `max |mu(f^{-1}(I)) - mu(I)|` over intervals `I = [a, b]` in `[0, 1]`.
///
/// The preimage of `[a, b]` is `[beta a, beta b] ∪ [beta a + 1 - beta, beta b + 1 - beta]`.
pub fn invariance_defect(params: &Params, intervals: &[(f64, f64)], depth: u32) -> Result<f64> {
    let b = params.beta().exact();
    let c = BigRational::one() - &b;
    let mu = |lo: &BigRational, hi: &BigRational| -> Result<f64> {
        Ok(cdf_exact(params, hi, depth)?.value - cdf_exact(params, lo, depth)?.value)
    };
    let mut worst = 0.0f64;
    for &(a, bb) in intervals {
        if !(0.0 <= a && a <= bb && bb <= 1.0) {
            return domain(format!("interval [{a}, {bb}] is not inside [0, 1]"));
        }
        let (ea, eb) = (exact::rational_from_f64(a)?, exact::rational_from_f64(bb)?);
        let direct = mu(&ea, &eb)?;
        let left = mu(&(&b * &ea), &(&b * &eb))?;
        let right = mu(&(&b * &ea + &c), &(&b * &eb + &c))?;
        worst = worst.max((left + right - direct).abs());
    }
    Ok(worst)
}

/// Result of checking `f_beta(X_{t+1}) = X_t` along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub steps: usize,
    pub mismatches: usize,
}

/// Checks `f_beta(X_{t+1}) = X_t` in exact integer arithmetic.
///
/// With `beta = a/d`, `X_t = N_t / d^{K+t}` for an integer `N_t`, and
/// `N_{t+1} = a N_t + eps_{t+1} (d - a) d^{K+t}`. The map is applied to
/// `N_{t+1}` with its own branch test and exact division by `a`.
pub fn check_conjugacy(params: &Params, traj: &Trajectory) -> ConjugacyReport {
    let a: &BigInt = params.beta().numer();
    let d: &BigInt = params.beta().denom();
    let c: BigInt = d - a;
    let k = traj.x0_digits.len();
    // N_0 = sum_j b_j (d - a) a^j d^{K-1-j}, by Horner from the last digit.
    let mut n: BigInt = BigInt::zero();
    let mut apow = BigInt::one();
    let mut dpow = BigInt::one();
    let digits = traj.x0_digits.digits();
    let mut dpows = Vec::with_capacity(k + 1);
    for _ in 0..k {
        dpows.push(dpow.clone());
        dpow *= d;
    }
    for (j, &b) in digits.iter().enumerate() {
        if b == 1 {
            n += &c * &apow * &dpows[k - 1 - j];
        }
        apow *= a;
    }
    // dpow = d^{K + t}
    let mut mismatches = 0;
    for &e in &traj.innovations {
        let boundary = &c * &dpow;
        let next = a * &n
            + if e == 1 {
                boundary.clone()
            } else {
                BigInt::zero()
            };
        let shifted = if next < boundary {
            next.clone()
        } else {
            &next - &boundary
        };
        let (back, rem) = shifted.div_rem(a);
        if !rem.is_zero() || back != n {
            mismatches += 1;
        }
        n = next;
        dpow *= d;
    }
    ConjugacyReport {
        steps: traj.innovations.len(),
        mismatches,
    }
}

/// One row of the domain-of-attraction table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoaPoint {
    pub n: u32,
    pub k_n: u64,
    /// `F(u_n)^{k_n}`: the i.i.d. maximum law at level `n`.
    pub finite: f64,
    /// `exp(-psi(x))`.
    pub limit: f64,
    pub gap: f64,
}

/// `|F(u_n)^{k_n} - exp(-psi(x))|` for each `n` in the range.
pub fn doa_convergence(
    params: &Params,
    x: f64,
    ns: std::ops::RangeInclusive<u32>,
    depth: u32,
) -> Result<Vec<DoaPoint>> {
    let limit = (-psi(params, x, depth)?).exp();
    let mut out = Vec::new();
    for n in ns {
        let lv = make_levels(params, x, n)?;
        let f = cdf_exact(params, &lv.u_exact(), depth)?.value;
        let finite = (lv.k_n as f64 * f.ln()).exp();
        out.push(DoaPoint {
            n,
            k_n: lv.k_n,
            finite,
            limit,
            gap: (finite - limit).abs(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{simulate_ar, MonteCarloConfig};

    #[test]
    fn map_branches() {
        let b = Beta::ratio(1, 3).unwrap();
        let orbit = iterate_map_exact(&b, &BigRational::new(1.into(), 4.into()), 3).unwrap();
        // 1/4 -> 3/4 -> 1/4 -> 3/4 (ternary 0.0202...)
        assert_eq!(orbit.points[1], BigRational::new(3.into(), 4.into()));
        assert_eq!(orbit.points[2], BigRational::new(1.into(), 4.into()));
        assert_eq!(orbit.escaped_at, None);
        assert!(iterate_map(&b, 1.5, 3).is_err());
        // 1/2 lies in the middle gap.
        let gap = iterate_map(&b, 0.5, 5).unwrap();
        assert_eq!(gap.escaped_at, Some(1));
        assert_eq!(gap.points.len(), 2);
        assert_eq!(lyapunov(&b), -(1.0f64 / 3.0).ln());
        assert_eq!(orbit_lyapunov(&b, &[0.1, 0.2, 0.3]), lyapunov(&b));
    }

    #[test]
    fn conjugacy_on_short_trajectory() {
        let pr = Params::ratio(2, 5, 0.3).unwrap();
        let traj = simulate_ar(&pr, &MonteCarloConfig::new(3, 1), 200).unwrap();
        let rep = check_conjugacy(&pr, &traj);
        assert_eq!(rep.steps, 200);
        assert_eq!(rep.mismatches, 0);
    }

    #[test]
    fn conjugacy_at_one_half() {
        let pr = Params::ratio(1, 2, 0.75).unwrap();
        let traj = simulate_ar(&pr, &MonteCarloConfig::new(9, 1), 300).unwrap();
        assert_eq!(check_conjugacy(&pr, &traj).mismatches, 0);
    }
}
