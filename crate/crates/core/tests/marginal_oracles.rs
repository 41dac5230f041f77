//! The marginal evaluators against independent oracles: the functional
//! equation iterated on a bracketed grid, exact pointwise iterates, grid
//! searches for quantiles and sampling.

use std::time::Instant;

use cantor_evt::exact::rational_from_f64;
use cantor_evt::marginal::{cdf_exact, quantile_exact, scaling_check};
use cantor_evt::stats::ks_one_sample;
use cantor_evt::{cdf, cdf_modulus, nu, psi, quantile, sample_stationary, symmetry_check, Params};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID_BITS: u32 = 16;

/// Lower and upper bounds for `F_k` at the grid points `i / 2^16`, where
/// `F_0(x) = x` and `F_{k+1}(x) = p F_k(x / beta) + q F_k(x / beta + 1 - 1 / beta)`.
///
/// Off-grid values are bracketed by monotonicity: `F_k(y)` lies between the
/// lower bound at the grid point below `y` and the upper bound at the grid
/// point above it.
struct GridIterate {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl GridIterate {
    fn uniform() -> Self {
        let n = 1usize << GRID_BITS;
        let v: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        GridIterate {
            lo: v.clone(),
            hi: v,
        }
    }

    fn n(&self) -> usize {
        self.lo.len() - 1
    }

    fn lower_at(&self, y: f64) -> f64 {
        let t = (y * self.n() as f64 - 1e-7).floor();
        if t < 0.0 {
            0.0
        } else if t as usize >= self.n() {
            1.0
        } else {
            self.lo[t as usize]
        }
    }

    fn upper_at(&self, y: f64) -> f64 {
        let t = (y * self.n() as f64 + 1e-7).ceil();
        if t <= 0.0 {
            0.0
        } else if t as usize >= self.n() {
            1.0
        } else {
            self.hi[t as usize]
        }
    }

    fn step(&self, beta: f64, p: f64) -> Self {
        let q = 1.0 - p;
        let n = self.n();
        let mut lo = vec![0.0; n + 1];
        let mut hi = vec![0.0; n + 1];
        for i in 0..=n {
            let x = i as f64 / n as f64;
            let a = x / beta;
            let b = x / beta + 1.0 - 1.0 / beta;
            lo[i] = p * self.lower_at(a) + q * self.lower_at(b);
            hi[i] = p * self.upper_at(a) + q * self.upper_at(b);
        }
        lo[0] = 0.0;
        hi[0] = 0.0;
        lo[n] = 1.0;
        hi[n] = 1.0;
        GridIterate { lo, hi }
    }
}

fn distance_to(v: f64, lo: f64, hi: f64) -> f64 {
    if v < lo {
        lo - v
    } else if v > hi {
        v - hi
    } else {
        0.0
    }
}

#[test]
fn cdf_matches_sixty_grid_iterates() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let beta: f64 = rng.random_range(0.05..=0.5);
        let p: f64 = rng.random_range(0.05..0.95);
        let pr = Params::new(beta, p).unwrap();
        let mut f = GridIterate::uniform();
        for _ in 0..60 {
            f = f.step(beta, p);
        }
        let tol = pr.max_weight().powi(60) + 1e-12;
        for _ in 0..1000 {
            let x: f64 = rng.random_range(0.0..1.0);
            let v = cdf(&pr, x, 64).unwrap().value;
            let d = distance_to(v, f.lower_at(x), f.upper_at(x));
            assert!(d <= tol, "beta={beta} p={p} x={x}: distance {d} > {tol}");
            worst = worst.max(d);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("worst distance {worst:e}, {elapsed:.2} s");
    assert!(elapsed <= 10.0, "took {elapsed} s");
}

/// `F_k(x)` exactly: for `beta <= 1/2` at most one branch of the functional
/// equation lands in `(0, 1)`, so the iterate follows a single path.
fn pointwise_iterate(beta: &BigRational, p: &BigRational, x: &BigRational, k: u32) -> BigRational {
    let one = BigRational::one();
    let q = &one - p;
    let mut x = x.clone();
    let mut acc = BigRational::zero();
    let mut factor = BigRational::one();
    for _ in 0..k {
        if x <= BigRational::zero() {
            return acc;
        }
        if x >= one {
            return acc + factor;
        }
        let left = &x / beta;
        let right = &left + &one - beta.recip();
        // p F(left) + q F(right); at most one of them is in (0, 1), and
        // right > 0 forces left > 1.
        if right > BigRational::zero() {
            acc += &factor * p;
            factor *= &q;
            x = right;
        } else {
            factor *= p;
            x = left;
        }
    }
    if x <= BigRational::zero() {
        acc
    } else if x >= one {
        acc + factor
    } else {
        acc + factor * x
    }
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn quarter_is_a_third_after_sixty_iterations() {
    let f60 = pointwise_iterate(&ratio(1, 3), &ratio(1, 2), &ratio(1, 4), 60);
    assert!((f60.to_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-12);
    let pr = Params::ratio(1, 3, 0.5).unwrap();
    let v = cdf(&pr, 0.25, 64).unwrap();
    assert!((v.value - 1.0 / 3.0).abs() <= 1e-12);
}

#[test]
fn cdf_matches_exact_pointwise_iterates() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (a, b, p) in [(1, 3, 0.5), (2, 5, 0.25), (1, 2, 0.75), (3, 10, 0.6)] {
        let pr = Params::ratio(a, b, p).unwrap();
        let beta = ratio(a, b);
        let pe = pr.p_exact().clone();
        for _ in 0..200 {
            let x: f64 = rng.random_range(0.0..1.0);
            let xe = rational_from_f64(x).unwrap();
            let f60 = pointwise_iterate(&beta, &pe, &xe, 60).to_f64().unwrap();
            let v = cdf(&pr, x, 64).unwrap();
            let tol = pr.max_weight().powi(60) + v.error_bound + 1e-15;
            assert!((v.value - f60).abs() <= tol, "x={x}: {} vs {f60}", v.value);
        }
    }
}

/// `F_k(i / N)` for `beta = 1/3` and `N = 3^e`: the ternary point stays on
/// the grid under both branches, so the path is followed with integers.
fn ternary_iterate(p: f64, i: i64, n: i64, k: u32) -> f64 {
    let q = 1.0 - p;
    let (mut i, mut acc, mut factor) = (i, 0.0, 1.0);
    for _ in 0..k {
        if i <= 0 {
            return acc;
        }
        if i >= n {
            return acc + factor;
        }
        let right = 3 * i - 2 * n;
        if right > 0 {
            acc += factor * p;
            factor *= q;
            i = right;
        } else {
            factor *= p;
            i *= 3;
        }
    }
    acc + factor * (i.clamp(0, n) as f64 / n as f64)
}

#[test]
fn iteration_contracts_by_max_weight() {
    // F_k - F_{k-1} is linear between the points i / 3^k, so its sup norm is
    // attained on the grid i / 3^10 for k <= 10.
    let n = 3i64.pow(10);
    for p in [0.5f64, 0.3, 0.8] {
        let m = p.max(1.0 - p);
        let mut prev: Vec<f64> = (0..=n).map(|i| ternary_iterate(p, i, n, 0)).collect();
        let mut prev_diff = f64::INFINITY;
        for k in 1..=10 {
            let cur: Vec<f64> = (0..=n).map(|i| ternary_iterate(p, i, n, k)).collect();
            let diff = cur
                .iter()
                .zip(&prev)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if prev_diff.is_finite() {
                assert!(
                    diff <= m * prev_diff + 1e-14,
                    "p={p} k={k}: {diff} vs {prev_diff}"
                );
            }
            prev_diff = diff;
            prev = cur;
        }
    }
}

#[test]
fn quantile_of_one_half_by_grid_search() {
    let pr = Params::ratio(1, 3, 0.5).unwrap();
    // Smallest multiple of 1e-6 with F >= 1/2, by bisection on the index.
    let (mut lo, mut hi) = (0u64, 1_000_000u64);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if cdf(&pr, mid as f64 * 1e-6, 64).unwrap().value >= 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let grid_answer = hi as f64 * 1e-6;
    let qv = quantile(&pr, 0.5, 64).unwrap();
    assert!(
        qv <= grid_answer && grid_answer - qv <= 1e-6,
        "{qv} vs {grid_answer}"
    );
    assert!((qv - 1.0 / 3.0).abs() <= pr.beta().value().powi(64) + 1e-16);
}

#[test]
fn quantile_round_trip() {
    let depth = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for pr in [
        Params::ratio(1, 3, 0.5).unwrap(),
        Params::ratio(2, 5, 0.25).unwrap(),
        Params::ratio(1, 2, 0.75).unwrap(),
    ] {
        let slack = cdf_modulus(&pr, depth);
        let step = pr.beta().exact().pow(depth as i32);
        for _ in 0..1000 {
            let alpha: f64 = rng.random_range(0.0..1.0);
            let ae = rational_from_f64(alpha).unwrap();
            let qx = quantile_exact(&pr, &ae, depth).unwrap();
            let f = cdf_exact(&pr, &qx, 64).unwrap();
            assert!(f.upper() >= alpha, "F(Q({alpha})) = {}", f.value);
            assert!(f.lower() <= alpha + slack, "F(Q({alpha})) = {}", f.value);
            let below = cdf_exact(&pr, &(&qx - &step), 64).unwrap();
            assert!(below.lower() < alpha, "F(Q - beta^K) = {}", below.value);
        }
    }
}

#[test]
fn samples_follow_the_cdf() {
    let pr = Params::ratio(2, 5, 0.3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut xs: Vec<f64> = (0..100_000)
        .map(|_| sample_stationary(&pr, &mut rng, 64).unwrap())
        .collect();
    xs.sort_by(f64::total_cmp);
    let d = ks_one_sample(&xs, |x| cdf(&pr, x, 64).unwrap().value);
    assert!(d <= 0.01, "KS distance {d}");
}

#[test]
fn symmetry_and_scaling_on_a_fine_grid() {
    let pr = Params::new(0.4, 0.3).unwrap();
    let grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
    let depth = 64;
    let s = symmetry_check(&pr, &grid, depth).unwrap();
    assert!(s.max_defect <= 2.0 * pr.max_weight().powi(depth as i32));
    let s = symmetry_check(&pr, &grid, 128).unwrap();
    assert!(s.max_defect <= 1e-10);
    let sc = scaling_check(&pr, &grid, 128).unwrap();
    assert!(sc.max_defect <= 1e-10);
    for x in [0.0, 1.0] {
        assert_eq!(symmetry_check(&pr, &[x], depth).unwrap().max_defect, 0.0);
    }
}

#[test]
fn cdf_is_monotone_on_sorted_grids() {
    for pr in [
        Params::ratio(1, 3, 0.5).unwrap(),
        Params::ratio(2, 5, 0.25).unwrap(),
        Params::new(0.3, 0.9).unwrap(),
    ] {
        let vals: Vec<_> = (0..=5000)
            .map(|i| cdf(&pr, i as f64 / 5000.0, 64).unwrap())
            .collect();
        for w in vals.windows(2) {
            assert!(w[1].upper() >= w[0].lower());
            assert!(w[1].value >= w[0].value - w[0].error_bound - w[1].error_bound);
        }
    }
}

#[test]
fn nu_is_positive_bounded_and_periodic() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for pr in [
        Params::ratio(1, 3, 0.5).unwrap(),
        Params::ratio(2, 5, 0.25).unwrap(),
        Params::ratio(1, 2, 0.75).unwrap(),
    ] {
        let lb = pr.beta().ln();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..10_000 {
            let t = lb * i as f64 / 10_000.0;
            let v = nu(&pr, t, 64);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!(lo > 0.0 && hi.is_finite(), "range [{lo}, {hi}]");
        for _ in 0..1000 {
            let t: f64 = rng.random_range(-20.0..20.0);
            assert!((nu(&pr, t, 64) - nu(&pr, t + lb, 64)).abs() <= 1e-10);
        }
    }
    let half = Params::new(0.5, 0.5).unwrap();
    for t in [-3.0, -0.2, 0.0, 1.7] {
        assert!((nu(&half, t, 64) - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn psi_matches_swapped_cdf() {
    let pr = Params::ratio(1, 3, 0.5).unwrap();
    let sw = pr.swapped();
    let y = 0.7 / 3.0;
    let lhs = pr.q() * psi(&pr, -0.7, 64).unwrap();
    let rhs = cdf(&sw, y, 64).unwrap().value;
    assert!((lhs - rhs).abs() <= 1e-10);
    assert!((psi(&pr, -1.0, 64).unwrap() - 1.0).abs() <= 1e-15);
}

/// `(1 - F(1 - x h)) / (1 - F(1 - h))` at `h = beta^{m + frac(m phi)}`.
fn tail_ratio(pr: &Params, x: f64, m: u32) -> f64 {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let e = m as f64 + (m as f64 * phi).fract();
    let h = pr.beta().value().powf(e);
    let one = BigRational::one();
    let he = rational_from_f64(h).unwrap();
    let xe = rational_from_f64(x).unwrap();
    let num = 1.0 - cdf_exact(pr, &(&one - &xe * &he), 128).unwrap().value;
    let den = 1.0 - cdf_exact(pr, &(&one - &he), 128).unwrap().value;
    num / den
}

#[test]
fn upper_tail_is_not_regularly_varying() {
    let pr = Params::ratio(1, 3, 0.5).unwrap();
    let x = 0.5f64;
    // Through the symmetry the ratio equals
    // x^a nu_q(log x + log h) / nu_q(log h), a = log q / log beta,
    // so its range over one period of log h follows from the nu profile.
    let sw = pr.swapped();
    let a = sw.alpha_exponent();
    let lb = pr.beta().ln();
    let profile: Vec<f64> = (0..2000)
        .map(|i| {
            let t = lb * i as f64 / 2000.0;
            x.powf(a) * nu(&sw, t + x.ln(), 64) / nu(&sw, t, 64)
        })
        .collect();
    let span = profile.iter().cloned().fold(f64::MIN, f64::max)
        - profile.iter().cloned().fold(f64::MAX, f64::min);
    assert!(span > 0.0);
    let threshold = 0.25 * span;
    let ratios: Vec<f64> = (10..=20).map(|m| tail_ratio(&pr, x, m)).collect();
    let osc = ratios.iter().cloned().fold(f64::MIN, f64::max)
        - ratios.iter().cloned().fold(f64::MAX, f64::min);
    eprintln!("profile span {span}, observed oscillation {osc}");
    assert!(osc > threshold, "oscillation {osc} <= {threshold}");
}
