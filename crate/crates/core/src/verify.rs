//! Invariant suites: each check reports a measured defect against a threshold.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{argument, Result};
use crate::exact;
use crate::exactlaw::{
    check_conditional_bound, check_product_bound, closed_form, enumerate_atoms, make_levels,
    max_law_bracket, run_automaton, MaxLawTable,
};
use crate::marginal::{
    cdf, cdf_exact, cdf_modulus, fixed_point_residual, nu, quantile_exact, scaling_check,
    symmetry_check, DEFAULT_DEPTH,
};
use crate::params::Params;
use crate::simulate::{
    check_conjugacy, invariance_defect, lyapunov, orbit_lyapunov, simulate_ar, MonteCarloConfig,
};

/// Which group of invariants to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Marginal,
    ExactLaw,
    Dynamics,
    Association,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite> {
        match s.trim() {
            "marginal" => Ok(Suite::Marginal),
            "exactlaw" => Ok(Suite::ExactLaw),
            "dynamics" => Ok(Suite::Dynamics),
            "association" => Ok(Suite::Association),
            "all" => Ok(Suite::All),
            other => argument(format!(
                "unknown suite {other:?}; expected marginal, exactlaw, dynamics, association or all"
            )),
        }
    }
}

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(
        suite: &'static str,
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
    ) -> Self {
        Check {
            suite,
            name: name.into(),
            measured,
            threshold,
            passed: measured <= threshold,
        }
    }

    fn at_least(
        suite: &'static str,
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
    ) -> Self {
        Check {
            suite,
            name: name.into(),
            measured,
            threshold,
            passed: measured >= threshold,
        }
    }
}

/// Parameter pairs every suite runs over.
pub fn suite_params() -> Vec<Params> {
    vec![
        Params::ratio(1, 3, 0.5).expect("valid"),
        Params::ratio(2, 5, 0.25).expect("valid"),
        Params::ratio(1, 2, 0.75).expect("valid"),
    ]
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Marginal | Suite::All) {
        out.extend(marginal_suite(seed)?);
    }
    if matches!(suite, Suite::ExactLaw | Suite::All) {
        out.extend(exactlaw_suite()?);
    }
    if matches!(suite, Suite::Dynamics | Suite::All) {
        out.extend(dynamics_suite(seed)?);
    }
    if matches!(suite, Suite::Association | Suite::All) {
        out.extend(association_suite(seed)?);
    }
    Ok(out)
}

fn label(pr: &Params) -> String {
    format!("beta={} p={}", pr.beta(), pr.p())
}

fn marginal_suite(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "marginal";
    let depth = DEFAULT_DEPTH;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for pr in suite_params() {
        let l = label(&pr);
        let xs: Vec<f64> = (0..500).map(|_| rng.random::<f64>()).collect();

        let mut worst = 0.0f64;
        for &x in xs.iter().take(200) {
            let (r, slack) = fixed_point_residual(&pr, &exact::rational_from_f64(x)?, depth)?;
            worst = worst.max(r - slack);
        }
        out.push(Check::at_most(
            S,
            format!("fixed-point residual beyond truncation [{l}]"),
            worst.max(0.0),
            1e-13,
        ));

        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        let mut drop = 0.0f64;
        let mut prev: Option<crate::CdfValue> = None;
        for &x in &sorted {
            let v = cdf(&pr, x, depth)?;
            if let Some(p) = prev {
                drop = drop.max(p.lower() - v.upper());
            }
            prev = Some(v);
        }
        out.push(Check::at_most(
            S,
            format!("monotonicity violation [{l}]"),
            drop.max(0.0),
            1e-14,
        ));

        let sym = symmetry_check(&pr, &xs, depth)?;
        out.push(Check::at_most(
            S,
            format!("symmetry defect [{l}]"),
            sym.max_defect,
            1e-10,
        ));
        let sc = scaling_check(&pr, &xs, depth)?;
        out.push(Check::at_most(
            S,
            format!("scaling defect [{l}]"),
            sc.max_defect,
            1e-10,
        ));

        let period = pr.beta().ln();
        let mut per = 0.0f64;
        let mut min_nu = f64::INFINITY;
        for i in 0..200 {
            let t = period * (i as f64 + 0.5) / 200.0;
            let a = nu(&pr, t, depth);
            per = per.max((a - nu(&pr, t + period, depth)).abs());
            min_nu = min_nu.min(a);
        }
        out.push(Check::at_most(
            S,
            format!("nu periodicity defect [{l}]"),
            per,
            1e-10,
        ));
        out.push(Check::at_least(
            S,
            format!("nu minimum over one period [{l}]"),
            min_nu,
            f64::MIN_POSITIVE,
        ));

        // In exact arithmetic: rounding the quantile to a double moves F by up
        // to ulp^h for the Holder exponent h, far more than the descent error.
        let mut rt = 0.0f64;
        let tol = cdf_modulus(&pr, depth) + 1e-14;
        for &a in xs.iter().take(200) {
            let q = quantile_exact(&pr, &exact::rational_from_f64(a)?, depth)?;
            let f = cdf_exact(&pr, &q, depth)?;
            rt = rt.max((a - f.upper()).max(f.lower() - a - tol)).max(0.0);
        }
        out.push(Check::at_most(
            S,
            format!("quantile round-trip excess [{l}]"),
            rt,
            1e-14,
        ));
    }
    Ok(out)
}

fn exactlaw_suite() -> Result<Vec<Check>> {
    const S: &str = "exactlaw";
    let mut out = Vec::new();
    for pr in suite_params() {
        let l = label(&pr);
        let mut rec_vs_closed = 0.0f64;
        let mut outside = 0.0f64;
        let mut automaton = 0.0f64;
        let mut monotone = 0.0f64;
        for &x in &[-0.5, -1.0, -1.5] {
            for n in 3..=6 {
                let lv = make_levels(&pr, x, n)?;
                let table = MaxLawTable::build(&pr, &lv, DEFAULT_DEPTH)?;
                for s in 2..=lv.j_n + 1 {
                    let rec = table.get(s, 0).expect("in range").value;
                    let cf = closed_form(&pr, &lv, s, DEFAULT_DEPTH)?;
                    rec_vs_closed = rec_vs_closed.max((rec - cf).abs());
                    if s <= 5 {
                        let br = max_law_bracket(&pr, &lv.u_exact(), s, 12)?;
                        outside = outside.max(br.lower - rec).max(rec - br.upper).max(0.0);
                    }
                    if x == -1.0 {
                        let a = run_automaton(pr.q(), n, s as u64)?;
                        automaton = automaton.max((a - cf).abs());
                    }
                    let prev = table.get(s - 1, 0).expect("in range").value;
                    monotone = monotone.max(rec - prev);
                }
            }
        }
        out.push(Check::at_most(
            S,
            format!("recursion vs closed form [{l}]"),
            rec_vs_closed,
            1e-12,
        ));
        out.push(Check::at_most(
            S,
            format!("recursion outside enumeration bracket [{l}]"),
            outside,
            1e-12,
        ));
        out.push(Check::at_most(
            S,
            format!("automaton vs closed form at x=-1 [{l}]"),
            automaton,
            1e-12,
        ));
        out.push(Check::at_most(
            S,
            format!("max law increase in s [{l}]"),
            monotone.max(0.0),
            1e-15,
        ));
        let atoms = enumerate_atoms(&pr, 6, 6)?;
        let mut ylaw = 0.0f64;
        for i in 1..=6 {
            let (v, _) = atoms.y_law_top(i)?;
            ylaw = ylaw.max((v - pr.q().powi(i as i32)).abs());
        }
        out.push(Check::at_most(
            S,
            format!("top innovation word probability [{l}]"),
            ylaw,
            1e-15,
        ));
    }
    Ok(out)
}

fn dynamics_suite(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "dynamics";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut out = Vec::new();
    for pr in suite_params() {
        let l = label(&pr);
        let intervals: Vec<(f64, f64)> = (0..200)
            .map(|_| {
                let (a, b) = (rng.random::<f64>(), rng.random::<f64>());
                (a.min(b), a.max(b))
            })
            .collect();
        let d = invariance_defect(&pr, &intervals, DEFAULT_DEPTH)?;
        out.push(Check::at_most(
            S,
            format!("invariance defect [{l}]"),
            d,
            1e-10,
        ));
        let traj = simulate_ar(&pr, &MonteCarloConfig::new(seed, 1), 10_000)?;
        let rep = check_conjugacy(&pr, &traj);
        out.push(Check::at_most(
            S,
            format!("conjugacy mismatches over 1e4 steps [{l}]"),
            rep.mismatches as f64,
            0.0,
        ));
        let lam = orbit_lyapunov(pr.beta(), &traj.x);
        out.push(Check::at_most(
            S,
            format!("orbit Lyapunov exponent minus -log beta [{l}]"),
            (lam - lyapunov(pr.beta())).abs(),
            0.0,
        ));
    }
    Ok(out)
}

fn association_suite(seed: u64) -> Result<Vec<Check>> {
    const S: &str = "association";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa55);
    let mut slack = f64::INFINITY;
    let mut cond = f64::INFINITY;
    let mut telescope_excess = 0.0f64;
    let configs = 60;
    for c in 0..configs {
        let prs = suite_params();
        let pr = &prs[c % prs.len()];
        let (blocks, u, k) = random_configuration(pr, &mut rng)?;
        let pb = check_product_bound(pr, &blocks, &u, k)?;
        slack = slack.min(pb.certified_slack);
        let cb = check_conditional_bound(pr, &blocks, &u, k)?;
        for t in &cb.terms {
            cond = cond.min(t.diff + t.error);
        }
        let excess = cb.gap.abs() - cb.sum_abs_terms - cb.gap_error - cb.terms_error;
        telescope_excess = telescope_excess.max(excess);
    }
    Ok(vec![
        Check::at_least(S, "smallest certified product slack", slack, -1e-12),
        Check::at_least(S, "smallest conditional term plus bracket error", cond, 0.0),
        Check::at_most(
            S,
            "telescoping bound excess",
            telescope_excess.max(0.0),
            1e-15,
        ),
    ])
}

/// Random disjoint index blocks within `0..=m`, a level `u_n(x)` and the
/// number of digits of `X_0`, with `K + m <= 20`.
pub fn random_configuration<R: Rng>(
    params: &Params,
    rng: &mut R,
) -> Result<(Vec<Vec<u32>>, BigRational, u32)> {
    let m: u32 = rng.random_range(3..=12);
    let k = 20 - m;
    let r = rng.random_range(2..=4usize).min(m as usize + 1);
    let mut cuts: Vec<u32> = Vec::new();
    while cuts.len() < r - 1 {
        let c = rng.random_range(1..=m);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut bounds = vec![0u32];
    bounds.extend(cuts);
    bounds.push(m + 1);
    let blocks: Vec<Vec<u32>> = bounds
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let lo = rng.random_range(a..b);
            let hi = rng.random_range(lo..b);
            (lo..=hi).collect()
        })
        .collect();
    let xs = [-0.5, -1.0, -1.5];
    let x = xs[rng.random_range(0..xs.len())];
    let n = rng.random_range(2..=5u32);
    let lv = make_levels(params, x, n)?;
    Ok((blocks, lv.u_exact(), k))
}
