//! One function per subcommand; each renders a CSV document.

use cantor_evt::exact::to_f64;
use cantor_evt::exactlaw::{make_levels_exact, max_law_bracket};
use cantor_evt::simulate::estimate_extremal_index_both;
use cantor_evt::verify::run_suite;
use cantor_evt::{
    cdf_exact, closed_form, empirical_max_law, estimate_extremal_index, limit_law_dependent,
    limit_law_iid, make_levels, nu, p_recursion, quantile, run_automaton, simulate_ar, Beta, Error,
    MonteCarloConfig, Params, ThetaEstimate, ThetaMethod, DEFAULT_DEPTH,
};
use num_rational::BigRational;
use num_traits::One;

use crate::args::{
    CdfArgs, ExactLawArgs, ExtremalArgs, MaxLawArgs, MethodArg, Model, NuArgs, QuantileArgs,
    SimulateArgs, VerifyArgs,
};
use crate::output::{Cell, Csv};

pub type Meta = [(String, String)];

pub fn params(m: &Model) -> Result<Params, Error> {
    Params::with_beta(Beta::from_rational(&m.beta)?, to_f64(&m.p))
}

/// `n + 1` equally spaced rationals `i / n` on `[0, 1]`.
fn unit_grid(n: u32) -> Result<Vec<BigRational>, Error> {
    if n == 0 {
        return Err(Error::Argument("grid needs at least one interval".into()));
    }
    Ok((0..=n)
        .map(|i| BigRational::new(i.into(), n.into()))
        .collect())
}

pub fn cdf(a: &CdfArgs, meta: &Meta) -> Result<Csv, Error> {
    let pr = params(&a.model)?;
    let xs = match a.grid {
        Some(n) => unit_grid(n)?,
        None => a.x.clone(),
    };
    let mut csv = Csv::new(meta, &["x", "F", "error_bound", "exact_flag"]);
    for x in &xs {
        let v = cdf_exact(&pr, x, a.depth)?;
        csv.row(&[
            Cell::Num(to_f64(x)),
            Cell::Num(v.value),
            Cell::Num(v.error_bound),
            Cell::Bool(v.exact),
        ]);
    }
    Ok(csv)
}

/// `n + 1` points spanning one period `[log beta, 0]`.
pub fn period_grid(pr: &Params, n: u32) -> Result<Vec<f64>, Error> {
    if n == 0 {
        return Err(Error::Argument("grid needs at least one interval".into()));
    }
    let period = pr.beta().ln();
    Ok((0..=n)
        .map(|i| period - i as f64 / n as f64 * period)
        .collect())
}

pub fn nu_table(a: &NuArgs, meta: &Meta) -> Result<Csv, Error> {
    let pr = params(&a.model)?;
    let mut csv = Csv::new(meta, &["t", "nu"]);
    for t in period_grid(&pr, a.grid)? {
        csv.row(&[Cell::Num(t), Cell::Num(nu(&pr, t, a.depth))]);
    }
    Ok(csv)
}

pub fn quantiles(a: &QuantileArgs, meta: &Meta) -> Result<Csv, Error> {
    let pr = params(&a.model)?;
    let alphas: Vec<f64> = match a.grid {
        Some(n) => unit_grid(n)?.iter().map(to_f64).collect(),
        None => a.alpha.clone(),
    };
    let mut csv = Csv::new(meta, &["alpha", "x"]);
    for al in alphas {
        csv.row(&[Cell::Num(al), Cell::Num(quantile(&pr, al, a.depth)?)]);
    }
    Ok(csv)
}

pub fn simulate(a: &SimulateArgs, seed: u64, meta: &Meta) -> Result<Csv, Error> {
    let pr = params(&a.model)?;
    let cfg = MonteCarloConfig {
        depth: a.depth,
        ..MonteCarloConfig::new(seed, 1)
    };
    let tr = simulate_ar(&pr, &cfg, a.steps)?;
    let mut csv = Csv::new(meta, &["t", "x", "innovation_digit"]);
    for (t, &x) in tr.x.iter().enumerate() {
        let digit = if t == 0 {
            String::new()
        } else {
            tr.innovations[t - 1].to_string()
        };
        csv.row(&[Cell::Int(t as u64), Cell::Num(x), Cell::Text(&digit)]);
    }
    Ok(csv)
}

/// Limit law value, or NaN where the law degenerates.
fn theory(v: Result<f64, Error>) -> Result<f64, Error> {
    match v {
        Err(Error::Degenerate) => Ok(f64::NAN),
        other => other,
    }
}

pub fn max_law(a: &MaxLawArgs, seed: u64, meta: &Meta) -> Result<Csv, Error> {
    let pr = params(&a.model)?;
    let cfg = MonteCarloConfig::new(seed, a.reps);
    let law = empirical_max_law(&pr, &a.x_grid, a.n, &cfg, a.mode.into())?;
    let mut csv = Csv::new(meta, &["x", "empirical", "ci", "theory_dep", "theory_iid"]);
    for (i, &x) in law.x.iter().enumerate() {
        csv.row(&[
            Cell::Num(x),
            Cell::Num(law.estimate[i]),
            Cell::Num(law.ci_half_width[i]),
            Cell::Num(theory(limit_law_dependent(&pr, x, DEFAULT_DEPTH))?),
            Cell::Num(theory(limit_law_iid(&pr, x, DEFAULT_DEPTH))?),
        ]);
    }
    Ok(csv)
}

pub fn extremal_index(a: &ExtremalArgs, seed: u64, meta: &Meta) -> Result<Csv, Error> {
    let pr = params(&a.model)?;
    let lv = make_levels(&pr, a.x, a.n)?;
    let cfg = MonteCarloConfig {
        horizon: a.horizon,
        bootstrap: a.bootstrap,
        ..MonteCarloConfig::new(seed, a.reps)
    };
    let mode = a.mode.into();
    let estimates: Vec<ThetaEstimate> = match a.method {
        MethodArg::Runs => vec![estimate_extremal_index(
            &pr,
            &lv,
            &cfg,
            ThetaMethod::Runs,
            mode,
        )?],
        MethodArg::Ratio => vec![estimate_extremal_index(
            &pr,
            &lv,
            &cfg,
            ThetaMethod::Ratio,
            mode,
        )?],
        MethodArg::Both => {
            let (runs, ratio) = estimate_extremal_index_both(&pr, &lv, &cfg, mode)?;
            vec![runs?, ratio?]
        }
    };
    let mut csv = Csv::new(
        meta,
        &["method", "estimate", "ci_lo", "ci_hi", "theta_theory"],
    );
    for e in &estimates {
        csv.row(&[
            Cell::Text(e.method.name()),
            Cell::Num(e.estimate),
            Cell::Num(e.ci_lo),
            Cell::Num(e.ci_hi),
            Cell::Num(e.theta_theory),
        ]);
    }
    Ok(csv)
}

pub fn exact_law(a: &ExactLawArgs, meta: &Meta) -> Result<Csv, Error> {
    let pr = params(&a.model)?;
    let lv = make_levels_exact(&pr, &a.x, a.n)?;
    let ss: Vec<u32> = if a.s.is_empty() {
        (2..=lv.j_n + 1).collect()
    } else {
        a.s.clone()
    };
    let at_minus_one = a.x == -BigRational::one();
    let mut csv = Csv::new(
        meta,
        &[
            "s",
            "recursion",
            "closed_form",
            "automaton",
            "bracket_lo",
            "bracket_hi",
        ],
    );
    for &s in &ss {
        let rec = p_recursion(&pr, &lv, s, 0, a.depth)?;
        let closed = closed_form(&pr, &lv, s, a.depth)?;
        let auto = if at_minus_one {
            run_automaton(pr.q(), a.n, s as u64)?
        } else {
            f64::NAN
        };
        let (lo, hi) = if a.k > 0 {
            let b = max_law_bracket(&pr, &lv.u_exact(), s, a.k)?;
            (b.lower, b.upper)
        } else {
            (f64::NAN, f64::NAN)
        };
        csv.row(&[
            Cell::Int(s as u64),
            Cell::Num(rec),
            Cell::Num(closed),
            Cell::Num(auto),
            Cell::Num(lo),
            Cell::Num(hi),
        ]);
    }
    Ok(csv)
}

/// The report and the number of failed checks.
pub fn verify(a: &VerifyArgs, seed: u64, meta: &Meta) -> Result<(Csv, usize), Error> {
    let checks = run_suite(a.suite.into(), seed)?;
    let mut csv = Csv::new(
        meta,
        &["suite", "invariant", "measured", "threshold", "passed"],
    );
    for c in &checks {
        csv.row(&[
            Cell::Text(c.suite),
            Cell::Text(&c.name),
            Cell::Num(c.measured),
            Cell::Num(c.threshold),
            Cell::Bool(c.passed),
        ]);
    }
    Ok((csv, checks.iter().filter(|c| !c.passed).count()))
}
