//! Figure data: distribution function and nu panels for three parameter
//! pairs, and the convergence tables.

use std::path::{Path, PathBuf};

use cantor_evt::exact::{pow_i, to_f64};
use cantor_evt::simulate::doa_convergence;
use cantor_evt::{
    cdf_exact, empirical_max_law, limit_law_dependent, limit_law_iid, nu, Error, Mode,
    MonteCarloConfig, Params, DEFAULT_DEPTH,
};
use num_rational::BigRational;

use crate::args::{FigureId, FiguresArgs};
use crate::commands::{period_grid, Meta};
use crate::output::{Cell, Csv};
use crate::svg::{line_chart, Series};

/// A file the figure command writes.
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

pub fn figure_params(id: FigureId) -> Option<Params> {
    let pr = match id {
        FigureId::One => Params::ratio(1, 3, 0.5),
        FigureId::Two => Params::ratio(1, 2, 0.25),
        FigureId::Three => Params::ratio(1, 2, 0.75),
        FigureId::Convergence => return None,
    };
    Some(pr.expect("valid figure parameters"))
}

fn with(meta: &Meta, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let mut m = meta.to_vec();
    m.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
    m
}

/// Grid `i / n` merged with the points `beta^k >= 1/n`, where the curve
/// meets the reference power exactly.
fn cdf_points(pr: &Params, n: u32) -> Vec<BigRational> {
    let mut xs: Vec<BigRational> = (0..=n)
        .map(|i| BigRational::new(i.into(), n.into()))
        .collect();
    let floor = BigRational::new(1.into(), n.into());
    let beta = pr.beta().exact();
    let mut k = 1;
    loop {
        let b = pow_i(&beta, k);
        if b < floor {
            break;
        }
        xs.push(b);
        k += 1;
    }
    xs.sort();
    xs.dedup();
    xs
}

fn marginal_figure(
    tag: &str,
    pr: &Params,
    a: &FiguresArgs,
    meta: &Meta,
) -> Result<Vec<Artifact>, Error> {
    let expo = pr.alpha_exponent();
    let extra = [
        (
            "beta",
            format!("{}/{}", pr.beta().numer(), pr.beta().denom()),
        ),
        ("p", pr.p().to_string()),
    ];
    let mut cdf_csv = Csv::new(&with(meta, &extra), &["x", "F", "reference"]);
    let (mut curve, mut refc) = (Vec::new(), Vec::new());
    for x in cdf_points(pr, a.grid) {
        let xf = to_f64(&x);
        let f = cdf_exact(pr, &x, DEFAULT_DEPTH)?.value;
        let r = xf.powf(expo);
        cdf_csv.row(&[Cell::Num(xf), Cell::Num(f), Cell::Num(r)]);
        curve.push((xf, f));
        refc.push((xf, r));
    }
    let mut nu_csv = Csv::new(&with(meta, &extra), &["t", "nu"]);
    let mut nu_pts = Vec::new();
    for t in period_grid(pr, a.grid)? {
        let v = nu(pr, t, DEFAULT_DEPTH);
        nu_csv.row(&[Cell::Num(t), Cell::Num(v)]);
        nu_pts.push((t, v));
    }
    let title = format!(
        "beta = {}/{}, p = {}",
        pr.beta().numer(),
        pr.beta().denom(),
        pr.p()
    );
    let cdf_svg = line_chart(
        &title,
        "x",
        "F(x)",
        &[
            Series {
                label: "F",
                points: curve,
                dashed: false,
            },
            Series {
                label: "x^(log p / log beta)",
                points: refc,
                dashed: true,
            },
        ],
    );
    let nu_svg = line_chart(
        &title,
        "t",
        "nu(t)",
        &[Series {
            label: "nu",
            points: nu_pts,
            dashed: false,
        }],
    );
    Ok(vec![
        Artifact {
            name: format!("{tag}_cdf.csv"),
            contents: cdf_csv.as_str().into(),
        },
        Artifact {
            name: format!("{tag}_cdf.svg"),
            contents: cdf_svg,
        },
        Artifact {
            name: format!("{tag}_nu.csv"),
            contents: nu_csv.as_str().into(),
        },
        Artifact {
            name: format!("{tag}_nu.svg"),
            contents: nu_svg,
        },
    ])
}

fn convergence_figure(a: &FiguresArgs, seed: u64, meta: &Meta) -> Result<Vec<Artifact>, Error> {
    let pr = Params::ratio(1, 3, 0.5).expect("valid");
    let x = -1.0;
    let extra = [
        ("beta", "1/3".to_string()),
        ("p", "0.5".to_string()),
        ("x", "-1".to_string()),
    ];
    let mut doa = Csv::new(&with(meta, &extra), &["n", "k_n", "finite", "limit", "gap"]);
    let mut gap_pts = Vec::new();
    for r in doa_convergence(&pr, x, 4..=10, DEFAULT_DEPTH)? {
        doa.row(&[
            Cell::Int(r.n as u64),
            Cell::Int(r.k_n),
            Cell::Num(r.finite),
            Cell::Num(r.limit),
            Cell::Num(r.gap),
        ]);
        gap_pts.push((r.n as f64, r.gap.log10()));
    }

    let n = 8;
    let grid: Vec<f64> = (1..=30).map(|i| -(i as f64) / 10.0).rev().collect();
    let cfg = MonteCarloConfig::new(seed, a.reps);
    let dep = empirical_max_law(&pr, &grid, n, &cfg, Mode::Dependent)?;
    let iid = empirical_max_law(&pr, &grid, n, &cfg, Mode::Iid)?;
    let extra = [
        ("beta", "1/3".to_string()),
        ("p", "0.5".to_string()),
        ("n", n.to_string()),
        ("reps", a.reps.to_string()),
    ];
    let mut law = Csv::new(
        &with(meta, &extra),
        &[
            "x",
            "empirical_dep",
            "ci_dep",
            "empirical_iid",
            "ci_iid",
            "theory_dep",
            "theory_iid",
        ],
    );
    let mut series: [Vec<(f64, f64)>; 4] = Default::default();
    for (i, &xv) in grid.iter().enumerate() {
        let td = limit_law_dependent(&pr, xv, DEFAULT_DEPTH)?;
        let ti = limit_law_iid(&pr, xv, DEFAULT_DEPTH)?;
        law.row(&[
            Cell::Num(xv),
            Cell::Num(dep.estimate[i]),
            Cell::Num(dep.ci_half_width[i]),
            Cell::Num(iid.estimate[i]),
            Cell::Num(iid.ci_half_width[i]),
            Cell::Num(td),
            Cell::Num(ti),
        ]);
        series[0].push((xv, dep.estimate[i]));
        series[1].push((xv, td));
        series[2].push((xv, iid.estimate[i]));
        series[3].push((xv, ti));
    }
    let [ed, td, ei, ti] = series;
    let law_svg = line_chart(
        "P(M <= 1 + beta^n x), beta = 1/3, p = 1/2, n = 8",
        "x",
        "probability",
        &[
            Series {
                label: "empirical, process",
                points: ed,
                dashed: false,
            },
            Series {
                label: "limit, process",
                points: td,
                dashed: true,
            },
            Series {
                label: "empirical, i.i.d.",
                points: ei,
                dashed: false,
            },
            Series {
                label: "limit, i.i.d.",
                points: ti,
                dashed: true,
            },
        ],
    );
    let doa_svg = line_chart(
        "i.i.d. maxima: distance to the limit at x = -1",
        "n",
        "log10 gap",
        &[Series {
            label: "log10 |F^k_n - exp(-psi)|",
            points: gap_pts,
            dashed: false,
        }],
    );
    Ok(vec![
        Artifact {
            name: "convergence_doa.csv".into(),
            contents: doa.as_str().into(),
        },
        Artifact {
            name: "convergence_doa.svg".into(),
            contents: doa_svg,
        },
        Artifact {
            name: "convergence_law.csv".into(),
            contents: law.as_str().into(),
        },
        Artifact {
            name: "convergence_law.svg".into(),
            contents: law_svg,
        },
    ])
}

pub fn build(a: &FiguresArgs, seed: u64, meta: &Meta) -> Result<Vec<Artifact>, Error> {
    match (a.fig, figure_params(a.fig)) {
        (FigureId::One, Some(pr)) => marginal_figure("fig1", &pr, a, meta),
        (FigureId::Two, Some(pr)) => marginal_figure("fig2", &pr, a, meta),
        (FigureId::Three, Some(pr)) => marginal_figure("fig3", &pr, a, meta),
        _ => convergence_figure(a, seed, meta),
    }
}

/// Writes every artifact into `dir`, creating it when needed.
pub fn write(dir: &Path, artifacts: &[Artifact]) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    artifacts
        .iter()
        .map(|a| {
            let p = dir.join(&a.name);
            std::fs::write(&p, &a.contents).map(|_| p)
        })
        .collect()
}
