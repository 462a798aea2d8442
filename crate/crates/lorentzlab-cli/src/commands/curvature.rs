use lorentzlab::curvature::{
    affine_interpolant, default_dimensions, sigma_tilde, tau_tilde, tmcp_check as check, DistortionParams, Direction, GoodGeodesicOptions,
    TmcpOptions, TmcpReport,
};
use lorentzlab::transport::{interpolate_coupling, Coupling, DiscreteMeasure};
use lorentzlab::DiscreteSpacetime;

use super::{list, load_measure, load_space, need, target};
use crate::config::Config;
use crate::error::{CliError, CliResult, Context};
use crate::output::{float, time, Csv, Report};

/// Relative agreement required between `τ̃, σ̃` and finite differences.
const RICHARDSON_TOL: f64 = 1e-6;

fn measure_csv(geodesic: &[(f64, DiscreteMeasure)]) -> Csv {
    let mut csv = Csv::new(&["t", "point", "mass"]);
    for (t, m) in geodesic {
        for (p, &w) in m.weights().iter().enumerate().filter(|(_, w)| **w > 0.0) {
            csv.row(vec![float(*t), p.to_string(), float(w)]);
        }
    }
    csv
}

fn tmcp_csv(rep: &TmcpReport) -> Csv {
    let mut csv = Csv::new(&["t", "n", "lhs", "rhs", "defect", "max_density", "density_bound"]);
    for row in &rep.rows {
        csv.row(vec![float(row.t), float(row.n), float(row.lhs), float(row.rhs), float(row.defect), float(row.max_density), float(row.density_bound)]);
    }
    csv
}

/// Builds a good geodesic from `μ₀` to `δ_{x₁}` and certifies it.
pub fn good_geodesic(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let mu = load_measure(&cfg.transport.mu, "transport.mu", space.len())?;
    let x1 = target(cfg, &space)?;
    let c = &cfg.curvature;
    let n = c.n.unwrap_or(space.dim() as f64);
    let q = cfg.q().unwrap_or(0.5);
    let mut opts = GoodGeodesicOptions::new(c.k.unwrap_or(0.0), n, q, c.lambda.unwrap_or(0.5), c.depth.unwrap_or(2), need(&c.fibre_tol, "curvature.fibre_tol")?);
    opts.tol = cfg.tol();
    if let Some(v) = c.fibre_radius {
        opts.fibre_radius = v;
    }
    if let Some(v) = c.max_iter {
        opts.max_iter = v;
    }
    if let Some(v) = c.sweeps {
        opts.sweeps = v;
    }
    let (geo, rep) = lorentzlab::curvature::good_geodesic(&space, &mu, x1, &opts).ctx("good-geodesic")?;
    let mut levels = Csv::new(&["level", "s", "t", "max_density", "density_bound", "mass_excess", "iterations"]);
    let mut r = Report::default();
    for (i, l) in rep.levels.iter().enumerate() {
        levels.row(vec![
            (i + 1).to_string(),
            float(l.s),
            float(l.t),
            float(l.max_density),
            float(l.density_bound),
            float(l.mass_excess),
            l.redistribution_iterations.to_string(),
        ]);
        r.check(format!("density_bound[t={}]", l.t), l.max_density <= l.density_bound * (1.0 + 1e-9), float(l.max_density), float(l.density_bound));
    }
    r.check("geodesy", rep.geodesy_defect >= -rep.geodesy_tol, float(rep.geodesy_defect), float(rep.geodesy_tol));
    r.check("entropy_inequality", rep.entropy.passed, float(rep.entropy.worst_defect), float(rep.entropy.tol));
    if let Some(f) = &rep.failure {
        r.note("first_density_failure", format!("level {} cell {} density {} > {}", f.level, f.cell, float(f.density), float(f.bound)));
    }
    r.note("lq", float(rep.lq));
    r.note("diameter", float(rep.diameter));
    r.file("levels.csv", levels);
    r.file("geodesic.csv", measure_csv(&geo));
    r.file("entropy.csv", tmcp_csv(&rep.entropy));
    Ok(r)
}

/// `μ_t` between an absolutely continuous measure and a Dirac mass: the
/// affine interpolant on grids, snapped intermediate points elsewhere.
fn dirac_geodesic(space: &DiscreteSpacetime, mu: &DiscreteMeasure, x: usize, ts: &[f64], direction: Direction) -> CliResult<Vec<(f64, DiscreteMeasure)>> {
    let anchor = if direction == Direction::Future { 0.0 } else { 1.0 };
    let mut geo = vec![(anchor, mu.clone())];
    let coupling = Coupling {
        entries: mu
            .support()
            .into_iter()
            .map(|p| if direction == Direction::Future { (p, x, mu.weight(p)) } else { (x, p, mu.weight(p)) })
            .collect(),
    };
    for &t in ts {
        if t == anchor {
            continue;
        }
        // parameter along the segment from the absolutely continuous end
        let s = if direction == Direction::Future { t } else { 1.0 - t };
        let m = if space.grid().is_some() {
            affine_interpolant(space, mu, x, s).ctx(format!("interpolant at t = {t}"))?
        } else {
            interpolate_coupling(space, &coupling, t, f64::INFINITY).ctx(format!("interpolant at t = {t}"))?.xi
        };
        geo.push((t, m));
    }
    Ok(geo)
}

/// Entropy inequality along the geodesic between `μ` and a Dirac mass.
pub fn tmcp_check(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let mu = load_measure(&cfg.transport.mu, "transport.mu", space.len())?;
    let x = target(cfg, &space)?;
    let c = &cfg.curvature;
    let direction = match c.direction.as_deref().unwrap_or("future") {
        "future" => Direction::Future,
        "past" => Direction::Past,
        d => return Err(CliError::Usage(format!("curvature.direction must be `future` or `past`, got `{d}`"))),
    };
    let n = c.n.unwrap_or(space.dim() as f64);
    let ts = c.t.clone().unwrap_or_else(|| vec![0.25, 0.5, 0.75]);
    let geo = dirac_geodesic(&space, &mu, x, &ts, direction)?;
    let opts = TmcpOptions {
        k: c.k.unwrap_or(0.0),
        dimensions: c.dimensions.clone().unwrap_or_else(|| default_dimensions(n)),
        direction,
        reduced: c.reduced.unwrap_or(false),
        tol: cfg.tol(),
    };
    let rep = check(&space, &geo, x, &opts).ctx("tmcp-check")?;
    let mut r = Report::default();
    for row in &rep.rows {
        r.check(format!("entropy[t={},N={}]", row.t, row.n), row.defect >= -opts.tol, float(row.defect), float(opts.tol));
    }
    r.note("dimensions", list(&opts.dimensions));
    r.note("diameter", float(rep.diameter));
    r.file("tmcp.csv", tmcp_csv(&rep));
    r.file("geodesic.csv", measure_csv(&geo));
    Ok(r)
}

fn richardson_at_one(f: impl Fn(f64) -> Option<f64>) -> Option<f64> {
    let d = |h: f64| Some((f(1.0)? - f(1.0 - h)?) / h);
    let r1 = |h: f64| Some(2.0 * d(h / 2.0)? - d(h)?);
    let r2 = |h: f64| Some((4.0 * r1(h / 2.0)? - r1(h)?) / 3.0);
    let h = 0.02;
    Some((8.0 * r2(h / 2.0)? - r2(h)?) / 7.0)
}

/// Tabulates `σ`, `τ` and their `r = 1` derivatives over a parameter grid.
pub fn distortion(cfg: &Config) -> CliResult<Report> {
    let c = &cfg.curvature;
    let k = c.k.unwrap_or(0.0);
    let n = c.n.unwrap_or(3.0);
    let ts = c.t.clone().unwrap_or_else(|| (0..=10).map(|i| i as f64 / 10.0).collect());
    let thetas = c.theta.clone().unwrap_or_else(|| vec![0.0, 0.5, 1.0, 2.0, 4.0]);
    let mut table = Csv::new(&["k", "n", "t", "theta", "sigma", "tau"]);
    let mut tilde = Csv::new(&["k", "n", "theta", "sigma_tilde", "tau_tilde", "sigma_fd", "tau_fd"]);
    let mut dominated = true;
    let mut flat = true;
    let mut worst_fd = 0.0f64;
    for &theta in &thetas {
        for &t in &ts {
            let p = DistortionParams::new(k, n, t, theta).ctx("distortion")?;
            let (s, ta) = (p.sigma(), p.tau());
            dominated &= ta >= s || (ta.value().finite().zip(s.value().finite())).is_some_and(|(a, b)| (a - b).abs() <= 1e-14);
            if k == 0.0 {
                flat &= s.finite_value() == Some(t) && ta.finite_value() == Some(t);
            }
            table.row(vec![float(k), float(n), float(t), float(theta), time(s), time(ta)]);
        }
        if let (Ok(st), Ok(tt)) = (sigma_tilde(k, n, theta), tau_tilde(k, n, theta)) {
            let at = |r: f64, sig: bool| DistortionParams::new(k, n, r, theta).ok().and_then(|p| if sig { p.sigma() } else { p.tau() }.finite_value());
            let (sf, tf) = (richardson_at_one(|r| at(r, true)), richardson_at_one(|r| at(r, false)));
            for (exact, fd) in [(st, sf), (tt, tf)] {
                if let Some(fd) = fd {
                    worst_fd = worst_fd.max(((exact - fd) / exact).abs());
                }
            }
            tilde.row(vec![float(k), float(n), float(theta), float(st), float(tt), sf.map_or("nan".into(), float), tf.map_or("nan".into(), float)]);
        }
    }
    let mut r = Report::default();
    r.check("tau_dominates_sigma", dominated, dominated.to_string(), "");
    if k == 0.0 {
        r.check("flat_coefficients_equal_t", flat, flat.to_string(), "0");
    }
    r.check("tilde_vs_richardson", worst_fd <= RICHARDSON_TOL, float(worst_fd), float(RICHARDSON_TOL));
    r.file("distortion.csv", table);
    r.file("tilde.csv", tilde);
    Ok(r)
}
