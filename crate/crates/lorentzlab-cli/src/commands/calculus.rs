use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lorentzlab::calculus::{
    causality_check, dalembert_verify, is_steep, mcshane_extend, metric_brenier_analytic, metric_brenier_check, null_distances_from,
    slopes as slope_field, BrenierReport, BumpSpec, DalembertOptions, ExtensionMode, WeakForm, SLOPE_SCHEDULE,
};
use lorentzlab::calculus::null_distance::strict_causality_witness;
use lorentzlab::HyperbolicNorm;

use super::{load_function, load_measure, load_space, target, total_function};
use crate::config::Config;
use crate::error::{CliError, CliResult, Context};
use crate::output::{ext, float, Csv, Report};

/// Forward, backward and steepness slopes of a function.
pub fn slopes(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let f = total_function(cfg, space.len())?;
    let schedule = cfg.calculus.schedule.clone().unwrap_or_else(|| SLOPE_SCHEDULE.to_vec());
    let field = slope_field(&space, &f, &schedule).ctx("slopes")?;
    let mut csv = Csv::new(&["point", "fwd", "bwd", "st"]);
    for i in 0..space.len() {
        csv.row(vec![i.to_string(), float(field.fwd[i]), float(field.bwd[i]), float(field.st[i])]);
    }
    let bad = causality_check(&space, &f).ctx("causality")?;
    let mut r = Report::default();
    r.check("causal", bad.is_empty(), bad.first().map_or("ok".into(), |w| format!("decreases on {w:?}")), "");
    r.note("levels", field.levels.len().to_string());
    r.file("slopes.csv", csv);
    Ok(r)
}

/// The extremal `L`-steep extensions `f∧ ≤ f∨` of a partial function.
pub fn mcshane(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let f = load_function(cfg, space.len())?;
    let l = cfg.calculus.steepness.unwrap_or(1.0);
    let lower = mcshane_extend(&space, &f, l, ExtensionMode::Lower).ctx("lower extension")?;
    let upper = mcshane_extend(&space, &f, l, ExtensionMode::Upper).ctx("upper extension")?;
    let mut csv = Csv::new(&["point", "given", "lower", "upper"]);
    for i in 0..space.len() {
        csv.row(vec![i.to_string(), f[i].map_or(String::new(), ext), ext(lower[i]), ext(upper[i])]);
    }
    let ordered = lower.iter().zip(&upper).all(|(a, b)| a <= b);
    let mut r = Report::default();
    r.check("lower_steep", is_steep(&space, &lower, l).ctx("steepness")?, "", float(l));
    r.check("upper_steep", is_steep(&space, &upper, l).ctx("steepness")?, "", float(l));
    r.check("lower_le_upper", ordered, ordered.to_string(), "");
    r.file("extension.csv", csv);
    Ok(r)
}

/// Null distance `d̂_f` for a time function `f`.
pub fn null_dist(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let f: Vec<f64> = total_function(cfg, space.len())?
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.finite().ok_or_else(|| CliError::Usage(format!("time function must be finite; point {i} has {}", ext(v)))))
        .collect::<CliResult<_>>()?;
    let mut r = Report::default();
    if let Some((x, y)) = strict_causality_witness(&space, &f) {
        r.precondition = Some(format!("f is not a time function: {x} ≤ {y} but f({x}) = {} ≥ f({y}) = {}", f[x], f[y]));
        r.check("time_function", false, format!("({x}, {y})"), "");
        return Ok(r);
    }
    let sources: Vec<usize> = match cfg.calculus.source {
        Some(s) => vec![s],
        None => (0..space.len()).collect(),
    };
    let n = space.len();
    let mut d = vec![vec![f64::NAN; n]; n];
    let mut csv = Csv::new(&["x", "y", "null_distance"]);
    for &x in &sources {
        d[x] = null_distances_from(&space, &f, x).ctx(format!("null distance from {x}"))?;
        for y in 0..n {
            csv.row(vec![x.to_string(), y.to_string(), float(d[x][y])]);
        }
    }
    let tol = cfg.tol();
    let mut causal_dev = 0.0f64;
    let mut sym_dev = 0.0f64;
    for &x in &sources {
        for y in 0..n {
            if space.leq(x, y) {
                causal_dev = causal_dev.max((d[x][y] - (f[y] - f[x])).abs());
            }
            if sources.len() == n {
                sym_dev = sym_dev.max((d[x][y] - d[y][x]).abs());
            }
        }
    }
    r.check("causal_pairs_equal_time_difference", causal_dev <= tol, float(causal_dev), float(tol));
    if sources.len() == n {
        r.check("symmetric", sym_dev <= tol, float(sym_dev), float(tol));
    }
    r.file("null_distance.csv", csv);
    Ok(r)
}

/// Weak-form d'Alembert comparison on Minkowski space.
pub fn dalembert(cfg: &Config) -> CliResult<Report> {
    let c = &cfg.calculus;
    let dim = c.dim.unwrap_or(2);
    let norm = HyperbolicNorm::minkowski(dim).ctx("norm")?;
    let past = c.past.unwrap_or(false);
    let form = match c.form.as_deref().unwrap_or("potential") {
        "potential" => WeakForm::Potential,
        "distance" => WeakForm::Distance,
        f => return Err(CliError::Usage(format!("calculus.form must be `potential` or `distance`, got `{f}`"))),
    };
    let centre = c.centre.clone().unwrap_or_else(|| {
        let mut v = vec![0.3; dim];
        v[0] = if past { 5.0 } else { -5.0 };
        v
    });
    let opts = DalembertOptions {
        o: c.o.clone().unwrap_or_else(|| vec![0.0; dim]),
        p: cfg.p().unwrap_or(-1.0),
        k: cfg.curvature.k.unwrap_or(0.0),
        n: cfg.curvature.n.unwrap_or(dim as f64),
        form,
        past,
        bump: BumpSpec { centre, radius: c.radius.clone().unwrap_or_else(|| vec![1.0; dim]), amplitude: c.amplitude.unwrap_or(1.0) },
        resolutions: c.resolutions.clone().unwrap_or_else(|| vec![8, 16, 32]),
    };
    let rep = dalembert_verify(&norm, &opts).ctx("dalembert")?;
    let mut csv = Csv::new(&["cells", "h", "lhs", "rhs", "defect"]);
    for l in &rep.levels {
        csv.row(vec![l.cells.to_string(), float(l.h), float(l.lhs), float(l.rhs), float(l.defect)]);
    }
    let rel_tol = c.rel_tol.unwrap_or(0.02);
    let mut r = Report::default();
    r.check("defect_decreases", rep.monotone, rep.levels.iter().map(|l| float(l.defect.abs())).collect::<Vec<_>>().join(" "), "");
    r.check("relative_defect", rep.relative_defect <= rel_tol, float(rep.relative_defect), float(rel_tol));
    if past {
        let flipped = rep.levels.iter().all(|l| l.lhs < 0.0);
        r.check("past_sign", flipped, flipped.to_string(), "");
    }
    r.file("dalembert.csv", csv);
    Ok(r)
}

fn brenier_csv(rep: &BrenierReport) -> Csv {
    let mut csv = Csv::new(&["point", "ell", "slope", "expected", "rel_dev"]);
    for row in &rep.rows {
        csv.row(vec![row.point.to_string(), float(row.ell), float(row.slope), float(row.expected), float(row.rel_dev)]);
    }
    csv
}

/// `|∂f^o| = ℓ(·, o)^{q−1}`: analytically on Minkowski space, or by
/// backward slopes on a grid.
pub fn brenier(cfg: &Config) -> CliResult<Report> {
    let c = &cfg.calculus;
    let q = cfg.q().unwrap_or(0.5);
    let mut r = Report::default();
    match c.mode.as_deref().unwrap_or("analytic") {
        "analytic" => {
            let dim = c.dim.unwrap_or(3);
            let norm = HyperbolicNorm::minkowski(dim).ctx("norm")?;
            let o = c.o.clone().unwrap_or_else(|| vec![0.0; dim]);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
            let samples = c.samples.unwrap_or(200);
            let pts: Vec<Vec<f64>> = (0..samples)
                .map(|_| loop {
                    let mut w: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.5..1.5)).collect();
                    w[0] = rng.random_range(0.5..4.0);
                    if norm.eval(&w).is_ok_and(|l| l.finite_value().is_some_and(|l| l > 0.05)) {
                        break o.iter().zip(&w).map(|(a, b)| a - b).collect();
                    }
                })
                .collect();
            let rep = metric_brenier_analytic(&norm, &pts, &o, q).ctx("brenier")?;
            let tol = cfg.tol.unwrap_or(1e-10);
            r.check("max_rel_dev", rep.max_rel_dev <= tol, float(rep.max_rel_dev), float(tol));
            r.file("brenier.csv", brenier_csv(&rep));
        }
        "grid" => {
            let space = load_space(cfg)?;
            let mu = load_measure(&cfg.transport.mu, "transport.mu", space.len())?;
            let o = target(cfg, &space)?;
            let rep = metric_brenier_check(&space, &mu, o, q, c.neighbours.unwrap_or(1)).ctx("brenier")?;
            let h = space
                .grid()
                .map(|g| g.spacing.iter().cloned().fold(0.0, f64::max))
                .ok_or_else(|| CliError::Usage("grid mode needs a grid spacetime".into()))?;
            let factor = c.grid_factor.unwrap_or(3.0);
            let tol = factor * h / rep.ell_min;
            // a ray whose primitive step leaves the grid has no competitor
            let covered: Vec<_> = rep.rows.iter().filter(|row| row.slope.is_finite()).collect();
            let worst = covered.iter().map(|row| row.rel_dev).fold(0.0, f64::max);
            let uncovered = rep.rows.len() - covered.len();
            r.check("rows_without_competitor", !covered.is_empty(), uncovered.to_string(), "");
            r.check("max_rel_dev", !covered.is_empty() && worst <= tol, float(worst), float(tol));
            r.note("ell_min", float(rep.ell_min));
            r.file("brenier.csv", brenier_csv(&rep));
        }
        m => return Err(CliError::Usage(format!("calculus.mode must be `analytic` or `grid`, got `{m}`"))),
    }
    r.note("q", float(q));
    Ok(r)
}

