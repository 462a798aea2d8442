use lorentzlab::io::parse_measure;
use lorentzlab::transport::{
    duality_gap, interpolate_coupling, lift_to_plan, lq_distance, reverse_triangle_lq, KantorovichPotential, LqStatus,
};

use super::{list, load_function, load_measure, load_space, need, read};
use crate::config::Config;
use crate::error::{CliError, CliResult, Context};
use crate::output::{ext, float, time, Csv, Report};

fn exponent(cfg: &Config) -> CliResult<f64> {
    need(&cfg.q(), "transport.q")
}

/// `ℓ_q(μ, ν)` and an optimal coupling.
pub fn lq(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let q = exponent(cfg)?;
    let mu = load_measure(&cfg.transport.mu, "transport.mu", space.len())?;
    let nu = load_measure(&cfg.transport.nu, "transport.nu", space.len())?;
    let res = lq_distance(&space, &mu, &nu, q).ctx("lq")?;
    let mut r = Report::default();
    let mut main = Csv::new(&["lq", "status", "objective", "cs_residual"]);
    main.row(vec![time(res.value), format!("{:?}", res.status), ext(res.objective), float(res.cs_residual)]);
    let mut coupling = Csv::new(&["x", "y", "mass"]);
    for &(x, y, m) in &res.coupling.entries {
        coupling.row(vec![x.to_string(), y.to_string(), float(m)]);
    }
    r.check("causal_coupling_exists", res.status != LqStatus::NoCausalCoupling, format!("{:?}", res.status), "");
    if res.status != LqStatus::NoCausalCoupling {
        let marginal = res.coupling.marginal_error(&mu, &nu);
        r.check("complementary_slackness", res.cs_residual <= cfg.tol(), float(res.cs_residual), float(cfg.tol()));
        r.check("marginals", marginal <= cfg.tol(), float(marginal), float(cfg.tol()));
    }
    r.note("lq", time(res.value));
    r.note("q", float(q));
    r.file("lq.csv", main);
    r.file("coupling.csv", coupling);
    Ok(r)
}

/// `t`-intermediate measures along one optimal coupling.
pub fn interpolate(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let q = exponent(cfg)?;
    let mu = load_measure(&cfg.transport.mu, "transport.mu", space.len())?;
    let nu = load_measure(&cfg.transport.nu, "transport.nu", space.len())?;
    let ts = cfg.transport.t.clone().unwrap_or_else(|| vec![0.5]);
    let snap = cfg.transport.snap_tol.unwrap_or(f64::INFINITY);
    let res = lq_distance(&space, &mu, &nu, q).ctx("lq")?;
    if res.status != LqStatus::Optimal || !res.value.is_chronological() {
        return Err(CliError::Lib {
            context: "interpolate".into(),
            source: lorentzlab::Error::Precondition(format!("ℓ_q(μ, ν) = {} is not a positive finite value", time(res.value))),
        });
    }
    let mut r = Report::default();
    let mut csv = Csv::new(&["t", "point", "mass"]);
    let tol = cfg.tol();
    for &t in &ts {
        let ir = interpolate_coupling(&space, &res.coupling, t, snap).ctx(format!("interpolation at t = {t}"))?;
        for (p, &m) in ir.xi.weights().iter().enumerate().filter(|(_, m)| **m > 0.0) {
            csv.row(vec![float(t), p.to_string(), float(m)]);
        }
        r.check(format!("snapping_error[t={t}]"), ir.snapping_error <= snap, float(ir.snapping_error), float(snap));
        // ℓ_q(μ,ν) ≥ ℓ_q(μ,ξ) + ℓ_q(ξ,ν), with equality for an exact intermediate point
        let gap = reverse_triangle_lq(&space, &mu, &ir.xi, &nu, q).ctx("reverse triangle")?;
        let ok = gap.finite().is_some_and(|g| g >= -tol);
        r.check(format!("reverse_triangle_gap[t={t}]"), ok, ext(gap), float(tol));
    }
    r.note("lq", time(res.value));
    r.note("t", list(&ts));
    r.file("interpolation.csv", csv);
    Ok(r)
}

/// Lifts time-indexed slices to a discrete plan on piecewise geodesic paths.
pub fn lift(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let q = exponent(cfg)?;
    if cfg.transport.slices.is_empty() {
        return Err(CliError::Usage("missing setting `transport.slices` (list of { t, file })".into()));
    }
    let mut slices = Vec::new();
    for s in &cfg.transport.slices {
        let m = parse_measure(&read(&s.file)?, space.len()).ctx(s.file.display().to_string())?;
        slices.push((s.t, m));
    }
    let rep = lift_to_plan(&space, &slices, q).ctx("lift")?;
    let mut paths = Csv::new(&["path", "mass", "points"]);
    for (i, (pts, m)) in rep.plan.atoms.iter().enumerate() {
        paths.row(vec![i.to_string(), float(*m), pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")]);
    }
    let mut r = Report::default();
    let tol = cfg.tol();
    r.check("slice_error", rep.slice_error <= tol, float(rep.slice_error), float(tol));
    let diff = match (rep.plan_action, rep.dyadic_action) {
        (a, b) if a == b => 0.0,
        (lorentzlab::ExtReal::Finite(a), lorentzlab::ExtReal::Finite(b)) => (a - b).abs(),
        _ => f64::INFINITY,
    };
    r.check("plan_action_matches_dyadic", diff <= tol * rep.dyadic_action.finite().map_or(1.0, |v| v.abs().max(1.0)), float(diff), float(tol));
    r.note("plan_action", ext(rep.plan_action));
    r.note("dyadic_action", ext(rep.dyadic_action));
    r.file("plan.csv", paths);
    Ok(r)
}

/// Duality gap of a Kantorovich potential and its transform.
pub fn duality(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let q = exponent(cfg)?;
    let mu = load_measure(&cfg.transport.mu, "transport.mu", space.len())?;
    let nu = load_measure(&cfg.transport.nu, "transport.nu", space.len())?;
    let f = match &cfg.transport.potential {
        Some(p) => {
            let vals = lorentzlab::io::parse_function(&read(p)?, space.len()).ctx(p.display().to_string())?;
            vals.into_iter().map(|v| v.unwrap_or(lorentzlab::ExtReal::NegInf)).collect()
        }
        None if cfg.calculus.function.is_some() => load_function(cfg, space.len())?.into_iter().map(|v| v.unwrap_or(lorentzlab::ExtReal::NegInf)).collect(),
        None => {
            // the distance potential towards the target of a Dirac ν
            let Some(o) = nu.is_dirac() else {
                return Err(CliError::Usage("missing setting `transport.potential` (required unless ν is a Dirac mass)".into()));
            };
            KantorovichPotential::towards(&space, o, q).ctx("potential")?.values
        }
    };
    let pot = KantorovichPotential::new(f, q).ctx("potential")?;
    let g = duality_gap(&space, &mu, &nu, &pot).ctx("duality")?;
    let fc = pot.transform(&space, None).ctx("transform")?;
    let mut csv = Csv::new(&["point", "f", "transform"]);
    for (i, (a, b)) in pot.values.iter().zip(&fc).enumerate() {
        csv.row(vec![i.to_string(), ext(*a), ext(*b)]);
    }
    let tol = cfg.tol();
    let mut r = Report::default();
    let gap = g.gap.finite();
    r.check("weak_duality", gap.is_some_and(|v| v >= -tol) || g.gap == lorentzlab::ExtReal::PosInf, ext(g.gap), float(tol));
    r.check("strong_duality", gap.is_some_and(|v| v.abs() <= tol), ext(g.gap), float(tol));
    r.note("dual", ext(g.dual));
    r.note("primal", ext(g.primal));
    r.file("potential.csv", csv);
    Ok(r)
}
