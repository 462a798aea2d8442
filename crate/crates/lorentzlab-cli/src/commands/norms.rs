use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lorentzlab::norms::{sample_triangle_inequalities, signature_diagnostic, Signature};
use lorentzlab::{DualityParams, ExtReal, HyperbolicNorm};

use crate::config::Config;
use crate::error::{CliError, CliResult, Context};
use crate::output::{ext, float, Csv, Report};

fn signature(s: Signature) -> &'static str {
    match s {
        Signature::PositiveDefinite => "positive_definite",
        Signature::Lorentzian => "lorentzian",
        Signature::Other => "other",
    }
}

/// Parallelogram search and Fenchel–Young checks for a hyperbolic norm; with
/// `metric`, the eigenvalue signature against sampled triangle inequalities.
pub fn norms(cfg: &Config) -> CliResult<Report> {
    let s = &cfg.hyperbolic_norms;
    let dim = s.dim.unwrap_or(3);
    let samples = s.samples.unwrap_or(2000);
    let tol = cfg.tol();
    let (norm, minkowski) = match s.family.as_deref().unwrap_or("minkowski") {
        "minkowski" => (HyperbolicNorm::minkowski(dim).ctx("norm")?, true),
        "lp" => (HyperbolicNorm::lp(s.p.unwrap_or(3.0), dim).ctx("norm")?, false),
        f => return Err(CliError::Usage(format!("hyperbolic_norms.family must be `minkowski` or `lp`, got `{f}`"))),
    };
    let mut r = Report::default();
    let (defect, x, y) = norm.search_parallelogram_defect(samples, cfg.seed());
    if minkowski {
        r.check("parallelogram_defect", defect <= tol, float(defect), float(tol));
    } else {
        r.check("parallelogram_defect_nonzero", defect > tol, float(defect), float(tol));
    }
    let mut csv = Csv::new(&["kind", "value", "x", "y"]);
    let join = |v: &[f64]| v.iter().map(|c| float(*c)).collect::<Vec<_>>().join(" ");
    csv.row(vec!["parallelogram".into(), float(defect), join(&x), join(&y)]);

    if minkowski {
        let params = DualityParams::from_q(cfg.q().unwrap_or(0.5)).ctx("exponents")?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed().wrapping_add(1));
        let mut min_gap = ExtReal::PosInf;
        let mut legendre = 0.0f64;
        for _ in 0..samples {
            let v = norm.random_future_vector(&mut rng);
            let w = norm.random_future_vector(&mut rng);
            let zeta = norm.flat(&w).ctx("flat")?;
            min_gap = min_gap.min(norm.fenchel_young_gap(params, &v, &zeta).ctx("Fenchel–Young gap")?);
            let partner = norm.legendre_covector(params, &v).ctx("Legendre partner")?;
            let g = norm.fenchel_young_gap(params, &v, &partner).ctx("Fenchel–Young gap")?;
            legendre = legendre.max(g.to_f64().abs() / (1.0 + norm.lagrangian(params, &v).ctx("Lagrangian")?.to_f64().abs()));
        }
        r.check("fenchel_young_min_gap", min_gap >= ExtReal::Finite(-tol), ext(min_gap), float(-tol));
        r.check("legendre_gap", legendre <= tol, float(legendre), float(tol));
        csv.row(vec!["fenchel_young_min_gap".into(), ext(min_gap), String::new(), String::new()]);
        csv.row(vec!["legendre_gap".into(), float(legendre), String::new(), String::new()]);
    }

    if let Some(rows) = &s.metric {
        let eig = signature_diagnostic(rows).ctx("metric")?;
        let sampled = sample_triangle_inequalities(rows, samples, cfg.seed()).ctx("metric")?;
        r.check("signature_agrees", eig == sampled.implied(), format!("{} / {}", signature(eig), signature(sampled.implied())), "");
        csv.row(vec!["signature".into(), signature(eig).into(), String::new(), String::new()]);
    }
    r.file("norms.csv", csv);
    Ok(r)
}
