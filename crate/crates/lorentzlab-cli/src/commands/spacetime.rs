use lorentzlab::spacetime::ValidationReport;

use super::load_space;
use crate::config::Config;
use crate::error::CliResult;
use crate::output::{float, time, Csv, Report};

/// Checks the axioms of the separation function and the derived relations.
pub fn validate(cfg: &Config) -> CliResult<Report> {
    let space = load_space(cfg)?;
    let tol = cfg.tol();
    let v: ValidationReport = space.validate(tol);
    let rel = space.relations();
    let mut r = Report::default();
    let mut csv = Csv::new(&["kind", "x", "y", "z", "detail"]);
    for &(x, y, z) in &v.reverse_triangle {
        let detail = format!("l(x,y)={} l(x,z)={} l(y,z)={}", time(space.ell(x, y)), time(space.ell(x, z)), time(space.ell(y, z)));
        csv.row(vec!["reverse_triangle".into(), x.to_string(), y.to_string(), z.to_string(), detail]);
    }
    for &x in &v.diagonal {
        csv.row(vec!["diagonal".into(), x.to_string(), x.to_string(), String::new(), "l(x,x)=-inf".into()]);
    }
    for &(x, y) in &v.antisymmetry {
        csv.row(vec!["antisymmetry".into(), x.to_string(), y.to_string(), String::new(), "related both ways".into()]);
    }
    let ft = float(tol);
    r.check("reverse_triangle_violations", v.reverse_triangle_count == 0, v.reverse_triangle_count.to_string(), ft.clone());
    r.check("diagonal_violations", v.diagonal.is_empty(), v.diagonal.len().to_string(), ft.clone());
    r.check("antisymmetry_violations", v.antisymmetry.is_empty(), v.antisymmetry.len().to_string(), ft.clone());
    let trans = rel.transitivity_witness();
    r.check("transitivity", trans.is_none(), trans.map_or("ok".into(), |w| format!("{w:?}")), "");
    let push = rel.push_up_witness();
    r.check("push_up", push.is_none(), push.map_or("ok".into(), |w| format!("{w:?}")), "");
    r.note("points", space.len().to_string());
    if let Some(&(x, y, z)) = v.reverse_triangle.first() {
        r.precondition = Some(format!(
            "reverse triangle inequality fails at (x, y, z) = ({x}, {y}, {z}): ℓ(x,z) = {} < ℓ(x,y) + ℓ(y,z) = {} + {}",
            time(space.ell(x, z)),
            time(space.ell(x, y)),
            time(space.ell(y, z))
        ));
    } else if let Some(&x) = v.diagonal.first() {
        r.precondition = Some(format!("ℓ({x}, {x}) = −∞"));
    } else if let Some(&(x, y)) = v.antisymmetry.first() {
        r.precondition = Some(format!("points {x} and {y} are causally related both ways"));
    }
    r.file("violations.csv", csv);
    Ok(r)
}
