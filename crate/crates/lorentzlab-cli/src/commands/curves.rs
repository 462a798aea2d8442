use lorentzlab::curves::{causal_speed, geodesic_check, length_ell, q_action, ActionMode, PathPoints};
use lorentzlab::io::parse_path;
use lorentzlab::{DiscreteSpacetime, HyperbolicNorm};

use super::{load_space, need, read};
use crate::config::Config;
use crate::error::{CliResult, Context};
use crate::output::{ext, float, time, Csv, Report};

/// Causal speed, `q`-action, `ℓ`-length and the geodesic criteria of a path.
/// Coordinate paths without a spacetime live in Minkowski space.
pub fn curve_speed(cfg: &Config) -> CliResult<Report> {
    let file = need(&cfg.curves.path, "curves.path")?;
    let path = parse_path(&read(&file)?).ctx(file.display().to_string())?;
    let space = match (&path.points(), cfg.core_spacetime.file.is_some() || cfg.core_spacetime.generator.is_some()) {
        (PathPoints::Coords(c), false) => DiscreteSpacetime::model_space(HyperbolicNorm::minkowski(c[0].len()).ctx("model space")?),
        _ => load_space(cfg)?,
    };
    let strides = cfg.curves.strides.clone().unwrap_or_else(|| vec![1, 2, 4]);
    let depth = cfg.curves.depth.unwrap_or(12);
    let q = cfg.q().unwrap_or(0.5);
    let tol = cfg.tol();
    let prof = causal_speed(&space, &path, &strides, tol).ctx("curve-speed")?;
    let times = path.times();
    let mut speed = Csv::new(&["interval", "t0", "t1", "abs_density", "singular_mass"]);
    for i in 0..prof.abs_density.len() {
        speed.row(vec![i.to_string(), float(times[i]), float(times[i + 1]), float(prof.abs_density[i]), float(prof.singular_mass[i])]);
    }
    let mut conv = Csv::new(&["stride", "partition_sum", "max_quotient"]);
    for &(s, sum, m) in &prof.convergence {
        conv.row(vec![s.to_string(), float(sum), float(m)]);
    }
    let action = q_action(&space, &path, q, ActionMode::PartitionInfimum, depth).ctx("q-action")?;
    let length = length_ell(&space, &path, depth).ctx("length")?;
    let geo = geodesic_check(&space, &path, q, tol).ctx("geodesic check")?;
    let mut r = Report::default();
    r.note("total_speed", time(prof.total));
    r.note("atoms", prof.atoms(times).len().to_string());
    r.note("length", float(length));
    r.check("action_below_bound", action.value <= action.bound, ext(action.value), ext(action.bound));
    r.note("geodesic_proportional", format!("{:?}", geo.proportional));
    r.note("geodesic_constant_speed", format!("{:?}", geo.constant_speed));
    r.note("geodesic_saturates_q", format!("{:?}", geo.saturates_q));
    r.check("geodesic_criteria_consistent", geo.consistent, geo.consistent.to_string(), float(tol));
    r.file("speed.csv", speed);
    r.file("convergence.csv", conv);
    Ok(r)
}
