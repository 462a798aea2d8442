//! One function per subcommand, each turning a [`Config`] into a [`Report`].

mod calculus;
mod curvature;
mod curves;
mod norms;
mod spacetime;
mod transport;

use std::fs;
use std::path::Path;

use lorentzlab::io::{parse_function, parse_measure, parse_spacetime};
use lorentzlab::spacetime::{GeneratorFamily, GeneratorSpec};
use lorentzlab::transport::DiscreteMeasure;
use lorentzlab::{DiscreteSpacetime, ExtReal};

use crate::config::Config;
use crate::error::{CliError, CliResult, Context};
use crate::output::Report;

pub const COMMANDS: [&str; 15] = [
    "validate",
    "lq",
    "interpolate",
    "lift",
    "duality",
    "good-geodesic",
    "tmcp-check",
    "distortion",
    "curve-speed",
    "slopes",
    "mcshane",
    "null-dist",
    "dalembert",
    "brenier",
    "norms",
];

pub fn run(command: &str, cfg: &Config) -> CliResult<Report> {
    match command {
        "validate" => spacetime::validate(cfg),
        "lq" => transport::lq(cfg),
        "interpolate" => transport::interpolate(cfg),
        "lift" => transport::lift(cfg),
        "duality" => transport::duality(cfg),
        "good-geodesic" => curvature::good_geodesic(cfg),
        "tmcp-check" => curvature::tmcp_check(cfg),
        "distortion" => curvature::distortion(cfg),
        "curve-speed" => curves::curve_speed(cfg),
        "slopes" => calculus::slopes(cfg),
        "mcshane" => calculus::mcshane(cfg),
        "null-dist" => calculus::null_dist(cfg),
        "dalembert" => calculus::dalembert(cfg),
        "brenier" => calculus::brenier(cfg),
        "norms" => norms::norms(cfg),
        other => Err(CliError::Usage(format!("unknown command `{other}`; expected one of {}", COMMANDS.join(", ")))),
    }
}

/// A required setting, with a hint naming the config key.
pub(crate) fn need<T: Clone>(v: &Option<T>, key: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("missing setting `{key}` (config file or command-line flag)")))
}

pub(crate) fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn load_space(cfg: &Config) -> CliResult<DiscreteSpacetime> {
    let s = &cfg.core_spacetime;
    if let Some(file) = &s.file {
        return parse_spacetime(&read(file)?).ctx(file.display().to_string());
    }
    let Some(generator) = &s.generator else {
        return Err(CliError::Usage("missing setting `core_spacetime.file` or `core_spacetime.generator`".into()));
    };
    let family = match generator.as_str() {
        "minkowski" => GeneratorFamily::Minkowski,
        "hyperbolic_lp" => GeneratorFamily::HyperbolicLp(need(&s.p, "core_spacetime.p")?),
        g => return Err(CliError::Usage(format!("unknown generator `{g}`; expected minkowski or hyperbolic_lp"))),
    };
    let extent = need(&s.extent, "core_spacetime.extent")?.into_iter().map(|[a, b]| (a, b)).collect();
    let spec = GeneratorSpec { family, extent, resolution: need(&s.resolution, "core_spacetime.resolution")? };
    DiscreteSpacetime::from_generator(&spec).ctx("spacetime generator")
}

pub(crate) fn load_measure(path: &Option<std::path::PathBuf>, key: &str, n: usize) -> CliResult<DiscreteMeasure> {
    let p = need(path, key)?;
    parse_measure(&read(&p)?, n).ctx(p.display().to_string())
}

pub(crate) fn load_function(cfg: &Config, n: usize) -> CliResult<Vec<Option<ExtReal>>> {
    let p = need(&cfg.calculus.function, "calculus.function")?;
    parse_function(&read(&p)?, n).ctx(p.display().to_string())
}

/// A function defined at every point.
pub(crate) fn total_function(cfg: &Config, n: usize) -> CliResult<Vec<ExtReal>> {
    let f = load_function(cfg, n)?;
    match f.iter().position(Option::is_none) {
        Some(i) => Err(CliError::Usage(format!("function file leaves point {i} undefined; every point needs a value"))),
        None => Ok(f.into_iter().map(Option::unwrap).collect()),
    }
}

/// `curvature.target`, or the grid cell nearest to `curvature.target_coords`.
pub(crate) fn target(cfg: &Config, space: &DiscreteSpacetime) -> CliResult<usize> {
    if let Some(t) = cfg.curvature.target {
        space.check_point(t).ctx("curvature.target")?;
        return Ok(t);
    }
    let c = need(&cfg.curvature.target_coords, "curvature.target")?;
    let g = space.grid().ok_or_else(|| CliError::Usage("curvature.target_coords needs a grid spacetime".into()))?;
    g.nearest(&c).ok_or_else(|| CliError::Usage(format!("target coordinates {c:?} lie outside the grid")))
}

pub(crate) fn list(v: &[f64]) -> String {
    v.iter().map(|x| crate::output::float(*x)).collect::<Vec<_>>().join(" ")
}
