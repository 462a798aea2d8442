//! Run configuration: a TOML file with one table per library module.
//!
//! ```toml
//! seed = 42
//! tol = 1e-9
//! out = "results"
//!
//! [core_spacetime]
//! file = "space.txt"          # or: generator = "minkowski" | "hyperbolic_lp",
//!                             #     p, extent = [[lo, hi], …], resolution = […]
//! [transport]
//! q = 0.5                     # p may be given instead; both must be conjugate
//! mu = "mu.txt"
//! nu = "nu.txt"
//! t = [0.25, 0.5, 0.75]
//! ```
//!
//! Relative paths are resolved against the directory of the file that names
//! them. Command-line flags override file values; `LORENTZLAB_OUT` overrides
//! the output directory of the file but not `--out`.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::{Table, Value};

use crate::error::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const OUT_ENV: &str = "LORENTZLAB_OUT";

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Subcommand name; only read by batch manifests.
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub core_spacetime: SpacetimeSection,
    #[serde(default)]
    pub transport: TransportSection,
    #[serde(default)]
    pub curves: CurvesSection,
    #[serde(default)]
    pub curvature: CurvatureSection,
    #[serde(default)]
    pub calculus: CalculusSection,
    #[serde(default)]
    pub hyperbolic_norms: NormsSection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeSection {
    pub file: Option<PathBuf>,
    pub generator: Option<String>,
    pub p: Option<f64>,
    pub extent: Option<Vec<[f64; 2]>>,
    pub resolution: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Slice {
    pub t: f64,
    pub file: PathBuf,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportSection {
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub mu: Option<PathBuf>,
    pub nu: Option<PathBuf>,
    pub t: Option<Vec<f64>>,
    /// Admissible intermediate-point defect (default: unbounded).
    pub snap_tol: Option<f64>,
    pub potential: Option<PathBuf>,
    #[serde(default)]
    pub slices: Vec<Slice>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvesSection {
    pub path: Option<PathBuf>,
    pub strides: Option<Vec<usize>>,
    pub depth: Option<u32>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureSection {
    pub k: Option<f64>,
    pub n: Option<f64>,
    pub target: Option<usize>,
    /// Target given by coordinates; the nearest grid cell is used.
    pub target_coords: Option<Vec<f64>>,
    pub t: Option<Vec<f64>>,
    pub dimensions: Option<Vec<f64>>,
    pub direction: Option<String>,
    pub reduced: Option<bool>,
    pub lambda: Option<f64>,
    pub depth: Option<u32>,
    pub fibre_tol: Option<f64>,
    pub fibre_radius: Option<usize>,
    pub max_iter: Option<usize>,
    pub sweeps: Option<usize>,
    /// Distortion sweep grids.
    pub theta: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalculusSection {
    pub function: Option<PathBuf>,
    /// Steepness constant `L`.
    pub steepness: Option<f64>,
    pub schedule: Option<Vec<usize>>,
    pub source: Option<usize>,
    pub dim: Option<usize>,
    pub o: Option<Vec<f64>>,
    pub form: Option<String>,
    pub past: Option<bool>,
    pub centre: Option<Vec<f64>>,
    pub radius: Option<Vec<f64>>,
    pub amplitude: Option<f64>,
    pub resolutions: Option<Vec<usize>>,
    /// Tolerance on `|defect|/|rhs|` at the finest d'Alembert level.
    pub rel_tol: Option<f64>,
    pub mode: Option<String>,
    pub samples: Option<usize>,
    pub neighbours: Option<usize>,
    /// Grid Brenier tolerance is `grid_factor · h / ℓ_min`.
    pub grid_factor: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormsSection {
    pub family: Option<String>,
    pub dim: Option<usize>,
    pub p: Option<f64>,
    pub samples: Option<usize>,
    pub metric: Option<Vec<Vec<f64>>>,
}

/// Keys holding file paths, as `(table, key)`; `slices` is handled separately.
const PATH_KEYS: [(&str, &str); 7] = [
    ("core_spacetime", "file"),
    ("transport", "mu"),
    ("transport", "nu"),
    ("transport", "potential"),
    ("curves", "path"),
    ("calculus", "function"),
    ("", "out"),
];

fn rebase(value: &mut Value, base: &Path) {
    if let Value::String(s) = value {
        let p = Path::new(s.as_str());
        if p.is_relative() {
            *s = base.join(p).to_string_lossy().into_owned();
        }
    }
}

/// Rewrites relative paths of a parsed configuration table against `base`.
pub fn rebase_paths(table: &mut Table, base: &Path) {
    for (section, key) in PATH_KEYS {
        let t = if section.is_empty() { Some(&mut *table) } else { table.get_mut(section).and_then(Value::as_table_mut) };
        if let Some(v) = t.and_then(|t| t.get_mut(key)) {
            rebase(v, base);
        }
    }
    if let Some(slices) = table.get_mut("transport").and_then(|t| t.get_mut("slices")).and_then(Value::as_array_mut) {
        for s in slices {
            if let Some(v) = s.as_table_mut().and_then(|t| t.get_mut("file")) {
                rebase(v, base);
            }
        }
    }
}

/// Recursively overlays `top` onto `base`; tables merge, other values replace.
pub fn merge(base: &mut Table, top: Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(t)) => merge(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

pub fn read_table(path: &Path) -> CliResult<Table> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut table: Table = text.parse().map_err(|e: toml::de::Error| CliError::Config { path: path.into(), msg: e.to_string() })?;
    rebase_paths(&mut table, path.parent().unwrap_or(Path::new(".")));
    Ok(table)
}

pub fn from_table(table: Table, origin: &Path) -> CliResult<Config> {
    let cfg: Config = Value::Table(table).try_into().map_err(|e: toml::de::Error| CliError::Config { path: origin.into(), msg: e.to_string() })?;
    cfg.check(origin)?;
    Ok(cfg)
}

impl Config {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    /// Transport exponent `q`, from `q` or its conjugate `p`.
    pub fn q(&self) -> Option<f64> {
        self.transport.q.or(self.transport.p.map(|p| p / (p - 1.0)))
    }

    /// Gradient exponent `p` conjugate to `q`.
    pub fn p(&self) -> Option<f64> {
        self.transport.p.or(self.transport.q.map(|q| q / (q - 1.0)))
    }

    fn check(&self, origin: &Path) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config { path: origin.into(), msg });
        if let (Some(p), Some(q)) = (self.transport.p, self.transport.q) {
            if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
                return bad(format!("p = {p} and q = {q} are not conjugate (1/p + 1/q must be 1)"));
            }
        }
        if let Some(t) = self.tol {
            if !(t >= 0.0 && t.is_finite()) {
                return bad(format!("tol must be finite and nonnegative, got {t}"));
            }
        }
        Ok(())
    }
}
