//! `lorentzlab`: run verification checks from TOML configurations.

mod batch;
mod commands;
mod config;
mod error;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toml::{Table, Value};

use config::{from_table, merge, read_table, Config, OUT_ENV};
use error::{CliError, CliResult};

/// Default output directory when neither flag, environment nor config set one.
const DEFAULT_OUT: &str = "lorentzlab-out";

#[derive(Parser)]
#[command(name = "lorentzlab", version, about = "Discrete Lorentzian transport and curvature checks")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory (overrides the config file and LORENTZLAB_OUT).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Do not print the PASS/FAIL lines.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

/// Flags overriding the most common config keys; `--set` reaches any key.
#[derive(Args, Clone, Debug, Default)]
struct Overrides {
    /// Spacetime file (`core_spacetime.file`).
    #[arg(long)]
    space: Option<PathBuf>,
    /// Source measure file (`transport.mu`).
    #[arg(long)]
    mu: Option<PathBuf>,
    /// Target measure file (`transport.nu`).
    #[arg(long)]
    nu: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    /// Interpolation times, comma separated.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
    /// Curvature bound `K`.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Dimension bound `N`.
    #[arg(long)]
    n: Option<f64>,
    /// Target point index (`curvature.target`).
    #[arg(long)]
    target: Option<usize>,
    /// Function file (`calculus.function`).
    #[arg(long)]
    function: Option<PathBuf>,
    /// Steepness constant (`calculus.steepness`).
    #[arg(long)]
    steepness: Option<f64>,
    /// Any config key, as `section.key=value` with a TOML value.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a finite causal space.
    Validate(Overrides),
    /// Solve the ℓ_q transport problem between two measures.
    Lq(Overrides),
    /// Build intermediate measures from an optimal coupling.
    Interpolate(Overrides),
    /// Lift a geodesic of measures to a plan on paths.
    Lift(Overrides),
    /// Primal/dual comparison with a Kantorovich potential.
    Duality(Overrides),
    /// Build a good geodesic and check entropy convexity.
    GoodGeodesic(Overrides),
    /// Check the timelike measure contraction property.
    TmcpCheck(Overrides),
    /// Tabulate distortion coefficients against finite differences.
    Distortion(Overrides),
    /// Causal speed of a sampled path.
    CurveSpeed(Overrides),
    /// Forward, backward and steepness slopes of a function.
    Slopes(Overrides),
    /// Extremal steep extensions of a partial function.
    Mcshane(Overrides),
    /// Null distance of a time function.
    NullDist(Overrides),
    /// Weak-form d'Alembert comparison on Minkowski space.
    Dalembert(Overrides),
    /// Slope of the Kantorovich potential against ℓ^{q−1}.
    Brenier(Overrides),
    /// Parallelogram and Fenchel–Young checks for hyperbolic norms.
    Norms(Overrides),
    /// Run every entry of a batch manifest.
    Batch {
        manifest: PathBuf,
        /// Number of entries run concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

impl Command {
    fn split(&self) -> Option<(&'static str, &Overrides)> {
        use Command::*;
        Some(match self {
            Validate(o) => ("validate", o),
            Lq(o) => ("lq", o),
            Interpolate(o) => ("interpolate", o),
            Lift(o) => ("lift", o),
            Duality(o) => ("duality", o),
            GoodGeodesic(o) => ("good-geodesic", o),
            TmcpCheck(o) => ("tmcp-check", o),
            Distortion(o) => ("distortion", o),
            CurveSpeed(o) => ("curve-speed", o),
            Slopes(o) => ("slopes", o),
            Mcshane(o) => ("mcshane", o),
            NullDist(o) => ("null-dist", o),
            Dalembert(o) => ("dalembert", o),
            Brenier(o) => ("brenier", o),
            Norms(o) => ("norms", o),
            Batch { .. } => return None,
        })
    }
}

fn set(table: &mut Table, dotted: &str, value: Value) -> CliResult<()> {
    let mut t = table;
    let mut parts: Vec<&str> = dotted.split('.').collect();
    let last = parts.pop().unwrap_or_default();
    for p in parts {
        t = t
            .entry(p)
            .or_insert_with(|| Value::Table(Table::new()))
            .as_table_mut()
            .ok_or_else(|| CliError::Usage(format!("override `{dotted}`: `{p}` is not a table")))?;
    }
    t.insert(last.to_string(), value);
    Ok(())
}

fn path_value(p: &Path) -> Value {
    Value::String(p.to_string_lossy().into_owned())
}

/// Parses `value` as a TOML value, falling back to a bare string.
fn toml_value(value: &str) -> Value {
    format!("v = {value}").parse::<Table>().ok().and_then(|mut t| t.remove("v")).unwrap_or_else(|| Value::String(value.to_string()))
}

fn override_table(command: &str, o: &Overrides) -> CliResult<Table> {
    let mut t = Table::new();
    let curvature_t = matches!(command, "good-geodesic" | "tmcp-check");
    for (key, v) in [
        ("core_spacetime.file", o.space.as_deref().map(path_value)),
        ("transport.mu", o.mu.as_deref().map(path_value)),
        ("transport.nu", o.nu.as_deref().map(path_value)),
        ("transport.q", o.q.map(Value::Float)),
        ("transport.p", o.p.map(Value::Float)),
        (
            if curvature_t { "curvature.t" } else { "transport.t" },
            o.t.as_ref().map(|t| Value::Array(t.iter().map(|&x| Value::Float(x)).collect())),
        ),
        ("curvature.k", o.k.map(Value::Float)),
        ("curvature.n", o.n.map(Value::Float)),
        ("curvature.target", o.target.map(|i| Value::Integer(i as i64))),
        ("calculus.function", o.function.as_deref().map(path_value)),
        ("calculus.steepness", o.steepness.map(Value::Float)),
    ] {
        if let Some(v) = v {
            set(&mut t, key, v)?;
        }
    }
    for s in &o.set {
        let (k, v) = s.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{s}`")))?;
        if k.split('.').any(str::is_empty) {
            return Err(CliError::Usage(format!("--set key `{k}` is malformed")));
        }
        set(&mut t, k.trim(), toml_value(v.trim()))?;
    }
    Ok(t)
}

/// Global flags shared by single runs and batches.
pub struct Globals {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Globals {
    /// Applies `--seed`/`--tol` and the output-directory precedence
    /// `--out` > `LORENTZLAB_OUT` > config.
    pub fn apply(&self, table: &mut Table) {
        if let Some(s) = self.seed {
            table.insert("seed".into(), Value::Integer(s as i64));
        }
        if let Some(t) = self.tol {
            table.insert("tol".into(), Value::Float(t));
        }
        let out = self.out.clone().or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from));
        if let Some(o) = out {
            table.insert("out".into(), path_value(&o));
        }
    }
}

fn single(cli: &Cli, command: &str, o: &Overrides) -> CliResult<u8> {
    let mut table = match &cli.config {
        Some(p) => read_table(p)?,
        None => Table::new(),
    };
    merge(&mut table, override_table(command, o)?);
    Globals { seed: cli.seed, tol: cli.tol, out: cli.out.clone() }.apply(&mut table);
    let origin = cli.config.clone().unwrap_or_else(|| PathBuf::from("<command line>"));
    let cfg: Config = from_table(table, &origin)?;
    let report = commands::run(command, &cfg)?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    report.write(&dir)?;
    if !cli.quiet {
        print!("{}", report.render());
        if let Some(w) = &report.precondition {
            println!("PRECONDITION {w}");
        }
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Batch { manifest, jobs } => {
            batch::run(manifest, *jobs, &Globals { seed: cli.seed, tol: cli.tol, out: cli.out.clone() }, cli.quiet)
        }
        c => {
            let (name, o) = c.split().expect("non-batch command");
            single(&cli, name, o)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
