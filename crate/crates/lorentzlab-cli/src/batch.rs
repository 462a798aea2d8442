//! Batch manifests: many configurations run into separate output directories.
//!
//! ```toml
//! jobs = 4             # optional; `--jobs` wins when above 1
//! out = "results"      # base directory, entry `name` becomes a subdirectory
//!
//! [[entry]]
//! name = "lq-dirac"
//! config = "lq.toml"   # optional base configuration
//! command = "lq"       # may also come from the configuration
//! [entry.transport]    # inline sections overlay the configuration
//! q = -1.0
//! ```

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use toml::{Table, Value};

use crate::commands;
use crate::config::{from_table, merge, read_table, rebase_paths, Config};
use crate::error::{CliError, CliResult};
use crate::output::{Csv, Report};
use crate::Globals;

const DEFAULT_BATCH_OUT: &str = "lorentzlab-batch";

struct Entry {
    name: String,
    command: String,
    cfg: Config,
    out: PathBuf,
}

struct Outcome {
    code: u8,
    result: CliResult<Report>,
}

fn bad(path: &Path, msg: String) -> CliError {
    CliError::Config { path: path.into(), msg }
}

fn load(manifest: &Path, globals: &Globals) -> CliResult<(Vec<Entry>, Option<usize>, PathBuf)> {
    let mut top = read_table(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let jobs = match top.remove("jobs") {
        None => None,
        Some(Value::Integer(j)) if j >= 1 => Some(j as usize),
        Some(v) => return Err(bad(manifest, format!("`jobs` must be a positive integer, got {v}"))),
    };
    let mut out_table = Table::new();
    if let Some(o) = top.remove("out") {
        out_table.insert("out".into(), o);
    }
    Globals { seed: None, tol: None, out: globals.out.clone() }.apply(&mut out_table);
    let root = out_table.get("out").and_then(Value::as_str).map_or_else(|| PathBuf::from(DEFAULT_BATCH_OUT), PathBuf::from);
    let entries = match top.remove("entry") {
        None => Vec::new(),
        Some(Value::Array(a)) => a,
        Some(_) => return Err(bad(manifest, "`entry` must be an array of tables ([[entry]])".into())),
    };
    if let Some(k) = top.keys().next() {
        return Err(bad(manifest, format!("unknown manifest key `{k}`")));
    }
    let mut out = Vec::with_capacity(entries.len());
    for (i, e) in entries.into_iter().enumerate() {
        let Value::Table(mut e) = e else { return Err(bad(manifest, format!("entry {i} is not a table"))) };
        let name = match e.remove("name") {
            Some(Value::String(s)) if !s.is_empty() && !s.contains(['/', '\\']) && s != "." && s != ".." => s,
            Some(v) => return Err(bad(manifest, format!("entry {i}: `name` must be a plain directory name, got {v}"))),
            None => return Err(bad(manifest, format!("entry {i}: missing `name`"))),
        };
        let (mut table, origin) = match e.remove("config") {
            Some(Value::String(c)) => {
                let p = base.join(c);
                (read_table(&p)?, p)
            }
            Some(v) => return Err(bad(manifest, format!("entry `{name}`: `config` must be a path, got {v}"))),
            None => (Table::new(), manifest.to_path_buf()),
        };
        // Inline paths are relative to the manifest.
        rebase_paths(&mut e, base);
        merge(&mut table, e);
        let own_out = table.contains_key("out");
        Globals { seed: globals.seed, tol: globals.tol, out: None }.apply(&mut table);
        let cfg = from_table(table, &origin)?;
        let command = cfg.command.clone().ok_or_else(|| bad(manifest, format!("entry `{name}`: no `command` in the entry or its config")))?;
        if !commands::COMMANDS.contains(&command.as_str()) {
            return Err(bad(manifest, format!("entry `{name}`: unknown command `{command}`")));
        }
        let dir = if own_out { cfg.out.clone().expect("out present") } else { root.join(&name) };
        out.push(Entry { name, command, cfg, out: dir });
    }
    let mut seen: HashMap<PathBuf, &str> = HashMap::new();
    for e in &out {
        let key = normalize(&e.out);
        if let Some(prev) = seen.insert(key, &e.name) {
            return Err(bad(manifest, format!("entries `{prev}` and `{}` both write to {}", e.name, e.out.display())));
        }
    }
    Ok((out, jobs, root))
}

/// Lexical normalization so `a/./b` and `a/b` collide.
fn normalize(p: &Path) -> PathBuf {
    let mut out = PathBuf::new();
    for c in p.components() {
        match c {
            std::path::Component::CurDir => {}
            std::path::Component::ParentDir => {
                if !out.pop() {
                    out.push("..");
                }
            }
            c => out.push(c),
        }
    }
    out
}

fn execute(e: &Entry) -> Outcome {
    let result = commands::run(&e.command, &e.cfg).and_then(|r| r.write(&e.out).map(|_| r));
    let code = match &result {
        Ok(r) => r.exit_code(),
        Err(err) => err.exit_code(),
    };
    Outcome { code, result }
}

/// Runs a manifest and returns the worst entry exit status (0 when empty).
pub fn run(manifest: &Path, jobs: usize, globals: &Globals, quiet: bool) -> CliResult<u8> {
    let (entries, manifest_jobs, root) = load(manifest, globals)?;
    let workers = if jobs > 1 { jobs } else { manifest_jobs.unwrap_or(1) }.clamp(1, entries.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Outcome>>> = entries.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(e) = entries.get(i) else { break };
                *slots[i].lock().expect("slot") = Some(execute(e));
            });
        }
    });
    let mut csv = Csv::new(&["entry", "command", "exit", "item", "pass", "value", "tol"]);
    let mut worst = 0u8;
    for (e, slot) in entries.iter().zip(slots) {
        let o = slot.into_inner().expect("slot").expect("every entry ran");
        worst = worst.max(o.code);
        let row = |item: &str, pass: bool, value: &str, tol: &str| {
            vec![e.name.clone(), e.command.clone(), o.code.to_string(), item.to_string(), pass.to_string(), value.to_string(), tol.to_string()]
        };
        match &o.result {
            Ok(r) => {
                for i in &r.items {
                    csv.row(row(&i.item, i.pass, &i.value, &i.tol));
                }
                if let Some(w) = &r.precondition {
                    csv.row(row("precondition", false, w, ""));
                }
            }
            Err(err) => csv.row(row("error", false, &err.to_string(), "")),
        }
        if !quiet {
            let status = if o.code == 0 { "PASS" } else { "FAIL" };
            match &o.result {
                Err(err) => println!("{status} {} [{}] exit {}: {err}", e.name, e.command, o.code),
                Ok(_) => println!("{status} {} [{}] exit {}", e.name, e.command, o.code),
            }
        }
    }
    std::fs::create_dir_all(&root).map_err(|e| CliError::io(&root, e))?;
    let path = root.join("batch_summary.csv");
    std::fs::write(&path, csv.text()).map_err(|e| CliError::io(&path, e))?;
    Ok(worst)
}
