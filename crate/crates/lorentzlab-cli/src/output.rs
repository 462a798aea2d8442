//! CSV artifacts and the per-run summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lorentzlab::{ExtReal, ExtendedTime};

use crate::error::{CliError, CliResult};

/// Seventeen significant digits, so every float survives a round trip.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn ext(x: ExtReal) -> String {
    match x {
        ExtReal::Finite(v) => float(v),
        ExtReal::PosInf => "inf".into(),
        ExtReal::NegInf => "-inf".into(),
    }
}

pub fn time(x: ExtendedTime) -> String {
    ext(x.value())
}

fn quote(s: String) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

#[derive(Debug)]
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { text: header.join(",") + "\n", columns: header.len() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns);
        let cells: Vec<String> = cells.into_iter().map(quote).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub item: String,
    pub pass: bool,
    pub value: String,
    pub tol: String,
}

/// Pass/fail lines of one run plus the CSV files it produced.
#[derive(Debug, Default)]
pub struct Report {
    pub items: Vec<Item>,
    pub files: Vec<(String, Csv)>,
    /// Witness of a violated input precondition; the run exits with status 3.
    pub precondition: Option<String>,
}

impl Report {
    pub fn check(&mut self, item: impl Into<String>, pass: bool, value: impl Into<String>, tol: impl Into<String>) {
        self.items.push(Item { item: item.into(), pass, value: value.into(), tol: tol.into() });
    }

    /// An informational line that always passes.
    pub fn note(&mut self, item: impl Into<String>, value: impl Into<String>) {
        self.check(item, true, value, "");
    }

    pub fn file(&mut self, name: &str, csv: Csv) {
        self.files.push((name.to_string(), csv));
    }

    pub fn passed(&self) -> bool {
        self.precondition.is_none() && self.items.iter().all(|i| i.pass)
    }

    pub fn exit_code(&self) -> u8 {
        match (&self.precondition, self.passed()) {
            (Some(_), _) => 3,
            (None, true) => 0,
            (None, false) => 1,
        }
    }

    pub fn summary_csv(&self) -> Csv {
        let mut c = Csv::new(&["item", "pass", "value", "tol"]);
        for i in &self.items {
            c.row(vec![i.item.clone(), i.pass.to_string(), i.value.clone(), i.tol.clone()]);
        }
        c
    }

    /// Writes every artifact and `summary.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let mut written = Vec::new();
        for (name, csv) in self.files.iter().map(|(n, c)| (n.as_str(), c)).chain(std::iter::once(("summary.csv", &self.summary_csv()))) {
            let path = dir.join(name);
            fs::write(&path, csv.text()).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for i in &self.items {
            let tol = if i.tol.is_empty() { String::new() } else { format!(" (tol {})", i.tol) };
            writeln!(s, "{} {} = {}{tol}", if i.pass { "PASS" } else { "FAIL" }, i.item, i.value).unwrap();
        }
        s
    }
}
