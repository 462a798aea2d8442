use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("manifests/acceptance/data").join(name)
}

fn manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("manifests/acceptance/manifest.toml")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorentzlab")).args(args).env_remove("LORENTZLAB_OUT").output().expect("spawn lorentzlab")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Every file under `dir`, as sorted `(relative path, contents)`.
fn tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn reverse_triangle_violation_exits_3_with_witness() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["validate", "--space", s(&data("violation.txt")), "--out", s(tmp.path())]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let v = fs::read_to_string(tmp.path().join("violations.csv")).unwrap();
    assert!(v.lines().nth(1).unwrap().starts_with("reverse_triangle,0,1,2,"), "{v}");
    assert!(String::from_utf8_lossy(&o.stdout).contains("PRECONDITION"));
}

#[test]
fn dirac_pair_transport_equals_time_separation() {
    let tmp = TempDir::new().unwrap();
    let (space, mu, nu) = (data("chain.txt"), data("dirac_a.txt"), data("dirac_d.txt"));
    let o = run(&["lq", "--space", s(&space), "--mu", s(&mu), "--nu", s(&nu), "--q", "0.5", "-q", "--out", s(tmp.path())]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(tmp.path().join("lq.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].split(',').next().unwrap().parse::<f64>().unwrap(), 4.0);
}

#[test]
fn infeasible_transport_exits_1() {
    let tmp = TempDir::new().unwrap();
    let o = run(&["lq", "--space", s(&data("chain.txt")), "--mu", s(&data("dirac_d.txt")), "--nu", s(&data("dirac_a.txt")), "--q", "0.5", "--out", s(tmp.path())]);
    assert_eq!(code(&o), 1);
    assert!(fs::read_to_string(tmp.path().join("summary.csv")).unwrap().contains("causal_coupling_exists,false,NoCausalCoupling"));
}

#[test]
fn dalembert_passes_and_bad_support_is_a_precondition() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&run(&["dalembert", "--p", "-1", "--out", s(tmp.path())])), 0);
    let o = run(&["dalembert", "--set", "calculus.centre=[0.0, 0.0]", "--out", s(tmp.path())]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}

#[test]
fn input_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let out = s(tmp.path());
    assert_eq!(code(&run(&["lq", "--space", "/nonexistent/space.txt", "--q", "0.5", "--out", out])), 2);
    assert_eq!(code(&run(&["lq", "--q", "0.5", "--p", "0.5", "--out", out])), 2);
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "[transport]\nqq = 1\n").unwrap();
    assert_eq!(code(&run(&["lq", "--config", s(&cfg), "--out", out])), 2);
    assert_eq!(code(&run(&["null-dist", "--space", s(&data("chain.txt")), "--function", s(&data("partial.txt")), "--out", out])), 2);
}

#[test]
fn config_paths_are_relative_to_the_file_and_out_precedence_holds() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("run.toml");
    let dir = data("").display().to_string();
    fs::write(&cfg, format!("out = 'from-config'\n[core_spacetime]\nfile = '{dir}/chain.txt'\n[transport]\nq = 0.5\nmu = '{dir}/dirac_a.txt'\nnu = '{dir}/dirac_d.txt'\n")).unwrap();
    assert_eq!(code(&run(&["lq", "--config", s(&cfg), "-q"])), 0);
    assert!(tmp.path().join("from-config/lq.csv").exists());
    let env_out = tmp.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_lorentzlab")).args(["lq", "--config", s(&cfg), "-q"]).env("LORENTZLAB_OUT", &env_out).output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(env_out.join("lq.csv").exists());
    let flag_out = tmp.path().join("from-flag");
    let o = Command::new(env!("CARGO_BIN_EXE_lorentzlab"))
        .args(["lq", "--config", s(&cfg), "-q", "--out", s(&flag_out)])
        .env("LORENTZLAB_OUT", &env_out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(flag_out.join("lq.csv").exists());
}

#[test]
fn shipped_manifest_passes_and_reruns_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let o = run(&["batch", s(&manifest()), "--out", s(a.path()), "--jobs", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&run(&["batch", s(&manifest()), "--out", s(b.path()), "--jobs", "1", "-q"])), 0);
    let (ta, tb) = (tree(a.path()), tree(b.path()));
    assert!(ta.len() > 20);
    assert_eq!(ta, tb);
    let summary = fs::read_to_string(a.path().join("batch_summary.csv")).unwrap();
    assert!(summary.starts_with("entry,command,exit,item,pass,value,tol\n"));
    assert!(!summary.contains(",false,"));
}

#[test]
fn empty_manifest_writes_header_only() {
    let tmp = TempDir::new().unwrap();
    let m = tmp.path().join("empty.toml");
    fs::write(&m, "").unwrap();
    assert_eq!(code(&run(&["batch", s(&m), "--out", s(&tmp.path().join("out"))])), 0);
    assert_eq!(fs::read_to_string(tmp.path().join("out/batch_summary.csv")).unwrap(), "entry,command,exit,item,pass,value,tol\n");
}

#[test]
fn duplicate_outputs_are_rejected_before_running() {
    let tmp = TempDir::new().unwrap();
    let m = tmp.path().join("dup.toml");
    fs::write(&m, "[[entry]]\nname = 'a'\ncommand = 'dalembert'\nout = 'same'\n[[entry]]\nname = 'b'\ncommand = 'dalembert'\nout = './same'\n").unwrap();
    let o = run(&["batch", s(&m), "--out", s(&tmp.path().join("out"))]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("both write to"));
    assert!(!tmp.path().join("same").exists() && !tmp.path().join("out").exists());
}

#[test]
fn failing_entry_makes_batch_fail() {
    let tmp = TempDir::new().unwrap();
    let m = tmp.path().join("fail.toml");
    let dir = data("").display().to_string();
    fs::write(
        &m,
        format!("[[entry]]\nname = 'ok'\ncommand = 'dalembert'\n[[entry]]\nname = 'bad'\ncommand = 'validate'\ncore_spacetime = {{ file = '{dir}/violation.txt' }}\n"),
    )
    .unwrap();
    let o = run(&["batch", s(&m), "--out", s(&tmp.path().join("out")), "-q"]);
    assert_eq!(code(&o), 3);
    let summary = fs::read_to_string(tmp.path().join("out/batch_summary.csv")).unwrap();
    assert!(summary.contains("ok,dalembert,0,") && summary.contains("bad,validate,3,precondition,false"));
}
