use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stderr: String,
    dir: TempDir,
}

impl Run {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.path(name)).unwrap_or_else(|e| panic!("{name}: {e}\n{}", self.stderr))
    }

    /// Header and data rows of a CSV output.
    fn csv(&self, name: &str) -> (Vec<String>, Vec<Vec<String>>) {
        let text = self.read(name);
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header = r.headers().unwrap().iter().map(String::from).collect();
        let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
        (header, rows)
    }

    fn meta(&self, command: &str) -> Value {
        serde_json::from_str(&self.read(&format!("{command}.meta.json"))).unwrap()
    }
}

fn run_with(args: &[&str], config: Option<&str>, env: &[(&str, &str)]) -> Run {
    let dir = TempDir::new().unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dicke-stark"));
    cmd.args(args).arg("--out").arg(dir.path()).env_remove("DICKE_STARK_THREADS");
    if let Some(text) = config {
        let p = dir.path().join("run.conf");
        fs::write(&p, text).unwrap();
        cmd.arg("--config").arg(p);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    Run { code: out.status.code().unwrap_or(-1), stderr: String::from_utf8_lossy(&out.stderr).into_owned(), dir }
}

fn run(args: &[&str], config: Option<&str>) -> Run {
    run_with(args, config, &[])
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name} in {header:?}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: `{s}`"))
}

#[test]
fn phase_diagram_default_boundary() {
    let r = run(&["phase-diagram"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = r.csv("phase_boundary.csv");
    let (iu, it) = (col(&h, "u_over_wc"), col(&h, "g_t_over_wc"));
    for (u, g_t) in [(0.0, 0.433), (0.0168, 0.330), (0.03, 0.217)] {
        let row = rows.iter().find(|x| num(&x[iu]) == u).unwrap();
        assert!((num(&row[it]) - g_t).abs() <= 0.005);
    }
    let (_, grid) = r.csv("phase_grid.csv");
    assert_eq!(grid.len(), rows.len() * 121);
}

#[test]
fn metadata_only_before_header() {
    let r = run(&["order-parameter"], Some("g_points = 11\n"));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = r.read("order_parameter.csv");
    let first_data = text.lines().position(|l| !l.starts_with('#')).unwrap();
    assert!(text.lines().skip(first_data).all(|l| !l.starts_with('#')));
    assert!(text.lines().any(|l| l == "# g_points = 11"));
    assert_eq!(text.lines().nth(first_data).unwrap(), "u_over_wc,g_over_wc,phase,beta,energy_over_wc");
}

#[test]
fn identical_config_gives_identical_bytes() {
    let cfg = "g_points = 41\n";
    let a = run(&["squeezing"], Some(cfg));
    let b = run(&["squeezing", "--threads", "1"], Some(cfg));
    assert_eq!((a.code, b.code), (0, 0));
    assert_eq!(fs::read(a.path("squeezing.csv")).unwrap(), fs::read(b.path("squeezing.csv")).unwrap());
}

fn json_rows(path: &Path) -> (Vec<String>, Vec<Vec<Value>>) {
    let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let cols = v["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect();
    let rows = v["rows"].as_array().unwrap().iter().map(|r| r.as_array().unwrap().clone()).collect();
    (cols, rows)
}

fn same_numbers(csv_rows: &[Vec<String>], json: &[Vec<Value>]) {
    assert_eq!(csv_rows.len(), json.len());
    for (a, b) in csv_rows.iter().zip(json) {
        for (x, y) in a.iter().zip(b) {
            match y {
                Value::Null => assert_eq!(x, ""),
                Value::String(s) => assert_eq!(x, s),
                Value::Number(n) => assert_eq!(num(x).to_bits(), n.as_f64().unwrap().to_bits()),
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    for (cmd, table) in [("phase-diagram", "phase_boundary"), ("ion", "ion_map"), ("collapse", "collapse")] {
        let c = run(&[cmd], None);
        let j = run(&[cmd, "--format", "json"], None);
        assert_eq!((c.code, j.code), (0, 0), "{cmd}: {}{}", c.stderr, j.stderr);
        let (h, rows) = c.csv(&format!("{table}.csv"));
        let (jh, jrows) = json_rows(&j.path(&format!("{table}.json")));
        assert_eq!(h, jh);
        same_numbers(&rows, &jrows);
    }
}

#[test]
fn unknown_key_is_a_config_error_with_line() {
    let r = run(&["phase-diagram"], Some("# comment\nn_spins = 50\nomega_q = 0.015\n"));
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3") && r.stderr.contains("omega_q"), "{}", r.stderr);
}

#[test]
fn degenerate_configs_are_rejected() {
    for (cmd, cfg) in [
        ("phase-diagram", "g_points = 0\n"),
        ("order-parameter", "g_min_over_wc = 0.3\ng_max_over_wc = 0.1\n"),
        ("landscape", "n_spins = 0\n"),
        ("squeezing", "u_over_wc = -1\n"),
        ("ed", "sweep = omega\n"),
        ("collapse", "cutoffs = 100, 50\n"),
        ("ion", "eta = 0.5\n"),
        ("verify", "denominators = none\n"),
        ("verify", "dt_ms = 1\n"),
    ] {
        let r = run(&[cmd], Some(cfg));
        assert_eq!(r.code, 2, "{cmd} with `{}`: {}", cfg.trim(), r.stderr);
        assert!(r.stderr.contains("config error at line"), "{}", r.stderr);
    }
    assert_eq!(run(&["phase-diagram", "--format", "xml"], None).code, 2);
    assert_eq!(run(&["phase-diagram", "--config", "/nonexistent/x.conf"], None).code, 2);
}

#[test]
fn solver_failure_exits_with_numerical_code() {
    let r = run(&["ed"], Some("sweep_points = 1\nn_max = 40\nlanczos_max_iter = 3\n"));
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("did not converge"), "{}", r.stderr);
}

#[test]
fn ed_sweep_along_g() {
    let r = run(&["ed"], Some("sweep = g\nsweep_min_over_wc = 0.1\nsweep_max_over_wc = 0.2\nsweep_points = 3\nn_max = 30\n"));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = r.csv("ed.csv");
    let n = col(&h, "mean_n");
    assert_eq!(rows.len(), 3);
    assert!(rows.windows(2).all(|w| num(&w[1][n]) > num(&w[0][n])));
}

#[test]
fn thread_flag_beats_environment() {
    let env = [("DICKE_STARK_THREADS", "3")];
    let from_env = run_with(&["landscape"], None, &env);
    let from_flag = run_with(&["landscape", "--threads", "2"], None, &env);
    assert_eq!(from_env.meta("landscape")["threads"], 3);
    assert_eq!(from_flag.meta("landscape")["threads"], 2);
    assert_eq!(from_flag.meta("landscape")["seed"], 0);
}

#[test]
fn collapse_default_verdicts() {
    let r = run(&["collapse"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = r.csv("collapse.csv");
    let (ig, iv) = (col(&h, "g_over_wc"), col(&h, "verdict"));
    for row in &rows {
        let expect = if num(&row[ig]) < 0.5 { "converged" } else { "diverging" };
        assert_eq!(row[iv], expect);
    }
}

#[test]
fn ion_default_and_infeasible_inverse() {
    let r = run(&["ion"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, rows) = r.csv("ion_map.csv");
    let get = |name: &str| rows.iter().find(|x| x[0] == name).unwrap()[1].clone();
    assert!((num(&get("g")) - 0.3331).abs() < 1e-3);
    assert!(num(&get("round_trip_max_rel_error")) < 1e-12);
    let (_, diags) = r.csv("ion_diagnostics.csv");
    assert!(diags.iter().all(|d| d[3] == "pass"));

    let r = run(&["ion"], Some("max_rabi_2pi_khz = 150\n"));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, rows) = r.csv("ion_map.csv");
    assert_eq!(rows.iter().find(|x| x[0] == "inverse").unwrap()[2], "infeasible:Omega_r");
}

#[test]
fn verify_short_run_with_exact_denominators() {
    let r = run(&["verify"], Some("denominators = exact\nn_max = 12\nsamples = 20\n"));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (h, rows) = r.csv("verify_summary.csv");
    assert!(num(&rows[0][col(&h, "fidelity")]) >= 0.99);
    let (_, samples) = r.csv("verify_samples.csv");
    assert_eq!(samples.len(), 21);
}

#[test]
fn defaults_subcommand_prints_config() {
    let out = Command::new(env!("CARGO_BIN_EXE_dicke-stark")).args(["defaults", "phase-diagram"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("omega_q_over_wc = 0.015") && text.contains("n_spins = 50"));
}
