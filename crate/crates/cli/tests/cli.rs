use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn spinflux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinflux")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Rows of a CSV with a header, parsed to floats.
fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

fn column(csv: &str, k: usize) -> Vec<f64> {
    rows(csv).into_iter().map(|r| r[k]).collect()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const CHRISTANDL5: &[&str] = &["--n", "5", "--model", "xx", "--christandl", "1"];

#[test]
fn graph_of_the_engineered_chain_is_a_path() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.dot");
    let o = spinflux(&[&["graph", "--out", out.to_str().unwrap()], CHRISTANDL5].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("5 nodes"));
    let dot = fs::read_to_string(out).unwrap();
    assert!(dot.starts_with("digraph closure {"));
    for label in ["X5", "Y4 Z5", "X3 Z4 Z5", "Y2 Z3 Z4 Z5", "X1 Z2 Z3 Z4 Z5"] {
        assert!(dot.contains(&format!("[label=\"{label}\"]")), "{dot}");
    }
    assert_eq!(dot.matches("->").count(), 4);
}

#[test]
fn identity_seed_gives_one_node() {
    let o = spinflux(&[&["graph", "--seed", "I"], CHRISTANDL5].concat());
    assert!(o.status.success());
    assert!(stderr(&o).contains("1 node,"));
    assert_eq!(stdout(&o).matches("[label=").count(), 1);
}

#[test]
fn heisenberg_graph_node_count() {
    // the count is checked against a dense closure in the core crate's tests
    let o = spinflux(&["graph", "--n", "3", "--model", "heisenberg", "--couplings", "1,1"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("15 nodes"), "{}", stderr(&o));
}

#[test]
fn engineered_flux_peaks_at_transfer_time() {
    let o = spinflux(&[&["flux", "--grid", "0:pi/2:201"], CHRISTANDL5].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    assert!(csv.starts_with("t,flux\n"));
    let (t, f) = (column(&csv, 0), column(&csv, 1));
    assert_eq!(t.len(), 201);
    assert!((t[100] - PI / 4.0).abs() < 1e-15);
    assert!((f[100] - 1.0).abs() < 1e-9, "{}", f[100]);
    assert!(f.iter().all(|v| *v <= 1.0 + 1e-9));
}

#[test]
fn single_point_at_zero() {
    let o = spinflux(&[&["flux", "--grid", "0:0:1"], CHRISTANDL5].concat());
    assert_eq!(stdout(&o), "t,flux\n0.0,0.0\n");
    let o = spinflux(&["fidelity", "--n", "3", "--model", "xx", "--couplings", "1,1", "--grid", "0:1:1"]);
    assert_eq!(stdout(&o), "t,fidelity\n0.0,0.0\n");
}

#[test]
fn heisenberg_flux_stays_below_one() {
    let o = spinflux(&["flux", "--n", "3", "--model", "heisenberg", "--couplings", "1,1", "--grid", "0:3pi:600"]);
    let max = column(&stdout(&o), 1).into_iter().fold(f64::MIN, f64::max);
    assert!(max < 0.999 && max > 0.5, "{max}");
}

#[test]
fn three_site_fidelity_reaches_one() {
    let t_star = PI / (2.0 * 2f64.sqrt());
    let grid = format!("{t_star:?}:{t_star:?}:1");
    let o = spinflux(&["fidelity", "--n", "3", "--model", "xx", "--couplings", "1,1", "--grid", &grid]);
    assert!((column(&stdout(&o), 1)[0] - 1.0).abs() < 1e-9);
}

#[test]
fn compare_reports_magnitude_peaks() {
    let o = spinflux(&["compare", "--n", "3", "--model", "xx", "--couplings", "1,1", "--grid", "0:0.5*pi:201"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    assert!(csv.starts_with("t,flux,fidelity\n"));
    let r = rows(&csv);
    // t* = pi / (2 sqrt 2) is not on the grid; both peak at the nearest point
    let nearest = (0..r.len())
        .min_by(|&a, &b| (r[a][0] - PI / 8f64.sqrt()).abs().total_cmp(&(r[b][0] - PI / 8f64.sqrt()).abs()))
        .unwrap();
    assert!(r[nearest][1] < -0.99 && r[nearest][2] > 0.99);
    let summary = stderr(&o);
    assert!(summary.contains(&format!("index {nearest}, |flux|")), "{summary}");
    assert!(summary.contains("distance 0 grid steps"), "{summary}");

    let corrected = spinflux(&[
        "compare",
        "--n",
        "3",
        "--model",
        "xx",
        "--couplings",
        "1,1",
        "--grid",
        "0:0.5*pi:201",
        "--correction",
        "corrected",
    ]);
    assert!(rows(&stdout(&corrected))[nearest][1] > 0.99);
}

#[test]
fn compare_summary_matches_its_csv() {
    let o = spinflux(&["compare", "--n", "3", "--model", "heisenberg", "--couplings", "1,1", "--grid", "0:3pi:400"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    let first_max = |k: usize| (0..r.len()).fold(0, |best, i| if r[i][k].abs() > r[best][k].abs() { i } else { best });
    let (kf, kq) = (first_max(1), first_max(2));
    assert!(stderr(&o).contains(&format!("distance {} grid steps", kf.abs_diff(kq))), "{}", stderr(&o));
}

#[test]
fn compare_with_one_point() {
    let o = spinflux(&[&["compare", "--grid", "0.3:0.3:1"], CHRISTANDL5].concat());
    assert!(o.status.success());
    assert_eq!(rows(&stdout(&o)).len(), 1);
    assert!(stderr(&o).contains("distance 0 grid steps"));
}

#[test]
fn taylor_matches_exact() {
    let exact = spinflux(&[&["flux", "--grid", "0:pi/2:51"], CHRISTANDL5].concat());
    let series =
        spinflux(&[&["flux", "--grid", "0:pi/2:51", "--method", "taylor", "--cutoff", "60"], CHRISTANDL5].concat());
    for (a, b) in column(&stdout(&exact), 1).iter().zip(column(&stdout(&series), 1)) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn config_file_with_run_table_and_flag_override() {
    let dir = TempDir::new().unwrap();
    let chain = write(&dir, "chain.toml", "n = 3\nmodel = \"xx\"\ncouplings = [1.0, 1.0]\n");
    let out = dir.path().join("flux.csv");
    let run = format!(
        "chain = \"{}\"\n\n[run]\noutput_letter = \"Y\"\ngrid = \"0:1:5\"\nout = \"{}\"\n",
        Path::new(&chain).file_name().unwrap().to_str().unwrap(),
        out.file_name().unwrap().to_str().unwrap()
    );
    let cfg = write(&dir, "run.toml", &run);
    let o = spinflux(&["flux", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(rows(&fs::read_to_string(&out).unwrap()).len(), 5);
    // the flag wins over run.grid
    let o = spinflux(&["flux", "--config", &cfg, "--grid", "0:1:3"]);
    assert!(o.status.success());
    assert_eq!(rows(&fs::read_to_string(&out).unwrap()).len(), 3);
    // and over the chain file's couplings: halving J halves the clock
    let slow = spinflux(&["flux", "--config", &cfg, "--couplings", "0.5,0.5", "--grid", "0:2:5", "--out", "-"]);
    let fast = spinflux(&["flux", "--config", &cfg, "--grid", "0:1:5", "--out", "-"]);
    for (a, b) in column(&stdout(&slow), 1).iter().zip(column(&stdout(&fast), 1)) {
        assert!((a - b).abs() < 1e-12, "{a} {b}");
    }
    assert!(column(&stdout(&fast), 1)[4].abs() > 0.1);
}

#[test]
fn inline_chain_keys_in_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.toml", "n = 5\nmodel = \"xx\"\nchristandl = 1.0\n\n[run]\ngrid = \"pi/4:pi/4:1\"\n");
    let o = spinflux(&["flux", "--config", &cfg]);
    assert!((column(&stdout(&o), 1)[0] - 1.0).abs() < 1e-9);
}

#[test]
fn validation_errors_exit_one_without_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("never.csv");
    let out_s = out.to_str().unwrap();
    let cfg = write(&dir, "bad.toml", "n = 3\nmodel = \"xx\"\ncouplings = [1.0, 1.0]\n\n[run]\ngird = \"0:1:2\"\n");
    let o = spinflux(&["flux", "--config", &cfg, "--out", out_s]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 6"), "{}", stderr(&o));
    let o = spinflux(&[&["flux", "--out", out_s, "--grid", "0:1:2", "--output-site", "9"], CHRISTANDL5].concat());
    assert_eq!(o.status.code(), Some(1));
    let o = spinflux(&[&["flux", "--out", out_s, "--grid", "0:1:2", "--register", "01"], CHRISTANDL5].concat());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("register"));
    let o = spinflux(&[&["flux", "--out", out_s], CHRISTANDL5].concat());
    assert_eq!(o.status.code(), Some(1));
    let o = spinflux(&["flux", "--out", out_s, "--n", "3", "--model", "xx", "--couplings", "1", "--grid", "0:1:2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn computation_errors_exit_two_without_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("never.dot");
    let o = spinflux(&[
        "graph",
        "--n",
        "6",
        "--model",
        "heisenberg",
        "--couplings",
        "1,1,1,1,1",
        "--max-nodes",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("node budget of 8"), "{}", stderr(&o));
    assert!(!out.exists());
    let o = spinflux(&["fidelity", "--n", "13", "--model", "xx", "--christandl", "1", "--grid", "0:1:2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for path in [&a, &b] {
        let o = spinflux(&[
            "compare",
            "--n",
            "4",
            "--model",
            "heisenberg",
            "--couplings",
            "0.3,1.1,0.7",
            "--register",
            "0;0.6,0,0.8;1",
            "--grid",
            "0:5:97",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn csv_values_round_trip() {
    let o = spinflux(&[&["flux", "--grid", "0:1:7"], CHRISTANDL5].concat());
    for line in stdout(&o).lines().skip(1) {
        for field in line.split(',') {
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v:?}"), field);
        }
    }
}

#[test]
fn verify_list_and_exit_code() {
    let o = spinflux(&["verify", "--list"]);
    assert!(o.status.success());
    let ids: Vec<String> = stdout(&o).lines().map(|l| l.split(' ').next().unwrap().to_string()).collect();
    assert_eq!(&ids[..8], ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"]);

    let o = spinflux(&["verify"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with('[')).collect();
    assert_eq!(lines.len(), ids.len());
    let all_pass = lines.iter().all(|l| l.starts_with("[PASS]"));
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 3 }), "{text}");
}
