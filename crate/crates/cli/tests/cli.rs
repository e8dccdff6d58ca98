use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use tailindex_cli::table::read_coverage;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tailindex"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn unit(r: &mut ChaCha20Rng) -> f64 {
    1.0 - r.random::<f64>()
}

fn pareto_csv(n: usize, alpha: f64, censor: Option<f64>, seed: u64) -> String {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    let mut s = String::from(if censor.is_some() { "value,status\n" } else { "value\n" });
    for _ in 0..n {
        let x = unit(&mut r).powf(-1.0 / alpha);
        match censor {
            Some(b) => {
                let y = unit(&mut r).powf(-1.0 / b);
                s += &format!("{},{}\n", x.min(y), u8::from(x <= y));
            }
            None => s += &format!("{x}\n"),
        }
    }
    s
}

/// Rows of a CSV block as field vectors, header excluded.
fn rows(block: &str) -> Vec<Vec<String>> {
    block
        .lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn estimate_reports_toy_point_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let e = std::f64::consts::E;
    let input = write(dir.path(), "toy.csv", &format!("value,status\n1,1\n{e},1\n{e},1\n{e},1\n"));
    let out = run(&["estimate", "--input", input.to_str().unwrap(), "--k", "3", "--level", "0.95"]);
    let text = stdout(&out);
    let mut blocks = text.split("\n\n");
    let stats = blocks.next().unwrap();
    assert!(stats.starts_with("n,k,threshold,p_hat,hill,censored_hill,mpe_jeffrey,map_jeffrey,mpe_cl,map_cl,ml\n"));
    let r = &rows(stats)[0];
    assert_eq!(r[4].parse::<f64>().unwrap(), 1.0);
    assert_eq!(r[6].parse::<f64>().unwrap(), 1.0);
    assert!((r[7].parse::<f64>().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    // constant excesses leave the tilting methods without an interior solution
    let intervals = rows(blocks.next().unwrap());
    assert!(intervals.iter().any(|r| r[0] == "EL" && r[5] == "degenerate_hull"));
    assert!(intervals.iter().any(|r| r[0] == "ML" && r[5] == "ok"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("EL:"));
}

#[test]
fn missing_status_column_enables_cl2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.csv", &pareto_csv(300, 1.0, None, 1));
    let out = run(&["estimate", "--input", input.to_str().unwrap(), "--k", "40"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("CL2,0.95,") && l.ends_with(",ok")));
}

#[test]
fn cl2_on_censored_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.csv", &pareto_csv(300, 1.0, Some(1.0), 2));
    let out = run(&["estimate", "--input", input.to_str().unwrap(), "--k", "40", "--methods", "EL,CL2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn threshold_tie_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "t.csv", "value\n1\n2\n2\n3\n5\n");
    let out = run(&["estimate", "--input", input.to_str().unwrap(), "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tied at the threshold"));
}

#[test]
fn nonpositive_values_are_rejected_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.csv", "value,status\n1.5,1\n0,1\n3,0\n");
    let out = run(&["estimate", "--input", input.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn sweep_single_k_gives_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.csv", &pareto_csv(400, 1.0, Some(1.0), 3));
    let out = run(&["sweep", "--input", input.to_str().unwrap(), "--k-min", "50", "--k-max", "50", "--methods", "EL"]);
    let text = stdout(&out);
    assert!(text.starts_with("k,method,alpha_hat,lower,upper,length,p_hat,status\n"));
    assert_eq!(rows(&text).len(), 1);
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[test]
fn censored_sweep_lengths_shrink_with_k() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.csv", &pareto_csv(2000, 1.0, Some(2.0), 4));
    let out = run(&[
        "sweep",
        "--input",
        input.to_str().unwrap(),
        "--k-min",
        "30",
        "--k-max",
        "300",
        "--methods",
        "EL,BCL,B,ML",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let all = rows(&stdout(&out));
    for m in ["EL", "BCL", "B", "ML"] {
        let len: Vec<f64> = all.iter().filter(|r| r[1] == m && r[7] == "ok").map(|r| r[5].parse().unwrap()).collect();
        assert!(len.len() > 250, "{m}");
        let q = len.len() / 4;
        assert!(mean(&len[len.len() - q..]) < mean(&len[..q]), "{m}");
    }
}

#[test]
fn complete_sweep_tilting_region_tracks_normal_length() {
    // Both lengths behave like 2 z α̂ / √k; the tilting region carries an extra
    // factor of about (s/H)(1 + z²/k), s the spread of the log-excesses.
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.csv", &pareto_csv(500, 1.0, None, 5));
    let out = run(&["sweep", "--input", input.to_str().unwrap(), "--k-min", "15", "--k-max", "115", "--methods", "CL2,NORMAL"]);
    let all = rows(&stdout(&out));
    let length = |m: &str| -> Vec<f64> { all.iter().filter(|r| r[1] == m).map(|r| r[5].parse().unwrap()).collect() };
    let (cl, normal) = (length("CL2"), length("NORMAL"));
    assert_eq!(cl.len(), 101);
    let mut ratio: Vec<f64> = cl.iter().zip(&normal).map(|(a, b)| a / b).collect();
    ratio.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = ratio[ratio.len() / 2];
    assert!((0.9..1.3).contains(&median), "median ratio {median}");
    assert!(ratio[ratio.len() - 1] < 2.0);
}

#[test]
fn ks_header_and_null_behavior() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.csv", &pareto_csv(1000, 1.5, None, 6));
    let out = run(&["ks", "--input", input.to_str().unwrap(), "--k-min", "10", "--k-max", "400"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("k,stat,reject"));
    let r = rows(&text);
    let rejected = r.iter().filter(|r| r[2] == "true").count();
    assert!(rejected * 5 < r.len(), "{rejected} of {}", r.len());
}

#[test]
fn ks_rejects_light_tails_at_large_k() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = ChaCha20Rng::seed_from_u64(7);
    let mut text = String::from("value\n");
    for _ in 0..1000 {
        // Box-Muller, shifted well away from zero
        let (u, v) = (unit(&mut r), unit(&mut r));
        let z = (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos();
        text += &format!("{}\n", 10.0 + z);
    }
    let input = write(dir.path(), "normal.csv", &text);
    let out = run(&["ks", "--input", input.to_str().unwrap(), "--k-min", "300", "--k-max", "500"]);
    let r = rows(&stdout(&out));
    assert!(r.iter().all(|r| r[2] == "true"));
}

const SMOKE: &str = r#"
n = 1000
m = 10
target_family = "gpd"
target_index = 1.25
censor_family = "frechet"
censor_indices = [0.1, 1.0]
k_min = 20
k_max = 100
methods = ["EL", "BCL", "B", "ML"]
seed = 11
"#;

#[test]
fn simulate_smoke_is_fast_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "smoke.toml", SMOKE);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let start = Instant::now();
    let out = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]);
    assert!(start.elapsed().as_secs_f64() < 10.0, "{:?}", start.elapsed());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let summary = std::fs::read_to_string(dir.path().join("a.optimal.csv")).unwrap();
    let (_, best) = read_coverage(summary.as_bytes()).unwrap();
    assert_eq!(best.len(), 8);

    let text = std::fs::read_to_string(&a).unwrap();
    let (meta, table) = read_coverage(text.as_bytes()).unwrap();
    assert!(meta.iter().any(|(k, v)| k == "seed" && v == "11"));
    assert!(meta.iter().any(|(k, v)| k == "config_sha256" && v.len() == 64));
    assert!(meta.iter().any(|(k, _)| k == "rng"));
    assert_eq!(table.len(), 2 * 4 * 81);

    let other = run(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "12"]);
    assert_ne!(stdout(&other).split_once("beta").unwrap().1, text.split_once("beta").unwrap().1);
}

#[test]
fn coverage_csv_round_trips_the_in_memory_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write(dir.path(), "smoke.toml", SMOKE);
    let loaded = tailindex_cli::config::parse_config(SMOKE).unwrap();
    let mut expected = Vec::new();
    for study in loaded.file.studies(11, None).unwrap() {
        expected.extend(tailindex::coverage_experiment(&study).unwrap());
    }
    let out = run(&["simulate", "--config", cfg_path.to_str().unwrap(), "--summary", dir.path().join("s.csv").to_str().unwrap()]);
    let (_, table) = read_coverage(out.stdout.as_slice()).unwrap();
    assert_eq!(table.len(), expected.len());
    for (a, b) in table.iter().zip(&expected) {
        assert_eq!((a.beta, a.method, a.k, a.failures), (b.beta, b.method, b.k, b.failures));
        assert_eq!(a.coverage.to_bits(), b.coverage.to_bits());
        assert_eq!(a.avg_length.to_bits(), b.avg_length.to_bits());
        assert_eq!(a.p_bar.to_bits(), b.p_bar.to_bits());
    }
}

#[test]
fn invalid_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", &SMOKE.replace("m = 10", "m = \"ten\""));
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m"));
    let cfg = write(dir.path(), "bad2.toml", &SMOKE.replace("k_max = 100", "k_max = 1000"));
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k range"));
}
