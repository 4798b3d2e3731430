use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use vr3c_cli::scenario_file::{self, ScenarioFile};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn vr3c(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vr3c"))
        .args(args)
        .env_remove("VR3C_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = vr3c(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn worked() -> String {
    fixture("worked.toml").to_string_lossy().into_owned()
}

fn zipf_small() -> String {
    fixture("zipf_small.toml").to_string_lossy().into_owned()
}

/// Compares against a committed golden; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "golden {name} differs");
}

fn write_variant(dir: &Path, name: &str, from: &str, to: &str) -> String {
    let text = fs::read_to_string(fixture("worked.toml")).unwrap();
    assert!(text.contains(from));
    let path = dir.join(name);
    fs::write(&path, text.replace(from, to)).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn worked_instance_report() {
    let report = stdout_of(&["solve-symmetric", &worked()]);
    assert!(report.contains("R* = 7.76315789e7 bit/s"), "{report}");
    assert!(report.contains("d* = 2, c* = 1"));
    assert!(report.contains("regime = ENERGY_LIMITED_UNCACHED"));
    assert!(report.contains("gain from local computing = 2.63157895e6 bit/s"));
    assert!(report.contains("gain from caching = 2.50000000e7 bit/s"));
}

#[test]
fn zero_energy_offloads_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_variant(
        dir.path(),
        "e0.toml",
        "energy_budget = 5.0",
        "energy_budget = 0.0",
    );
    let report = stdout_of(&["solve-symmetric", &f]);
    assert!(report.contains("d* = 0, R* = R0"), "{report}");
    assert!(report.contains("R* = 1.05263158e8 bit/s"));
}

#[test]
fn slow_server_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_variant(
        dir.path(),
        "tight.toml",
        "deadline = 0.02",
        "deadline = 0.0009",
    );
    let out = vr3c(&["solve-symmetric", &f]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("InfeasibleServerCompute"));
}

#[test]
fn schema_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("schema_version = 1", "schema_version = 9", "schema_version"),
        ("cycles_per_bit = 100.0\n", "", "cycles_per_bit"),
        ("count = 4", "count = 4\ncolour = 1", "colour"),
        (
            "output_bits = 2e6",
            "output_bits = -2e6",
            "symmetric.output_bits",
        ),
        (
            "server_freq = 1e11",
            "server_freq = 0.0",
            "config.server_freq",
        ),
    ];
    for (i, (from, to, field)) in cases.into_iter().enumerate() {
        let f = write_variant(dir.path(), &format!("bad{i}.toml"), from, to);
        let out = vr3c(&["solve-symmetric", &f]);
        assert_eq!(code(&out), 2, "{field}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{field}: {err}");
    }
    let out = vr3c(&["solve-symmetric", "/nonexistent/x.toml"]);
    assert_eq!(code(&out), 2);
    let out = vr3c(&["solve-symmetric", &zipf_small()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn mca_prints_both_rows_and_never_loses_to_ga() {
    let csv = stdout_of(&[
        "solve-hetero",
        &zipf_small(),
        "--method",
        "mca",
        "--format",
        "csv",
    ]);
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][0], rows[1][0]), ("GA", "MCA"));
    let ga: f64 = rows[0][1].parse().unwrap();
    let mca: f64 = rows[1][1].parse().unwrap();
    assert!(mca <= ga);
    let report = stdout_of(&["solve-hetero", &zipf_small(), "--method", "mca"]);
    assert!(report.contains("GA: R* = ") && report.contains("MCA: R* = "));
}

#[test]
fn oracle_refuses_large_instances() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("n20.toml");
    let f = f.to_str().unwrap();
    stdout_of(&["gen-scenario", "--count", "20", "--stanza", "--out", f]);
    let out = vr3c(&["solve-hetero", f, "--method", "oracle"]);
    assert_eq!(code(&out), 4);
    let out = vr3c(&["solve-hetero", &zipf_small(), "--method", "oracle"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn sweep_marks_device_below_f_min() {
    // f_min = I w / tau = 5e9
    let csv = stdout_of(&[
        "sweep",
        &worked(),
        "--axis",
        "device-freq",
        "--grid",
        "3e9,5e9,7e9,1e10",
    ]);
    let labels: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(labels[..2], ["NOT_LOCALLY_COMPUTABLE"; 2]);
    assert!(labels[2..].iter().all(|l| *l != "NOT_LOCALLY_COMPUTABLE"));
}

#[test]
fn surface_corners() {
    let csv = stdout_of(&[
        "sweep",
        &worked(),
        "--axis",
        "energy-fraction",
        "--grid",
        "0:1:5",
        "--axis",
        "cache-fraction",
        "--grid",
        "0:1:5",
    ]);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(
        rows[0],
        "energy_fraction,cache_fraction,min_rate,regime,gain_fraction,energy_used,cache_used"
    );
    assert_eq!(rows.len(), 26);
    assert!(rows[1].starts_with("0.00000000e0,0.00000000e0,1.05263158e8,"));
    assert!(rows[25].starts_with("1.00000000e0,1.00000000e0,0.00000000e0,"));
    let widths: Vec<usize> = rows.iter().map(|r| r.split(',').count()).collect();
    assert!(widths.iter().all(|&w| w == 7));
}

#[test]
fn bad_sweep_arguments() {
    for args in [
        vec!["--axis", "speed", "--grid", "0,1"],
        vec!["--axis", "energy", "--grid", "0:1"],
        vec!["--axis", "energy", "--grid", "1,0"],
        vec![
            "--axis",
            "energy",
            "--grid",
            "0,1",
            "--axis",
            "energy-fraction",
        ],
        vec!["--axis", "cache-fraction", "--grid", "-1,0"],
    ] {
        let mut full = vec!["sweep", "--out", "/dev/null"];
        let w = worked();
        full.push(&w);
        full.extend(args.iter().copied());
        assert_eq!(code(&vr3c(&full)), 2, "{args:?}");
    }
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_vr3c"))
        .args(["sweep", &worked(), "--axis", "energy", "--grid", "0:10:3"])
        .env("VR3C_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = fs::read_to_string(dir.path().join("worked-sweep.csv")).unwrap();
    assert!(written.starts_with("energy,min_rate,regime,"));
    // reports still go to stdout
    let out = Command::new(env!("CARGO_BIN_EXE_vr3c"))
        .args(["solve-symmetric", &worked()])
        .env("VR3C_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("R* = "));
}

#[test]
fn generated_uniform_scenario_parses_back() {
    let text = stdout_of(&[
        "gen-scenario",
        "--count",
        "3",
        "--exponent",
        "0",
        "--seed",
        "5",
    ]);
    let file = ScenarioFile::parse(&text).unwrap();
    assert_eq!(file.to_toml(), text);
    let s = file.resolve(Path::new(".")).unwrap();
    for t in s.tasks() {
        assert!((t.probability - 1.0 / 3.0).abs() < 1e-15);
    }
    // resolved scenario serializes back to the same bytes
    assert_eq!(ScenarioFile::from_heterogeneous(&s).to_toml(), text);
    let again = stdout_of(&[
        "gen-scenario",
        "--count",
        "3",
        "--exponent",
        "0",
        "--seed",
        "5",
    ]);
    assert_eq!(text, again);
    let other = stdout_of(&[
        "gen-scenario",
        "--count",
        "3",
        "--exponent",
        "0",
        "--seed",
        "6",
    ]);
    assert_ne!(text, other);
}

#[test]
fn generator_rejects_bad_ranges() {
    for args in [
        vec!["--count", "0"],
        vec!["--count", "3", "--input-bits-min", "3e7"],
        vec!["--count", "3", "--exponent", "-1"],
        vec!["--count", "3", "--deadline", "0"],
        vec!["--count", "3", "--energy-fraction", "-0.5"],
    ] {
        let mut full = vec!["gen-scenario"];
        full.extend(args.iter().copied());
        assert_eq!(code(&vr3c(&full)), 2, "{args:?}");
    }
}

#[test]
fn large_generated_scenario_solves_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let toml = dir.path().join("big.toml");
    let csv = dir.path().join("big.csv");
    stdout_of(&[
        "gen-scenario",
        "--count",
        "60000",
        "--exponent",
        "0.8",
        "--input-bits-min",
        "15e6",
        "--input-bits-max",
        "25e6",
        "--seed",
        "3",
        "--viewpoints-csv",
        csv.to_str().unwrap(),
        "--out",
        toml.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&toml).unwrap();
    assert!(text.contains("viewpoints_csv = \"big.csv\""), "{text}");
    assert_eq!(
        scenario_file::read_viewpoints_csv(&csv).unwrap().len(),
        60_000
    );
    let report = stdout_of(&["solve-hetero", toml.to_str().unwrap()]);
    assert!(report.contains("N = 60000") && report.contains("GA: R* = "));
}

#[test]
fn csv_table_and_inline_rows_agree() {
    let dir = tempfile::tempdir().unwrap();
    let inline = dir.path().join("inline.toml");
    let split = dir.path().join("split.toml");
    let common = ["gen-scenario", "--count", "9", "--seed", "11"];
    let mut a = common.to_vec();
    a.extend(["--out", inline.to_str().unwrap()]);
    stdout_of(&a);
    let csv = dir.path().join("rows.csv");
    let mut b = common.to_vec();
    b.extend([
        "--out",
        split.to_str().unwrap(),
        "--viewpoints-csv",
        csv.to_str().unwrap(),
    ]);
    stdout_of(&b);
    let x = scenario_file::load(&inline, None).unwrap().scenario;
    let y = scenario_file::load(&split, None).unwrap().scenario;
    assert_eq!(x, y);
}

#[test]
fn commands_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let gen_out = dir.path().join("g.toml");
    let runs: Vec<Vec<String>> = vec![
        vec![
            "solve-symmetric".into(),
            worked(),
            "--format".into(),
            "csv".into(),
        ],
        vec!["solve-symmetric".into(), worked()],
        vec![
            "solve-hetero".into(),
            zipf_small(),
            "--format".into(),
            "csv".into(),
        ],
        vec![
            "solve-hetero".into(),
            zipf_small(),
            "--method".into(),
            "mca".into(),
        ],
        vec![
            "solve-hetero".into(),
            zipf_small(),
            "--method".into(),
            "oracle".into(),
        ],
        vec![
            "sweep".into(),
            zipf_small(),
            "--axis".into(),
            "cache-fraction".into(),
            "--grid".into(),
            "0:1:9".into(),
        ],
        vec![
            "gen-scenario".into(),
            "--count".into(),
            "50".into(),
            "--seed".into(),
            "2".into(),
        ],
    ];
    for args in runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(stdout_of(&args), stdout_of(&args), "{args:?}");
    }
    let f = gen_out.to_str().unwrap();
    stdout_of(&["gen-scenario", "--count", "5", "--seed", "4", "--out", f]);
    let first = fs::read(f).unwrap();
    stdout_of(&["gen-scenario", "--count", "5", "--seed", "4", "--out", f]);
    assert_eq!(first, fs::read(f).unwrap());
}

#[test]
fn seed_flag_overrides_stanza() {
    let a = stdout_of(&["solve-hetero", &zipf_small(), "--format", "csv"]);
    let b = stdout_of(&[
        "solve-hetero",
        &zipf_small(),
        "--format",
        "csv",
        "--seed",
        "7",
    ]);
    let c = stdout_of(&[
        "solve-hetero",
        &zipf_small(),
        "--format",
        "csv",
        "--seed",
        "8",
    ]);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn goldens() {
    check_golden(
        "worked_solve.csv",
        &stdout_of(&["solve-symmetric", &worked(), "--format", "csv"]),
    );
    check_golden(
        "worked_surface.csv",
        &stdout_of(&[
            "sweep",
            &worked(),
            "--axis",
            "energy-fraction",
            "--grid",
            "0:1:5",
            "--axis",
            "cache-fraction",
            "--grid",
            "0:1:5",
        ]),
    );
    check_golden(
        "zipf_small_mca.csv",
        &stdout_of(&[
            "solve-hetero",
            &zipf_small(),
            "--method",
            "mca",
            "--format",
            "csv",
        ]),
    );
    check_golden(
        "zipf_small_sweep.csv",
        &stdout_of(&[
            "sweep",
            &zipf_small(),
            "--axis",
            "cache-fraction",
            "--grid",
            "0:1:11",
        ]),
    );
}
