use std::fs;
use std::path::{Path, PathBuf};

use piezoscan::cli::{self, output};

const SCANNER_A: &str = include_str!("../examples/configs/scanner_a.cfg");

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Outcome {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv = std::iter::once("piezoscan").chain(args.iter().copied());
    let code = cli::run(argv, &mut stdout, &mut stderr);
    Outcome {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing in {line:?}"))
        .parse()
        .unwrap()
}

#[test]
fn model_summary_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", SCANNER_A);
    let out = dir.path().join("model.csv");
    let r = run(&["model", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.is_empty());

    let line = r.stdout.trim();
    assert!(line.starts_with("phi_deg=0.53"), "{line}");
    assert!((field(line, "phi_deg") - 0.5319742417).abs() < 1e-8);
    assert!((field(line, "y_max_um") - 2.285130753).abs() < 1e-8);
    assert!((field(line, "F_uN") - 43.95282353).abs() < 1e-6);

    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(output::MODEL_HEADER));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row.len(), 6);
    assert!((row[2] - 359.420290).abs() < 1e-5);
    assert!(row[3] < 0.0, "signed force");
    assert!((row[5] - 9.29782829e-11).abs() < 1e-19);
    assert!(lines.next().is_none());
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
}

#[test]
fn five_sample_profile() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", SCANNER_A);
    let out = dir.path().join("p.csv");
    let r = run(&["profile", "--config", s(&cfg), "--samples", "5", "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);

    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(output::PROFILE_HEADER));
    let rows: Vec<(String, String)> = lines
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.to_string(), y.to_string())
        })
        .collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0], ("0".to_string(), "0".to_string()));
    assert_eq!(rows[2], ("1000".to_string(), "0".to_string()));
    assert_eq!(rows[4], ("2000".to_string(), "0".to_string()));
    let y1: f64 = rows[1].1.parse().unwrap();
    let y3: f64 = rows[3].1.parse().unwrap();
    assert_eq!(y1, -y3);
    assert!(y1 != 0.0);
}

#[test]
fn csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", SCANNER_A);
    let mut outputs = Vec::new();
    for i in 0..2 {
        let p = dir.path().join(format!("p{i}.csv"));
        let sw = dir.path().join(format!("s{i}.csv"));
        assert_eq!(run(&["profile", "--config", s(&cfg), "--samples", "201", "--out", s(&p)]).code, 0);
        let args = [
            "sweep", "--config", s(&cfg), "--axis", "mirror_side", "--from", "100e-6", "--to", "1500e-6",
            "--steps", "15", "--out", s(&sw),
        ];
        assert_eq!(run(&args).code, 0);
        outputs.push((fs::read(&p).unwrap(), fs::read(&sw).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn sweep_csv_and_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", SCANNER_A);
    let out = dir.path().join("sweep.csv");
    let r = run(&[
        "sweep", "--config", s(&cfg), "--axis", "mirror_side", "--from", "100e-6", "--to", "1500e-6",
        "--steps", "8", "--out", s(&out), "--optimize", "tilt",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(output::SWEEP_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    assert!(rows[0].starts_with("mirror_side,0.0001,"));
    assert!(rows.iter().all(|row| row.ends_with(",ok")));

    // tilt peaks where the mirror side is 2 L1 / sqrt(3)
    let best = r.stdout.lines().find(|l| l.starts_with("best ")).unwrap();
    let value: f64 = best
        .split_whitespace()
        .nth(1)
        .and_then(|kv| kv.strip_prefix("mirror_side="))
        .unwrap()
        .parse()
        .unwrap();
    let expected = 2.0 * 850e-6 / 3f64.sqrt();
    assert!((value - expected).abs() < 1e-4 * 1400e-6, "{value} vs {expected}");
}

#[test]
fn table1_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let r = run(&["table1", "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let csv = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for (row, (len, tilt)) in rows.iter().zip([("0.00085", 0.57), ("0.0006", 0.48), ("0.0005", 0.42)]) {
        assert_eq!(row[0], "beam_length");
        assert_eq!(row[1], len);
        let phi: f64 = row[2].parse().unwrap();
        assert!((phi - tilt).abs() / tilt < 0.15);
        assert_eq!(row[6], "ok");
    }
    assert_eq!(r.stdout.lines().count(), 3);

    // same answer when the base design comes from a config file
    let cfg = write_config(dir.path(), "a.cfg", SCANNER_A);
    let out2 = dir.path().join("t2.csv");
    assert_eq!(run(&["table1", "--out", s(&out2), "--config", s(&cfg)]).code, 0);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&out2).unwrap());
}

#[test]
fn verify_passes() {
    let r = run(&["verify"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.lines().filter(|l| !l.starts_with("assume")).all(|l| l.starts_with("ok")));
}

#[test]
fn verify_on_a_coarse_grid_breaches_tolerance() {
    let r = run(&["verify", "--nodes", "11"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("verify:"), "{}", r.stderr);
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");

    let missing = dir.path().join("nope.cfg");
    let r = run(&["model", "--config", s(&missing), "--out", s(&out)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("config:"));

    let bad = write_config(dir.path(), "bad.cfg", &SCANNER_A.replace("voltage_V = 50", "voltage_V = fifty"));
    let r = run(&["model", "--config", s(&bad), "--out", s(&out)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("config:") && r.stderr.contains("line 16"), "{}", r.stderr);

    let unknown = write_config(dir.path(), "u.cfg", &SCANNER_A.replace("pzt-5h", "unobtainium"));
    let r = run(&["model", "--config", s(&unknown), "--out", s(&out)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("unobtainium"));

    assert!(!out.exists(), "failed runs must not leave output behind");

    let cfg = write_config(dir.path(), "a.cfg", SCANNER_A);
    let r = run(&[
        "sweep", "--config", s(&cfg), "--axis", "colour", "--from", "1", "--to", "2", "--steps", "3", "--out",
        s(&out),
    ]);
    assert_eq!(r.code, 1);
    let r = run(&[
        "sweep", "--config", s(&cfg), "--axis", "voltage", "--from", "1", "--to", "2", "--steps", "1", "--out",
        s(&out),
    ]);
    assert_eq!(r.code, 1);
    assert_eq!(run(&["frobnicate"]).code, 1);
    assert_eq!(run(&["profile", "--config", s(&cfg)]).code, 1);
    assert!(!out.exists());
}

#[test]
fn unwritable_output_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", SCANNER_A);
    let out = dir.path().join("no/such/dir/p.csv");
    let r = run(&["profile", "--config", s(&cfg), "--samples", "5", "--out", s(&out)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("config: cannot write"));
}

#[test]
fn negative_voltage_sweep_accepts_negative_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", SCANNER_A);
    let out = dir.path().join("v.csv");
    let r = run(&[
        "sweep", "--config", s(&cfg), "--axis", "voltage", "--from", "-50", "--to", "50", "--steps", "3", "--out",
        s(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let csv = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[1][2], "0");
    assert_eq!(rows[0][2], rows[2][2], "tilt magnitude is even in V");
    assert_eq!(rows[0][4].trim_start_matches('-'), rows[2][4].trim_start_matches('-'));
}

#[test]
fn readme_config_block_parses() {
    let readme = include_str!("../../../README.md");
    let block = readme
        .split("```ini\n")
        .nth(1)
        .and_then(|rest| rest.split("```").next())
        .expect("ini block in README");
    let design = cli::parse_config(block)
        .unwrap()
        .resolve(&piezoscan::MaterialRegistry::builtin())
        .unwrap();
    assert_eq!(design, piezoscan::ScannerDesign::reference(850e-6));
}
