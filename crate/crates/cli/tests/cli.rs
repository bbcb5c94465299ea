use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_chaoscipher");
const KEY: &str = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("CHAOSCIPHER_KEY").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn last_stderr_line(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap().lines().last().unwrap_or("").to_owned()
}

fn write_pgm(path: &Path, w: usize, h: usize, px: impl Fn(usize) -> u8) {
    let mut data = format!("P5 {w} {h} 255\n").into_bytes();
    data.extend((0..w * h).map(px));
    fs::write(path, data).unwrap();
}

#[test]
fn keygen_prints_hex() {
    let o = run(&["keygen", "--bits", "256"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.trim_end().len(), 64);
    assert!(s.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase() || c == '\n'));
    assert_eq!(stdout(&run(&["keygen", "--bits", "128"])).trim_end().len(), 32);
}

#[test]
fn keygen_bad_length_is_usage_error() {
    assert_eq!(run(&["keygen", "--bits", "100"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn encrypt_decrypt_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("p.pgm");
    write_pgm(&plain, 40, 30, |i| (i % 200) as u8);
    let original = fs::read(&plain).unwrap();
    let enc = dir.path().join("e.pgm");
    let dec = dir.path().join("d.pgm");
    let o = run(&["encrypt", "-i", plain.to_str().unwrap(), "-o", enc.to_str().unwrap(), "--key", KEY]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(summary["width"], 40);
    assert_eq!(summary["mode"], "3d");
    assert_ne!(fs::read(&enc).unwrap(), original);

    let key_file = dir.path().join("key.txt");
    fs::write(&key_file, format!("{KEY}\n")).unwrap();
    let o = run(&["decrypt", "-i", enc.to_str().unwrap(), "-o", dec.to_str().unwrap(), "--key-file", key_file.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read(&dec).unwrap(), original);
}

#[test]
fn key_from_environment_and_conflicting_sources() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("p.pgm");
    write_pgm(&plain, 8, 8, |i| i as u8);
    let out = dir.path().join("o.pgm");
    let o = Command::new(BIN)
        .args(["encrypt", "-i", plain.to_str().unwrap(), "-o", out.to_str().unwrap(), "--mode", "2d"])
        .env("CHAOSCIPHER_KEY", KEY)
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = run(&["encrypt", "-i", plain.to_str().unwrap(), "-o", out.to_str().unwrap(), "--key", KEY, "--key-file", "k"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["encrypt", "-i", plain.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(last_stderr_line(&o), "InvalidKey");
}

#[test]
fn wrong_key_decrypts_to_noise_without_error() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("p.pgm");
    write_pgm(&plain, 16, 16, |_| 128);
    let enc = dir.path().join("e.pgm");
    let dec = dir.path().join("d.pgm");
    run(&["encrypt", "-i", plain.to_str().unwrap(), "-o", enc.to_str().unwrap(), "--key", KEY]);
    let other = KEY.replacen('0', "1", 1);
    let o = run(&["decrypt", "-i", enc.to_str().unwrap(), "-o", dec.to_str().unwrap(), "--key", &other]);
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(fs::read(&dec).unwrap(), fs::read(&plain).unwrap());
}

#[test]
fn runtime_errors_exit_2_with_name() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["encrypt", "-i", "/does/not/exist.pgm", "-o", "/tmp/x.pgm", "--key", KEY]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(last_stderr_line(&o), "IoFailure");

    let bad = dir.path().join("bad.pgm");
    fs::write(&bad, b"P5 4 4 255\n\x01").unwrap();
    let o = run(&["encrypt", "-i", bad.to_str().unwrap(), "-o", "/tmp/x.pgm", "--key", KEY]);
    assert_eq!(last_stderr_line(&o), "TruncatedPixelData");

    let o = run(&["encrypt", "-i", bad.to_str().unwrap(), "-o", "/tmp/x.pgm", "--key", "abc"]);
    assert_eq!(last_stderr_line(&o), "InvalidKey");
}

#[test]
fn analyze_trivial_examples() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.pgm");
    let full = dir.path().join("full.pgm");
    write_pgm(&zero, 8, 8, |_| 0);
    write_pgm(&full, 8, 8, |_| 255);
    let (z, f) = (zero.to_str().unwrap(), full.to_str().unwrap());

    let report = |args: &[&str]| -> serde_json::Value {
        let o = run(args);
        assert!(o.status.success(), "{:?}", o);
        serde_json::from_str(&stdout(&o)).unwrap()
    };
    assert_eq!(report(&["analyze", "entropy", z])["scalars"]["entropy"], 0.0);
    assert_eq!(report(&["analyze", "npcr", z, z])["scalars"]["npcr"], 0.0);
    assert_eq!(report(&["analyze", "uaci", z, f])["scalars"]["uaci"], 100.0);
    assert_eq!(report(&["analyze", "psnr", z, z])["scalars"]["psnr"], "identical");
    assert_eq!(report(&["analyze", "psnr", z, f])["scalars"]["psnr"], 0.0);
    assert_eq!(report(&["analyze", "ssim", z, z])["scalars"]["ssim"], 1.0);

    let csv = stdout(&run(&["analyze", "histogram", z, "--format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "bin,count");
    assert_eq!(lines[1], "0,64");
    assert_eq!(lines.len(), 257);

    let o = run(&["analyze", "mse", z]);
    assert_eq!(o.status.code(), Some(2));
    let small = dir.path().join("s.pgm");
    write_pgm(&small, 4, 4, |_| 0);
    let o = run(&["analyze", "npcr", z, small.to_str().unwrap()]);
    assert_eq!(last_stderr_line(&o), "ShapeMismatch");
}

#[test]
fn lyapunov_reference_exponent() {
    let o = run(&["lyapunov", "--map", "2d", "--k", "1.75", "--n", "100000"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let l1 = v["scalars"]["lambda1"].as_f64().unwrap();
    assert!((l1 - 0.2368).abs() < 0.02, "{l1}");
    assert!(v["scalars"]["lambda3"].is_null());
}

#[test]
fn lyapunov_divergence_names_parameters() {
    let o = run(&["lyapunov", "--map", "2d", "--k", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("k=4"), "{err}");
    assert_eq!(err.lines().last(), Some("OrbitDiverged"));
}

#[test]
fn bifurcate_two_steps_gives_two_parameter_values() {
    let o = run(&["bifurcate", "--map", "2d", "--param", "k", "--range", "1.0:1.8", "--steps", "2"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let mut values: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    values.dedup();
    assert_eq!(values, vec!["1", "1.8"]);
    assert_eq!(run(&["bifurcate", "--param", "k", "--range", "1.0-1.8"]).status.code(), Some(1));
}

#[test]
fn noise_test_is_deterministic() {
    let args = ["noise-test", "--variances", "10,100,1000", "--seed", "1", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    let mse: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(mse.len(), 3);
    assert!(mse[0] < mse[1] && mse[1] < mse[2]);
}

#[test]
fn keysens_and_diff_test() {
    let ks: serde_json::Value = serde_json::from_str(&stdout(&run(&["keysens", "--seed", "3"]))).unwrap();
    let rows = ks["table"]["rows"].as_array().unwrap();
    assert_eq!(rows[0][1], 0.0);
    assert!(rows[1][3].as_f64().unwrap() > 99.0);

    let d: serde_json::Value = serde_json::from_str(&stdout(&run(&["diff-test", "--seed", "3"]))).unwrap();
    assert!(d["scalars"]["key_npcr"].as_f64().unwrap() > 99.0);
}

#[test]
fn autocorr_normalized_sequences_are_decorrelated() {
    let o = run(&["autocorr", "--map", "2d", "--n", "50000", "--max-lag", "10"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["scalars"]["max_abs"].as_f64().unwrap() < 0.05);
}

#[test]
fn dump_keystream_writes_all_streams() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("p.pgm");
    write_pgm(&plain, 5, 4, |i| i as u8);
    let ks = dir.path().join("ks.bin");
    let o = run(&[
        "encrypt", "-i", plain.to_str().unwrap(), "-o", dir.path().join("e.pgm").to_str().unwrap(),
        "--key", KEY, "--dump-keystream", ks.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read(ks).unwrap().len(), 60);
}
