//! End-to-end tests against the compiled binary: exit codes, file formats,
//! and the keygen/encrypt/decrypt/analyze/nist/grover/bench surfaces.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cryptochaos"))
}

fn run_in(dir: &Path, passphrase: Option<&str>, args: &[&str]) -> Output {
    let mut cmd = bin();
    cmd.current_dir(dir).args(args);
    match passphrase {
        Some(p) => cmd.env("CRYPTOCHAOS_PASSPHRASE", p),
        None => cmd.env_remove("CRYPTOCHAOS_PASSPHRASE"),
    };
    cmd.output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn keygen_encrypt_decrypt_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let out = run_in(d, None, &["keygen", "--out", "k"]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(std::fs::read(d.join("k")).unwrap().len(), 32);
    let pub_text = std::fs::read_to_string(d.join("k.pub")).unwrap();
    assert_eq!(pub_text.len(), 65);
    assert!(pub_text.ends_with('\n'));
    #[cfg(unix)]
    {
        use std::os::unix::fs::MetadataExt;
        assert_eq!(std::fs::metadata(d.join("k")).unwrap().mode() & 0o777, 0o600);
    }

    let out = run_in(d, None, &["synth-image", "--out", "img.pgm", "--seed", "7"]);
    assert!(out.status.success(), "{out:?}");

    let out = run_in(
        d,
        Some("hunter2"),
        &["encrypt", "--to", "k.pub", "--in", "img.pgm", "--out", "img.cch"],
    );
    assert!(out.status.success(), "{out:?}");

    let out = run_in(
        d,
        Some("hunter2"),
        &["decrypt", "--key", "k", "--in", "img.cch", "--out", "back.pgm"],
    );
    assert!(out.status.success(), "{out:?}");
    assert_eq!(
        std::fs::read(d.join("img.pgm")).unwrap(),
        std::fs::read(d.join("back.pgm")).unwrap()
    );
}

#[test]
fn wrong_passphrase_exits_3_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run_in(d, None, &["keygen", "--out", "k"]).status.success());
    assert!(run_in(d, None, &["synth-image", "--out", "img.pgm"]).status.success());
    assert!(run_in(
        d,
        Some("right"),
        &["encrypt", "--to", "k.pub", "--in", "img.pgm", "--out", "img.cch"]
    )
    .status
    .success());

    let out = run_in(
        d,
        Some("wrong"),
        &["decrypt", "--key", "k", "--in", "img.cch", "--out", "never.pgm"],
    );
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    assert!(!d.join("never.pgm").exists());
    assert!(!d.join("never.pgm.tmp").exists(), "partial output left behind");
}

#[test]
fn wrong_secret_key_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run_in(d, None, &["keygen", "--out", "k"]).status.success());
    assert!(run_in(d, None, &["keygen", "--out", "other"]).status.success());
    assert!(run_in(d, None, &["synth-image", "--out", "img.pgm"]).status.success());
    assert!(run_in(
        d,
        Some("pw"),
        &["encrypt", "--to", "k.pub", "--in", "img.pgm", "--out", "img.cch"]
    )
    .status
    .success());

    let out = run_in(
        d,
        Some("pw"),
        &["decrypt", "--key", "other", "--in", "img.cch", "--out", "no.pgm"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!d.join("no.pgm").exists());
}

#[test]
fn truncated_envelope_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run_in(d, None, &["keygen", "--out", "k"]).status.success());
    std::fs::write(d.join("short.cch"), b"CCH1\x01 definitely not enough").unwrap();
    let out = run_in(
        d,
        Some("pw"),
        &["decrypt", "--key", "k", "--in", "short.cch", "--out", "x"],
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn usage_error_exits_1() {
    let out = bin().arg("no-such-subcommand").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["decrypt", "--key"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seeded_encrypt_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run_in(d, None, &["keygen", "--out", "k"]).status.success());
    assert!(run_in(d, None, &["synth-image", "--out", "img.pgm", "--seed", "3"]).status.success());
    for out_name in ["a.cch", "b.cch"] {
        assert!(run_in(
            d,
            Some("pw"),
            &["encrypt", "--to", "k.pub", "--in", "img.pgm", "--out", out_name, "--seed", "11"]
        )
        .status
        .success());
    }
    assert_eq!(
        std::fs::read(d.join("a.cch")).unwrap(),
        std::fs::read(d.join("b.cch")).unwrap()
    );
}

#[test]
fn analyze_reports_metrics_and_tolerates_constant_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("const.bin"), vec![7u8; 4096]).unwrap();
    let out = run_in(d, None, &["analyze", "--in", "const.bin", "--json"]);
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["bytes"], 4096);
    assert_eq!(v["entropy_bits_per_byte"], 0.0);
    assert!(v["adjacent_correlation_error"]
        .as_str()
        .unwrap()
        .contains("zero variance"));

    // Pairwise metrics against a second file.
    std::fs::write(d.join("zeros.bin"), vec![0u8; 4096]).unwrap();
    std::fs::write(d.join("maxed.bin"), vec![255u8; 4096]).unwrap();
    let out = run_in(
        d,
        None,
        &["analyze", "--in", "zeros.bin", "--compare", "maxed.bin", "--json"],
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["compare"]["npcr_percent"], 100.0);
    assert_eq!(v["compare"]["mse"], 65025.0);

    // Too-small input is an input error.
    std::fs::write(d.join("tiny.bin"), b"ab").unwrap();
    let out = run_in(d, None, &["analyze", "--in", "tiny.bin"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nist_subcommand_reports_suite() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run_in(d, None, &["synth-image", "--out", "img.pgm", "--seed", "5"]).status.success());
    let out = run_in(
        d,
        None,
        &["nist", "--in", "img.pgm", "--json", "--serial-m", "2", "--template", "000000001"],
    );
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["total"], 7);
    assert_eq!(v["results"].as_array().unwrap().len(), 7);

    let out = run_in(d, None, &["nist", "--in", "img.pgm"]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("Tests Passed"));
}

#[test]
fn grover_subcommand_separates_model_from_reference() {
    let out = bin().args(["grover", "--key-bits", "256", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["model"]["effective_keyspace_bits"], 128.0);
    assert_eq!(
        v["model"]["iterations"],
        "267257146016241686964920093290467695825"
    );
    assert_eq!(v["reference_table"].as_array().unwrap().len(), 5);
    assert_eq!(v["reference_table"][0]["algorithm"], "CryptoChaos");

    let out = bin().args(["grover"]).output().unwrap();
    let text = stdout_of(&out);
    assert!(text.contains("Parametric Grover cost model"));
    assert!(text.contains("reference table"));
}

#[test]
fn bench_subcommand_small_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run_in(
        d,
        None,
        &[
            "bench",
            "--runs",
            "1",
            "--warmup",
            "0",
            "--adapters",
            "aes-gcm,chacha20",
            "--json",
        ],
    );
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row["outcome"]["kind"], "Ok", "{row}");
    }

    // CSV emission.
    let out = run_in(
        d,
        None,
        &["bench", "--runs", "1", "--warmup", "0", "--adapters", "chacha20", "--format", "csv"],
    );
    assert!(out.status.success());
    assert!(stdout_of(&out).starts_with("algorithm,entropy_bits_per_byte"));
}
