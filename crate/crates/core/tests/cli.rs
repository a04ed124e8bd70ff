//! End-to-end checks of the command-line interface: flags, file outputs,
//! exit codes.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tamagawa"))
}

fn write(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn curve_localdata_reports_record_values() {
    let out = bin()
        .args(["curve", "localdata", "--"])
        .args(["1", "0", "0", "-1054050116", "-12046088636400"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("N = 39270 = 2*3*5*7*11*17"), "{text}");
    assert!(text.contains("tau = 31104 = 2^7*3^5"), "{text}");
    assert!(text.contains("q_tau = 2.30681"), "{text}");
}

#[test]
fn curve_minimal_normalises() {
    let out = bin()
        .args(["curve", "minimal", "--", "0", "7", "0", "-8", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("minimal [0,1,0,-24,36]"), "{text}");
}

#[test]
fn singular_curve_is_a_config_error() {
    let out = bin()
        .args(["curve", "invariants", "--", "0", "0", "0", "0", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_input_file_is_fatal_io() {
    let out = bin()
        .args(["triples", "check", "/nonexistent/triples.txt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_produces_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let triples = write(
        dir.path(),
        "t.txt",
        "10 2187 2197 2*5 3^7 13^3\n2 4 6\n",
    );
    let outdir = dir.path().join("out");
    let out = bin()
        .args(["search", "--triples"])
        .arg(&triples)
        .args(["--source", "high-quality", "--twists", "-1,1", "--out"])
        .arg(&outdir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // the not-coprime line is a diagnostic, not a failure
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gcd"), "{err}");
    for f in [
        "records.tsv",
        "output_high-quality_qua.txt",
        "output_high-quality_tam.txt",
        "figure.svg",
        "summary.txt",
    ] {
        assert!(outdir.join(f).exists(), "missing {f}");
    }

    // records round-trip through the tables/figure/summary subcommands
    let records = outdir.join("records.tsv");
    let out = bin()
        .args(["tables"])
        .arg(&records)
        .args(["--out"])
        .arg(dir.path())
        .args(["--label", "again"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("output_again_qua.txt").exists());

    let out = bin().args(["summary"]).arg(&records).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("high-quality"), "{text}");
    assert!(text.contains("all together"), "{text}");
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let triples = write(dir.path(), "t.txt", "1 8 9\n");
    let cfg = write(
        dir.path(),
        "cfg.txt",
        "# search defaults\ntwists = -1\ndepth = 1\nthreshold = 0.5\n",
    );
    let outdir = dir.path().join("out");
    let out = bin()
        .arg("--config")
        .arg(&cfg)
        .args(["search", "--triples"])
        .arg(&triples)
        .args(["--source", "derived", "--out"])
        .arg(&outdir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let qua = std::fs::read_to_string(outdir.join("output_derived_qua.txt")).unwrap();
    // with twists restricted to -1 the run stays small
    assert!(qua.lines().count() >= 2, "{qua}");
    let bad_cfg = write(dir.path(), "bad.txt", "twists\n");
    let out = bin()
        .arg("--config")
        .arg(&bad_cfg)
        .args(["search", "--triples"])
        .arg(&triples)
        .args(["--out"])
        .arg(&outdir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lmfdb_csv_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = write(
        dir.path(),
        "curves.csv",
        "conductor,a1,a2,a3,a4,a6\n39270,1,0,0,-1054050116,-12046088636400\n",
    );
    let outdir = dir.path().join("out");
    let out = bin()
        .args(["search", "--lmfdb"])
        .arg(&csv)
        .args(["--out"])
        .arg(&outdir)
        .args(["--label", "lmfdb"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let qua = std::fs::read_to_string(outdir.join("output_lmfdb_qua.txt")).unwrap();
    assert!(qua.contains("2.30681"), "{qua}");
    assert!(qua.contains("lmfdb"), "{qua}");
}

#[test]
fn derive_prints_all_four_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let triples = write(dir.path(), "t.txt", "10 2187 2197\n");
    let out = bin()
        .args(["triples", "derive"])
        .arg(&triples)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for label in ["A1:", "A2:", "A3:", "A4:"] {
        assert!(text.contains(label), "{text}");
    }
    assert!(text.contains("43840 4782969 4826809"), "{text}");
}
