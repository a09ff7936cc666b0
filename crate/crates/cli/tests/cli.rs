//! End-to-end tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_blockperm")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin()).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_identity_factorization(dir: &Path, n: usize) -> PathBuf {
    let blocks: Vec<String> = (0..n)
        .map(|k| format!(r#"{{"start": {k}, "size": 1, "entries": [[1.0, 0.0]]}}"#))
        .collect();
    let text = format!(r#"{{"dim": {n}, "factors": [[{}]]}}"#, blocks.join(","));
    let path = dir.join("identity.json");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn compute_identity_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_identity_factorization(dir.path(), 4);
    let out = run(&["compute", path.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["permanent"]["exponent10"], 0);
    let m = doc["permanent"]["mantissa"].as_array().unwrap();
    assert!((m[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(m[1].as_f64().unwrap().abs() < 1e-12);
    assert!(doc["stats"]["max_bond"].as_u64().unwrap() >= 1);
}

#[test]
fn compute_diagonal_two_three_is_six() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("diag.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "factors": [[
            {"start": 0, "size": 1, "entries": [[2.0, 0.0]]},
            {"start": 1, "size": 1, "entries": [[3.0, 0.0]]}
        ]]}"#,
    )
    .unwrap();
    let out = run(&["compute", path.to_str().unwrap()]);
    let doc = stdout_json(&out);
    let m = doc["permanent"]["mantissa"].as_array().unwrap();
    let e = doc["permanent"]["exponent10"].as_i64().unwrap();
    let value = m[0].as_f64().unwrap() * 10f64.powi(e as i32);
    assert!((value - 6.0).abs() < 1e-12);
}

#[test]
fn compute_rejects_bad_documents_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let out = run(&["compute", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // Structurally invalid: tiling gap, diagnostic names the factor.
    let gap = dir.path().join("gap.json");
    std::fs::write(
        &gap,
        r#"{"dim": 3, "factors": [[
            {"start": 0, "size": 1, "entries": [[1.0, 0.0]]},
            {"start": 2, "size": 1, "entries": [[1.0, 0.0]]}
        ]]}"#,
    )
    .unwrap();
    let out = run(&["compute", gap.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("factor 0"), "diagnostic should name the factor: {stderr}");

    let missing = dir.path().join("missing.json");
    let out = run(&["compute", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_is_deterministic_and_computable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["generate", "--n", "6", "--l", "2", "--seed", "1", "--density", "0.5"];
    let out =
        run(&[&args[..], &["--out", a.to_str().unwrap()]].concat());
    assert!(out.status.success());
    let out =
        run(&[&args[..], &["--out", b.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = run(&["compute", a.to_str().unwrap()]);
    assert!(out.status.success(), "generated file must compute cleanly");

    // Omitting --out prints the same document to stdout.
    let out = run(&args);
    assert!(out.status.success());
    assert_eq!(out.stdout.strip_suffix(b"\n").unwrap(), &std::fs::read(&a).unwrap()[..]);
}

#[test]
fn generate_density_zero_emits_only_single_blocks() {
    let out = run(&["generate", "--n", "5", "--l", "3", "--seed", "9", "--density", "0"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for factor in doc["factors"].as_array().unwrap() {
        for block in factor.as_array().unwrap() {
            assert_eq!(block["size"], 1);
        }
    }
}

#[test]
fn generate_validates_flags() {
    let out = run(&["generate", "--n", "0", "--l", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["generate", "--n", "4", "--l", "2", "--density", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown flags are a usage error (clap's own exit code, also 2).
    let out = run(&["generate", "--n", "4", "--l", "2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_agrees_on_identity_and_seeded_instances() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_identity_factorization(dir.path(), 4);
    let out = run(&["verify", path.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["agree"], true);
    assert!(doc["relative_error"].as_f64().unwrap() <= 1e-8);

    let gen = dir.path().join("seeded.json");
    let out = run(&[
        "generate", "--n", "10", "--l", "3", "--seed", "3", "--density", "0.6", "--out",
        gen.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["verify", gen.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["agree"], true);

    // Compute's value must match what verify reported for the same file.
    let out = run(&["compute", gen.to_str().unwrap()]);
    let cdoc = stdout_json(&out);
    assert_eq!(cdoc["permanent"]["mantissa"], doc["engine"]["mantissa"]);
}

#[test]
fn verify_rejects_oversized_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_identity_factorization(dir.path(), 25);
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "beyond the oracle cap is bad input");
}

#[test]
fn factorize_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let dense = dir.path().join("m.json");
    // 2×2 invertible.
    std::fs::write(
        &dense,
        r#"{"rows": 2, "cols": 2, "entries": [[1.0, 0.5], [2.0, 0.0], [0.0, -1.0], [3.0, 1.0]]}"#,
    )
    .unwrap();
    let fout = dir.path().join("f.json");
    let out = run(&["factorize", dense.to_str().unwrap(), "--out", fout.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&fout).unwrap()).unwrap();
    assert_eq!(doc["factors"].as_array().unwrap().len(), 1);
    assert_eq!(doc["factors"][0].as_array().unwrap().len(), 1);

    let out = run(&["verify", fout.to_str().unwrap()]);
    assert!(out.status.success(), "factorized file should verify");
}

#[test]
fn factorize_rejects_singular_with_exit_five() {
    let dir = tempfile::tempdir().unwrap();
    let dense = dir.path().join("singular.json");
    std::fs::write(
        &dense,
        r#"{"rows": 3, "cols": 3, "entries": [
            [1.0, 0.0], [2.0, 0.0], [3.0, 0.0],
            [2.0, 0.0], [4.0, 0.0], [6.0, 0.0],
            [0.0, 0.0], [1.0, 0.0], [1.0, 0.0]
        ]}"#,
    )
    .unwrap();
    let out = run(&["factorize", dense.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn rcm_prints_a_permutation() {
    let dir = tempfile::tempdir().unwrap();
    let dense = dir.path().join("band.json");
    // 4×4 tridiagonal pattern, scrambled by the permutation (2,0,3,1).
    let scramble = [2usize, 0, 3, 1];
    let mut entries = vec![[0.0, 0.0]; 16];
    for i in 0..4 {
        entries[scramble[i] * 4 + scramble[i]] = [1.0, 0.0];
        if i + 1 < 4 {
            entries[scramble[i] * 4 + scramble[i + 1]] = [1.0, 0.0];
            entries[scramble[i + 1] * 4 + scramble[i]] = [1.0, 0.0];
        }
    }
    let doc = serde_json::json!({"rows": 4, "cols": 4, "entries": entries});
    std::fs::write(&dense, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = run(&["rcm", dense.to_str().unwrap()]);
    let perm: Vec<usize> = serde_json::from_slice(&out.stdout).expect("JSON integer array");
    let mut sorted = perm.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, vec![0, 1, 2, 3]);
    // The scrambled path graph comes back to bandwidth 1: consecutive in the
    // new order means adjacent in the path.
    for w in perm.windows(2) {
        let a = scramble.iter().position(|&v| v == w[0]).unwrap();
        let b = scramble.iter().position(|&v| v == w[1]).unwrap();
        assert_eq!(a.abs_diff(b), 1, "ordering {perm:?} is not a path traversal");
    }
}

#[test]
fn bench_emits_csv_with_deterministic_bonds() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["bench", "--max-n", "16", "--l", "1", "--repeats", "2", "--seed", "4"],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,l,wall_time_s,max_bond,svd_count");
    let rows: Vec<Vec<String>> =
        lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 4, "two dimensions × two repeats");
    for row in &rows {
        assert_eq!(row.len(), 5);
        assert_eq!(row[1], "1");
    }
    assert_eq!(rows[0][0], "8");
    assert_eq!(rows[2][0], "16");
    // Same instance, same truncation → identical bond structure across repeats.
    assert_eq!(rows[0][3], rows[1][3]);
    assert_eq!(rows[2][3], rows[3][3]);
    assert_eq!(rows[0][4], rows[1][4]);
}
