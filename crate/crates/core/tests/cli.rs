mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lode_repair::{flood_fill, Level};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lode-repair"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn broken_path(name: &str) -> PathBuf {
    common::corpus_dir("broken").join(format!("{name}.txt"))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Playable, one gold: only 0% or 100% of it can ever be reachable.
fn single_gold_level(dir: &Path) -> PathBuf {
    let mut rows = vec![".".repeat(32); 21];
    rows[20] = format!("M{}G", ".".repeat(30));
    rows.push("B".repeat(32));
    let path = dir.join("one_gold.txt");
    std::fs::write(&path, rows.join("\n") + "\n").unwrap();
    path
}

#[test]
fn evaluate_prints_report() {
    let out = run(&["evaluate", p(&broken_path("tiers_50-70"))]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["gold_total"], 12);
    assert_eq!(v["gold_collect"], 6);
    assert_eq!(v["playable"], false);
    let lvl = common::broken("tiers_50-70");
    assert_eq!(v["tiles_explored"], flood_fill(&lvl).tiles_explored);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "M.G\n").unwrap();
    assert_eq!(code(&run(&["evaluate", p(&bad)])), 2);
    assert_eq!(code(&run(&["repair", p(&bad), "--algo", "hc"])), 2);
    let out = run(&["corrupt", p(&bad), "--band", "30-50"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn bad_parameters_exit_3() {
    let level = broken_path("stairs_70-90");
    assert_eq!(code(&run(&["corrupt", p(&level), "--band", "20-40"])), 3);
    assert_eq!(code(&run(&["corrupt", p(&level), "--band", "50"])), 3);
    // Corrupting needs a playable input.
    assert_eq!(code(&run(&["corrupt", p(&level), "--band", "30-50"])), 3);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.txt");
    assert_eq!(code(&run(&["repair", p(&level), "--algo", "es", "--mu", "0", "--out", p(&out)])), 3);
    assert!(!out.exists());
}

#[test]
fn unreachable_band_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let one = single_gold_level(dir.path());
    let out = run(&[
        "corrupt",
        p(&one),
        "--band",
        "30-50",
        "--max-attempts",
        "200",
        "--out-dir",
        p(dir.path()),
    ]);
    assert_eq!(code(&out), 4);
}

#[test]
fn repair_writes_level_and_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fixed.txt");
    let res = run(&[
        "repair",
        p(&broken_path("stairs_70-90")),
        "--algo",
        "es",
        "--budget",
        "20000",
        "--seed",
        "4",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let fixed = Level::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(flood_fill(&fixed).all_gold_reachable());
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fixed.json")).unwrap()).unwrap();
    assert_eq!(record["success"], true);
    assert_eq!(record["algorithm"], "es");
    assert_eq!(record["band"], "70-90");
    assert_eq!(
        record["changes"],
        lode_repair::level::hamming_distance(&fixed, &common::broken("stairs_70-90"))
    );
}

#[test]
fn failed_repair_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.txt");
    let res = run(&["repair", p(&broken_path("towers_30-50")), "--algo", "rs", "--budget", "1", "--out", p(&out)]);
    assert_eq!(code(&res), 1);
    // The best level found is still written.
    assert!(out.exists());
}

#[test]
fn repair_is_byte_identical_across_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let src = broken_path("towers_70-90");
    let mut outputs = Vec::new();
    for i in 0..3 {
        let out = dir.path().join(format!("run{i}.txt"));
        let args = ["repair", p(&src), "--algo", "me", "--budget", "5000", "--seed", "21", "--out", p(&out)];
        run(&args);
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn corrupt_is_seeded_and_lands_in_band() {
    let src = common::corpus_dir("playable").join("towers.txt");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let out = run(&["corrupt", p(&src), "--band", "50-70", "--count", "3", "--seed", "5", "--out-dir", p(d.path())]);
        assert_eq!(code(&out), 0);
    }
    for i in 0..3 {
        let name = format!("towers_50-70_{i}.txt");
        let a = std::fs::read_to_string(dirs[0].path().join(&name)).unwrap();
        let b = std::fs::read_to_string(dirs[1].path().join(&name)).unwrap();
        assert_eq!(a, b);
        let r = flood_fill(&Level::parse(&a).unwrap());
        let pct = 100 * r.gold_collect / r.gold_total;
        assert!((50..70).contains(&pct), "{name}: {pct}%");
    }
}

#[test]
fn non_trivial_corruption_has_no_single_tile_fix() {
    let src = common::corpus_dir("playable").join("tiers.txt");
    let d = tempfile::tempdir().unwrap();
    let out = run(&[
        "corrupt",
        p(&src),
        "--band",
        "70-90",
        "--seed",
        "2",
        "--non-trivial",
        "--out-dir",
        p(d.path()),
    ]);
    assert_eq!(code(&out), 0);
    let lvl = Level::parse(&std::fs::read_to_string(d.path().join("tiers_70-90_0.txt")).unwrap()).unwrap();
    assert!(lode_repair::operators::single_tile_repair(&lvl).is_none());
}

#[test]
fn bundled_corpus_matches_its_generator() {
    let d = tempfile::tempdir().unwrap();
    for seed_level in ["tiers", "towers", "stairs"] {
        let src = common::corpus_dir("playable").join(format!("{seed_level}.txt"));
        for band in ["30-50", "50-70", "70-90"] {
            let out = run(&[
                "corrupt",
                p(&src),
                "--band",
                band,
                "--seed",
                "11",
                "--non-trivial",
                "--max-attempts",
                "20000",
                "--out-dir",
                p(d.path()),
            ]);
            assert_eq!(code(&out), 0);
            let made = std::fs::read_to_string(d.path().join(format!("{seed_level}_{band}_0.txt"))).unwrap();
            let bundled = std::fs::read_to_string(broken_path(&format!("{seed_level}_{band}"))).unwrap();
            assert_eq!(made, bundled, "{seed_level} {band}");
        }
    }
}
