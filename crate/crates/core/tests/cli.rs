use std::path::Path;
use std::process::{Command, Output};

use nucleolus::harness::format::write_string;

fn nucleolus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nucleolus")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn majority(dir: &Path) -> std::path::PathBuf {
    let game = dir.join("majority.game");
    write_string(&game, "n 3\n1 2 : 1\n1 3 : 1\n2 3 : 1\n1 2 3 : 1\n").unwrap();
    game
}

#[test]
fn compute_prints_the_equal_split() {
    let dir = tempfile::tempdir().unwrap();
    let game = majority(dir.path());
    let out = nucleolus(&["compute", "--game", path(&game), "--solution", "prenucleolus"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "n 3\n1/3 1/3 1/3\n");

    let out = nucleolus(&["compute", "--game", path(&game), "--solution", "nucleolus", "--trace"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"rounds\""));
}

#[test]
fn verify_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let game = majority(dir.path());
    let split = dir.path().join("split.payoff");
    let corner = dir.path().join("corner.payoff");
    let bad = dir.path().join("bad.payoff");
    write_string(&split, "n 3\n1/3 1/3 1/3\n").unwrap();
    write_string(&corner, "n 3\n1 0 0\n").unwrap();
    write_string(&bad, "n 3\n1 1\n").unwrap();

    let cases: &[(&[&str], &Path, i32)] = &[
        (&["--method", "kohlberg", "--solution", "prenucleolus"], &split, 0),
        (&["--method", "kohlberg", "--solution", "prenucleolus"], &corner, 1),
        (&["--method", "modified", "--solution", "prenucleolus"], &split, 0),
        (&["--method", "modified", "--solution", "prenucleolus"], &corner, 1),
        (&["--method", "kohlberg", "--solution", "nucleolus", "--singleton-rule", "all"], &split, 0),
        (&["--method", "kohlberg", "--solution", "nucleolus", "--singleton-rule", "tight"], &corner, 1),
        (&["--method", "nguyen", "--solution", "nucleolus"], &split, 0),
        (&["--method", "nguyen", "--solution", "nucleolus"], &corner, 1),
        (&["--method", "kohlberg", "--solution", "prenucleolus"], &bad, 2),
        (&["--method", "nguyen", "--solution", "prenucleolus"], &split, 2),
    ];
    for (flags, point, code) in cases {
        let mut args = vec!["verify", "--game", path(&game), "--point", path(point)];
        args.extend_from_slice(flags);
        let out = nucleolus(&args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}");
    }

    let missing = dir.path().join("missing.game");
    let out = nucleolus(&["verify", "--game", path(&missing), "--point", path(&split)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.game"));
}

#[test]
fn compare_writes_a_report_and_replay_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = nucleolus(&[
        "compare",
        "--n",
        "3",
        "--count",
        "10",
        "--seed",
        "7",
        "--dist",
        "uniform_int(-10,10)",
        "--point-rule",
        "oracle_perturbed",
        "--out",
        path(&out_dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["summary"]["rows"], 10);
    assert_eq!(report["summary"]["kohlberg_rejects"], 10);

    let out = nucleolus(&["replay", "--dir", path(&out_dir)]);
    assert!(out.status.success());

    let out = nucleolus(&["compare", "--n", "3", "--count", "0", "--out", path(&out_dir)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_reads_a_directory_of_games() {
    let dir = tempfile::tempdir().unwrap();
    let games = dir.path().join("games");
    majority(&games);
    write_string(&games.join("pair.game"), "n 2\n1 2 : 1\n").unwrap();
    write_string(&games.join("pair.payoff"), "n 2\n1/2 1/2\n").unwrap();
    let table = dir.path().join("bench.json");
    let out = nucleolus(&["bench", "--games", path(&games), "--out", path(&table)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&table).unwrap()).unwrap();
    assert_eq!(t["totals"]["games"], 2);
    assert!(!t["rows"].as_array().unwrap().is_empty());
}
