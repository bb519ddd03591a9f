use std::path::Path;

use nucleolus::harness::compare::{bundle_traces, replay_counterexample, replay_directory, KIND_MODIFIED};
use nucleolus::harness::format::write_string;
use nucleolus::harness::{emit_game, emit_payoff, random_game, Dist};
use nucleolus::oracle::prenucleolus;
use serde_json::json;

fn write_file(dir: &Path, name: &str, seed: u64, tamper: bool) {
    let game = random_game(4, seed, Dist::UniformInt { lo: -10, hi: 10 }).unwrap();
    let (x, _) = prenucleolus(&game).unwrap();
    let mut traces = serde_json::to_value(bundle_traces(&game, &x).unwrap()).unwrap();
    if tamper {
        traces["kohlberg"]["verdict"] = json!("NotSolution");
    }
    let doc = json!({
        "kind": KIND_MODIFIED,
        "index": seed,
        "game_seed": seed,
        "game": emit_game(&game),
        "point": emit_payoff(&x),
        "traces": traces,
    });
    write_string(&dir.join("counterexamples").join(name), &serde_json::to_string_pretty(&doc).unwrap()).unwrap();
}

#[test]
fn stored_traces_replay_identically() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "00000-a.json", 1, false);
    write_file(dir.path(), "00001-b.json", 2, false);
    let outcomes = replay_directory(dir.path()).unwrap();
    assert_eq!(outcomes.len(), 2);
    for o in &outcomes {
        assert!(o.identical, "{}", o.path.display());
        assert_eq!(o.kind, KIND_MODIFIED);
        assert!(o.verdicts.contains_key("kohlberg"));
    }
}

#[test]
fn edited_traces_are_detected() {
    let dir = tempfile::tempdir().unwrap();
    write_file(dir.path(), "00000-x.json", 3, true);
    let o = replay_counterexample(&dir.path().join("counterexamples/00000-x.json")).unwrap();
    assert!(!o.identical);
}

#[test]
fn a_directory_without_counterexamples_replays_nothing() {
    let dir = tempfile::tempdir().unwrap();
    assert!(replay_directory(dir.path()).unwrap().is_empty());
}
