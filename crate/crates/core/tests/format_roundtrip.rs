use nucleolus::harness::format::{emit_game, emit_payoff, parse_game, parse_payoff};
use nucleolus::harness::random::{random_imputation, rng_from_seed};
use nucleolus::harness::{random_game, Dist};
use nucleolus::rational::{int, ratio};
use nucleolus::{Coalition, Error, TuGame};

const FIXTURES: &[&str] = &[
    "n 3\n1 2 : 1\n1 3 : 1\n2 3 : 1\n1 2 3 : 1\n",
    "n 2\n1 2 : 1/2\n",
    "# comment line\nn 3\n\n2 3 : 4/6   # trailing comment\n1 : -3\n1 2 3 : 0\n",
    "n 1\n1 : 7\n",
    "n 4\n1 2 3 4 : 12\n1 2 : 5\n3 4 : 5\n",
];

#[test]
fn fixtures_round_trip_to_canonical_form() {
    for doc in FIXTURES {
        let g = parse_game(doc).unwrap();
        let canonical = emit_game(&g);
        let again = parse_game(&canonical).unwrap();
        assert_eq!(again, g, "{doc}");
        assert_eq!(emit_game(&again), canonical);
    }
}

#[test]
fn majority_fixture_parses_to_the_expected_worths() {
    let g = parse_game(FIXTURES[0]).unwrap();
    for c in g.coalitions() {
        let expected = if c.size() >= 2 { int(1) } else { int(0) };
        assert_eq!(g.worth(c), &expected);
    }
    let g = parse_game(FIXTURES[1]).unwrap();
    assert_eq!(g.grand_worth(), &ratio(1, 2));
    assert_eq!(g.worth(Coalition::singleton(0)), &int(0));
}

#[test]
fn rationals_are_normalized() {
    let g = parse_game(FIXTURES[2]).unwrap();
    assert!(emit_game(&g).contains("2 3 : 2/3"));
    assert!(!emit_game(&g).contains("1 2 3"));
}

#[test]
fn a_thousand_random_games_round_trip() {
    for seed in 0..1000u64 {
        let n = 1 + (seed % 6) as usize;
        let dist = if seed % 2 == 0 {
            Dist::UniformInt { lo: -10, hi: 10 }
        } else {
            Dist::ZeroNormalized { lo: -3, hi: 9 }
        };
        let g = random_game(n, seed, dist).unwrap();
        let doc = emit_game(&g);
        assert_eq!(parse_game(&doc).unwrap(), g, "seed {seed}");
        if let Some(x) = random_imputation(&g, &mut rng_from_seed(seed)) {
            assert_eq!(parse_payoff(&emit_payoff(&x)).unwrap(), x, "seed {seed}");
        }
    }
}

fn parse_error_line(doc: &str) -> usize {
    match parse_game(doc) {
        Err(Error::Parse { line, .. }) => line,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn malformed_documents_name_the_line() {
    assert_eq!(parse_error_line("n 3\n1 : 0\n1 : 0\n"), 3);
    assert_eq!(parse_error_line("n 3\n1 4 : 1\n"), 2);
    assert_eq!(parse_error_line("n 3\n2 1 : 1\n"), 2);
    assert_eq!(parse_error_line("n 3\n1 2 : 1/0\n"), 2);
    assert_eq!(parse_error_line("n 17\n"), 1);
    assert_eq!(parse_error_line("players 3\n"), 1);
    assert!(matches!(parse_payoff("n 3\n1 2\n"), Err(Error::Parse { line: 2, .. })));
}

#[test]
fn from_table_and_parse_agree() {
    let g = TuGame::from_table(2, vec![int(0), int(1), int(0), ratio(5, 2)]).unwrap();
    assert_eq!(parse_game("n 2\n1 : 1\n1 2 : 5/2\n").unwrap(), g);
}
