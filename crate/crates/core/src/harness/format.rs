//! Plain-text game and payoff documents.
//!
//! A game document lists a header `n K` followed by one line per coalition
//! with a nonzero worth: ascending 1-based players, a colon, then the worth.
//! Omitted coalitions are worth 0. `#` starts a comment.
//!
//! ```text
//! # three-player majority game
//! n 3
//! 1 2 : 1
//! 1 3 : 1
//! 2 3 : 1
//! 1 2 3 : 1
//! ```
//!
//! A payoff document is the same header followed by one line of `K`
//! rationals. Rationals are written `p` or `p/q` with `q > 0`.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::{Coalition, Payoff, TuGame, MAX_PLAYERS};
use crate::rational::{parse_rational, Rational};

/// Non-blank, comment-stripped lines with 1-based line numbers.
fn content_lines(doc: &str) -> impl Iterator<Item = (usize, &str)> {
    doc.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<usize> {
    let (no, line) = lines.next().ok_or_else(|| Error::parse(1, "missing `n K` header"))?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some("n") {
        return Err(Error::parse(no, "header must read `n K`"));
    }
    let n: usize = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(no, "player count is not a number"))?;
    if parts.next().is_some() {
        return Err(Error::parse(no, "trailing text after the player count"));
    }
    if n == 0 || n > MAX_PLAYERS {
        return Err(Error::parse(no, format!("player count must be in 1..={MAX_PLAYERS}")));
    }
    Ok(n)
}

pub fn parse_game(doc: &str) -> Result<TuGame> {
    let mut lines = content_lines(doc);
    let n = parse_header(&mut lines)?;
    let mut worth = vec![Rational::zero(); 1 << n];
    let mut seen = vec![false; 1 << n];
    for (no, line) in lines {
        let (players, value) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(no, "expected `players : worth`"))?;
        let mut mask = 0u32;
        let mut last = 0usize;
        for tok in players.split_whitespace() {
            let p: usize = tok
                .parse()
                .map_err(|_| Error::parse(no, format!("player {tok:?} is not a number")))?;
            if p == 0 || p > n {
                return Err(Error::parse(no, format!("player {p} is outside 1..={n}")));
            }
            if p <= last {
                return Err(Error::parse(no, "players must be strictly ascending"));
            }
            last = p;
            mask |= 1 << (p - 1);
        }
        if mask == 0 {
            return Err(Error::parse(no, "coalition has no players"));
        }
        if std::mem::replace(&mut seen[mask as usize], true) {
            return Err(Error::parse(no, format!("duplicate coalition {}", Coalition::from_mask(mask))));
        }
        worth[mask as usize] = parse_rational(value).map_err(|m| Error::parse(no, m))?;
    }
    TuGame::from_table(n, worth)
}

/// Canonical form: nonzero worths in ascending mask order.
pub fn emit_game(game: &TuGame) -> String {
    let mut out = format!("n {}\n", game.n());
    for c in game.coalitions() {
        let v = game.worth(c);
        if v.is_zero() {
            continue;
        }
        let players: Vec<String> = c.players().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "{} : {}", players.join(" "), v);
    }
    out
}

pub fn parse_payoff(doc: &str) -> Result<Payoff> {
    let mut lines = content_lines(doc);
    let n = parse_header(&mut lines)?;
    let (no, line) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing payoff values"))?;
    let values = line
        .split_whitespace()
        .map(|tok| parse_rational(tok).map_err(|m| Error::parse(no, m)))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != n {
        return Err(Error::parse(no, format!("expected {n} values, found {}", values.len())));
    }
    if let Some((extra, _)) = lines.next() {
        return Err(Error::parse(extra, "unexpected content after the payoff line"));
    }
    Ok(Payoff::new(values))
}

pub fn emit_payoff(x: &Payoff) -> String {
    let values: Vec<String> = x.values().iter().map(ToString::to_string).collect();
    format!("n {}\n{}\n", x.len(), values.join(" "))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_string(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

pub fn read_game(path: &Path) -> Result<TuGame> {
    parse_game(&read_to_string(path)?)
}

pub fn read_payoff(path: &Path) -> Result<Payoff> {
    parse_payoff(&read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::g3sym;
    use crate::rational::{int, ratio};

    const G3: &str = "# majority\nn 3\n1 2 : 1\n1 3 : 1\n2 3 : 1\n1 2 3 : 1\n";

    #[test]
    fn parses_the_symmetric_game() {
        assert_eq!(parse_game(G3).unwrap(), g3sym());
    }

    #[test]
    fn omitted_coalitions_are_zero() {
        let g = parse_game("n 2\n1 2 : 1/2\n").unwrap();
        assert_eq!(g.grand_worth(), &ratio(1, 2));
        assert_eq!(g.worth(Coalition::singleton(0)), &int(0));
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("n 2\n1 : 0\n1 : 0\n", 3),
            ("n 2\n3 : 1\n", 2),
            ("n 2\n2 1 : 1\n", 2),
            ("n 2\n1 2 : 1/0\n", 2),
            ("n 2\n\n# c\n1 2 1\n", 4),
            ("m 2\n", 1),
        ];
        for (doc, line) in cases {
            match parse_game(doc) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{doc:?}"),
                other => panic!("{doc:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn emit_is_canonical() {
        let doc = "n 3\n1 2 3 : 2/2\n2 3 : 1\n1 3 : 1\n1 2 : 1\n3 : 0\n";
        assert_eq!(emit_game(&parse_game(doc).unwrap()), "n 3\n1 2 : 1\n1 3 : 1\n2 3 : 1\n1 2 3 : 1\n");
    }

    #[test]
    fn payoff_round_trip() {
        let x = Payoff::new(vec![ratio(1, 3), ratio(-2, 4), int(7)]);
        let doc = emit_payoff(&x);
        assert_eq!(doc, "n 3\n1/3 -1/2 7\n");
        assert_eq!(parse_payoff(&doc).unwrap(), x);
        assert!(parse_payoff("n 2\n1\n").is_err());
        assert!(parse_payoff("n 1\n1\n2\n").is_err());
    }
}
