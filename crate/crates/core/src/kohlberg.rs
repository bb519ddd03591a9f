//! Level-by-level verification of the pre-nucleolus and nucleolus.
//!
//! Starting from the top excess level, each level collection `D_k` (every
//! coalition with excess at least `psi_k`) must be balanced. The walk stops at
//! the first failing level, or accepts once the characteristic vectors of
//! `D_k` span `R^n`; every later level contains `D_k` and inherits balancedness.

use serde::Serialize;

use crate::balance::{check_balanced, check_balanced_relative, BalanceVerdict};
use crate::error::{Error, Result};
use crate::game::{
    excess_table, is_imputation, is_preimputation, level_from_table, max_excess_outside, Coalition,
    CoalitionCollection, ExcessLevel, Payoff, TuGame,
};
use crate::lp::linalg::mask_rank;
use crate::rational::{serialize_opt_rationals, serialize_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    IsSolution,
    NotSolution,
}

/// Which singletons join every level collection in the nucleolus test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum SingletonRule {
    /// Every singleton, whatever its excess.
    All,
    /// Singletons with `x_i = v({i})`.
    #[default]
    Tight,
}

impl SingletonRule {
    pub fn name(self) -> &'static str {
        match self {
            SingletonRule::All => "all",
            SingletonRule::Tight => "tight",
        }
    }
}

impl std::str::FromStr for SingletonRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SingletonRule::All),
            "tight" => Ok(SingletonRule::Tight),
            _ => Err(Error::Config(format!("unknown singleton rule {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationStep {
    pub k: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub psi: Rational,
    /// The collection tested at this step.
    pub collection: CoalitionCollection,
    /// Coalitions new at this step.
    pub added: CoalitionCollection,
    pub balance: BalanceVerdict,
    /// Rank of the characteristic vectors seen so far.
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub level: usize,
    pub collection: CoalitionCollection,
    #[serde(serialize_with = "serialize_opt_rationals")]
    pub farkas_y: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationTrace {
    pub method: String,
    pub header: Vec<String>,
    pub steps: Vec<VerificationStep>,
    pub verdict: Verdict,
    pub rejection: Option<Rejection>,
}

impl VerificationTrace {
    pub fn is_solution(&self) -> bool {
        self.verdict == Verdict::IsSolution
    }
}

/// Largest excess among nonempty coalitions outside `excluded`.
pub fn next_level(game: &TuGame, x: &Payoff, excluded: &CoalitionCollection) -> Result<ExcessLevel> {
    let table = excess_table(game, x)?;
    max_excess_outside(&table, excluded)
        .map(ExcessLevel)
        .ok_or_else(|| Error::domain("every coalition is excluded; there is no next level"))
}

pub(crate) fn tight_singletons(game: &TuGame, x: &Payoff) -> CoalitionCollection {
    let n = game.n();
    CoalitionCollection::from_sorted(
        n,
        (0..n)
            .map(Coalition::singleton)
            .filter(|s| &x[s.players().next().unwrap()] == game.worth(*s))
            .collect(),
    )
}

/// Shared level walk. `test` decides each level collection.
fn walk(
    game: &TuGame,
    x: &Payoff,
    method: &str,
    header: Vec<String>,
    mut test: impl FnMut(&CoalitionCollection) -> Result<BalanceVerdict>,
) -> Result<VerificationTrace> {
    let n = game.n();
    let table = excess_table(game, x)?;
    let mut seen = CoalitionCollection::empty(n);
    let mut steps = Vec::new();
    for k in 0.. {
        let psi = max_excess_outside(&table, &seen)
            .ok_or_else(|| Error::Internal("level walk ran past full rank".into()))?;
        let level = level_from_table(n, &table, &psi);
        let added = level.difference(&seen);
        let balance = test(&level)?;
        let rank = mask_rank(&level.masks(), n);
        let balanced = balance.is_balanced();
        let rejection = (!balanced).then(|| Rejection {
            level: k,
            collection: level.clone(),
            farkas_y: balance.farkas_y.clone(),
        });
        steps.push(VerificationStep {
            k,
            psi,
            collection: level.clone(),
            added,
            balance,
            rank,
        });
        if !balanced || rank == n {
            return Ok(VerificationTrace {
                method: method.to_string(),
                header,
                steps,
                verdict: if balanced {
                    Verdict::IsSolution
                } else {
                    Verdict::NotSolution
                },
                rejection,
            });
        }
        seen = level;
    }
    unreachable!()
}

/// Decides whether the pre-imputation `x` is the pre-nucleolus of `game`.
pub fn verify_prenucleolus(game: &TuGame, x: &Payoff) -> Result<VerificationTrace> {
    if !is_preimputation(game, x) {
        return Err(Error::domain("payoff is not efficient"));
    }
    walk(
        game,
        x,
        "kohlberg",
        vec!["every level collection must be balanced".into()],
        check_balanced,
    )
}

/// Decides whether the imputation `x` is the nucleolus of `game`. Each level
/// `D_k` is tested together with the singletons chosen by `rule`, with positive
/// weights demanded on `D_k` only.
pub fn verify_nucleolus(game: &TuGame, x: &Payoff, rule: SingletonRule) -> Result<VerificationTrace> {
    if !is_imputation(game, x) {
        return Err(Error::domain("payoff is not an imputation"));
    }
    let n = game.n();
    let c0 = match rule {
        SingletonRule::All => CoalitionCollection::singletons(n),
        SingletonRule::Tight => tight_singletons(game, x),
    };
    let header = vec![
        format!("singleton_rule={}", rule.name()),
        format!("singletons={c0}"),
        "each level needs weights >= 0 on singletons ∪ level, > 0 on the level".into(),
    ];
    walk(game, x, "kohlberg-nucleolus", header, |level| {
        check_balanced_relative(n, level, &c0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::BalanceKind;
    use crate::game::fixtures::{collection, g3sym, payoff};
    use crate::rational::{int, ratio};

    #[test]
    fn next_level_examples() {
        let g = g3sym();
        let third = payoff(&[(1, 3), (1, 3), (1, 3)]);
        let pairs = collection(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(next_level(&g, &third, &pairs).unwrap(), ExcessLevel(int(0)));
        let empty = CoalitionCollection::empty(3);
        assert_eq!(next_level(&g, &third, &empty).unwrap(), ExcessLevel(ratio(1, 3)));
        let x = payoff(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(next_level(&g, &x, &collection(3, &[&[2, 3]])).unwrap(), ExcessLevel(int(0)));
        assert!(next_level(&g, &x, &CoalitionCollection::all(3)).is_err());
    }

    #[test]
    fn equal_split_is_accepted_in_one_step() {
        let t = verify_prenucleolus(&g3sym(), &payoff(&[(1, 3), (1, 3), (1, 3)])).unwrap();
        assert_eq!(t.verdict, Verdict::IsSolution);
        assert_eq!(t.steps.len(), 1);
        let s = &t.steps[0];
        assert_eq!(s.psi, ratio(1, 3));
        assert_eq!(s.collection, collection(3, &[&[1, 2], &[1, 3], &[2, 3]]));
        assert_eq!(s.rank, 3);
        assert!(s.balance.weights.as_ref().unwrap().iter().all(|(_, w)| w == &ratio(1, 2)));
    }

    #[test]
    fn corner_point_is_rejected_at_the_top_level() {
        let t = verify_prenucleolus(&g3sym(), &payoff(&[(1, 1), (0, 1), (0, 1)])).unwrap();
        assert_eq!(t.verdict, Verdict::NotSolution);
        let r = t.rejection.unwrap();
        assert_eq!(r.level, 0);
        assert_eq!(r.collection, collection(3, &[&[2, 3]]));
        assert_eq!(r.farkas_y.unwrap(), vec![int(-2), int(1), int(1)]);
    }

    #[test]
    fn one_player_game() {
        let g = TuGame::from_table(1, vec![int(0), int(5)]).unwrap();
        let t = verify_prenucleolus(&g, &Payoff::new(vec![int(5)])).unwrap();
        assert_eq!(t.verdict, Verdict::IsSolution);
        assert_eq!(t.steps.len(), 1);
    }

    #[test]
    fn full_rank_alone_does_not_accept() {
        // D_0 = {{1}, N} has rank 2 but is unbalanced
        let g = TuGame::from_table(2, vec![int(0), int(0), int(-1), int(0)]).unwrap();
        let t = verify_prenucleolus(&g, &Payoff::new(vec![int(0), int(0)])).unwrap();
        assert_eq!(t.verdict, Verdict::NotSolution);
        let t = verify_prenucleolus(&g, &payoff(&[(1, 2), (-1, 2)])).unwrap();
        assert_eq!(t.verdict, Verdict::IsSolution);
    }

    #[test]
    fn inefficient_payoff_is_a_domain_error() {
        assert!(matches!(
            verify_prenucleolus(&g3sym(), &payoff(&[(1, 1), (1, 1), (1, 1)])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            verify_nucleolus(&g3sym(), &payoff(&[(2, 1), (-1, 1), (0, 1)]), SingletonRule::Tight),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn nucleolus_examples() {
        let g = g3sym();
        let third = payoff(&[(1, 3), (1, 3), (1, 3)]);
        for rule in [SingletonRule::All, SingletonRule::Tight] {
            assert!(verify_nucleolus(&g, &third, rule).unwrap().is_solution());
        }
        let corner = payoff(&[(1, 1), (0, 1), (0, 1)]);
        let t = verify_nucleolus(&g, &corner, SingletonRule::Tight).unwrap();
        assert_eq!(t.verdict, Verdict::NotSolution);
        assert_eq!(t.steps[0].balance.kind, BalanceKind::Unbalanced);
        assert!(t.header.iter().any(|h| h == "singleton_rule=tight"));

        let g2 = TuGame::from_table(2, vec![int(0), int(0), int(0), int(1)]).unwrap();
        let half = payoff(&[(1, 2), (1, 2)]);
        assert!(verify_nucleolus(&g2, &half, SingletonRule::Tight).unwrap().is_solution());
    }

    #[test]
    fn two_player_top_level_is_the_grand_coalition() {
        let g2 = TuGame::from_table(2, vec![int(0), int(0), int(0), int(1)]).unwrap();
        let t = verify_prenucleolus(&g2, &payoff(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(t.steps[0].collection, CoalitionCollection::new(2, [Coalition::grand(2)]).unwrap());
        assert_eq!(t.steps.len(), 2);
        assert!(t.is_solution());
    }
}
