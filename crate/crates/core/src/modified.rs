//! Span-pruned verification of the pre-nucleolus.
//!
//! Instead of testing the full level collection at each step, this verifier
//! keeps a pruned collection `D̂`. It starts as the top level collection. At
//! each later level only those new coalitions whose characteristic vectors lie
//! outside the span of the current `D̂` are added; the rest are dropped. `D̂`
//! must be balanced at every step, and the walk accepts once it has full rank.
//!
//! The step bookkeeping also classifies how `D̂` at the new level relates to
//! the full level collection at the previous one:
//!
//! | case | meaning |
//! |---|---|
//! | `I` | the previous full level is contained in the new `D̂` |
//! | `II` | neither contains the other (or they coincide otherwise) |
//! | `III` | the new `D̂` is a proper subset of the previous full level |

use serde::Serialize;

use crate::balance::{check_balanced, BalanceVerdict};
use crate::error::{Error, Result};
use crate::game::{
    excess_table, is_preimputation, level_from_table, max_excess_outside, CoalitionCollection,
    ExcessLevel, Payoff, TuGame,
};
use crate::kohlberg::{Rejection, Verdict};
use crate::lp::linalg::{mask_rank, SpanBasis};
use crate::rational::{serialize_opt_rational, serialize_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ContainmentCase {
    I,
    II,
    III,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModifiedStep {
    pub k: usize,
    /// Level the gap is measured from (absent at the first step).
    #[serde(serialize_with = "serialize_opt_rational")]
    pub anchor_psi: Option<Rational>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub eps_tilde: Option<Rational>,
    /// `anchor_psi - eps_tilde`, or the top excess at the first step.
    #[serde(serialize_with = "serialize_rational")]
    pub psi: Rational,
    pub d_hat: CoalitionCollection,
    pub added: CoalitionCollection,
    pub dropped: CoalitionCollection,
    pub balance: BalanceVerdict,
    pub rank_d_hat: usize,
    /// Rank of the full level collection at `psi`.
    pub rank_level: usize,
    pub case: Option<ContainmentCase>,
    /// Elimination steps spent on span membership at this step.
    #[serde(skip)]
    pub span_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModifiedTrace {
    pub method: String,
    pub steps: Vec<ModifiedStep>,
    pub verdict: Verdict,
    pub rejection: Option<Rejection>,
}

impl ModifiedTrace {
    pub fn is_solution(&self) -> bool {
        self.verdict == Verdict::IsSolution
    }
}

/// `psi` minus the largest excess outside `D(psi)`.
pub fn epsilon_tilde(game: &TuGame, x: &Payoff, psi: &ExcessLevel) -> Result<Rational> {
    let table = excess_table(game, x)?;
    let level = level_from_table(game.n(), &table, psi.value());
    if level.is_empty() {
        return Err(Error::domain(format!("no coalition has excess at least {psi}")));
    }
    let next = max_excess_outside(&table, &level)
        .ok_or_else(|| Error::domain("the level covers every coalition; there is no next level"))?;
    Ok(psi.value() - next)
}

/// Coalitions at level `psi - eps` that are not in `d_hat` and whose
/// characteristic vectors are outside the span of `d_hat`.
pub fn d_tilde(
    game: &TuGame,
    x: &Payoff,
    psi: &ExcessLevel,
    eps: &Rational,
    d_hat: &CoalitionCollection,
) -> Result<CoalitionCollection> {
    let table = excess_table(game, x)?;
    let top = level_from_table(game.n(), &table, psi.value());
    if !d_hat.is_subset_of(&top) {
        return Err(Error::domain("the pruned collection must lie inside the level collection"));
    }
    let lower = level_from_table(game.n(), &table, &(psi.value() - eps));
    let mut span = SpanBasis::from_masks(d_hat.masks(), game.n());
    Ok(prune(&lower, d_hat, &mut span))
}

fn prune(level: &CoalitionCollection, d_hat: &CoalitionCollection, span: &mut SpanBasis) -> CoalitionCollection {
    CoalitionCollection::from_sorted(
        level.n(),
        level
            .difference(d_hat)
            .iter()
            .filter(|s| !span.contains(s.mask()))
            .collect(),
    )
}

/// Union of disjoint collections.
pub fn d_hat_next(d_hat: &CoalitionCollection, d_tilde: &CoalitionCollection) -> Result<CoalitionCollection> {
    if !d_hat.is_disjoint(d_tilde) {
        return Err(Error::domain("the collections overlap"));
    }
    Ok(d_hat.union(d_tilde))
}

fn classify(previous_level: &CoalitionCollection, d_hat: &CoalitionCollection) -> ContainmentCase {
    if previous_level.is_subset_of(d_hat) {
        ContainmentCase::I
    } else if d_hat.is_subset_of(previous_level) && d_hat != previous_level {
        ContainmentCase::III
    } else {
        ContainmentCase::II
    }
}

/// Decides whether the pre-imputation `x` is the pre-nucleolus using the
/// span-pruned collections.
pub fn verify_prenucleolus_modified(game: &TuGame, x: &Payoff) -> Result<ModifiedTrace> {
    if !is_preimputation(game, x) {
        return Err(Error::domain("payoff is not efficient"));
    }
    let n = game.n();
    let table = excess_table(game, x)?;
    let empty = CoalitionCollection::empty(n);

    let psi0 = max_excess_outside(&table, &empty).expect("n >= 1");
    let mut level = level_from_table(n, &table, &psi0);
    let mut d_hat = level.clone();
    let mut span = SpanBasis::from_masks(d_hat.masks(), n);
    let mut step = ModifiedStep {
        k: 0,
        anchor_psi: None,
        eps_tilde: None,
        psi: psi0,
        d_hat: d_hat.clone(),
        added: d_hat.clone(),
        dropped: empty.clone(),
        balance: check_balanced(&d_hat)?,
        rank_d_hat: span.rank(),
        rank_level: span.rank(),
        case: None,
        span_steps: span.steps(),
    };
    let mut steps = Vec::new();
    for k in 1.. {
        let balanced = step.balance.is_balanced();
        let full = step.rank_d_hat == n;
        let rejection = (!balanced).then(|| Rejection {
            level: step.k,
            collection: step.d_hat.clone(),
            farkas_y: step.balance.farkas_y.clone(),
        });
        let anchor = step.psi.clone();
        steps.push(step);
        if !balanced || full {
            return Ok(ModifiedTrace {
                method: "modified".into(),
                steps,
                verdict: if balanced {
                    Verdict::IsSolution
                } else {
                    Verdict::NotSolution
                },
                rejection,
            });
        }

        let next = max_excess_outside(&table, &level)
            .ok_or_else(|| Error::Internal("pruned walk ran past every coalition".into()))?;
        let eps = &anchor - &next;
        let lower = level_from_table(n, &table, &next);
        let before = span.steps();
        let added = prune(&lower, &d_hat, &mut span);
        for s in added.iter() {
            span.insert(s.mask());
        }
        let span_steps = span.steps() - before;
        let new_coalitions = lower.difference(&level);
        let dropped = new_coalitions.difference(&added);
        let d_hat_k = d_hat_next(&d_hat, &added)?;
        let case = classify(&level, &d_hat_k);
        step = ModifiedStep {
            k,
            anchor_psi: Some(anchor),
            eps_tilde: Some(eps),
            psi: next,
            balance: check_balanced(&d_hat_k)?,
            rank_d_hat: span.rank(),
            rank_level: mask_rank(&lower.masks(), n),
            d_hat: d_hat_k.clone(),
            added,
            dropped,
            case: Some(case),
            span_steps,
        };
        d_hat = d_hat_k;
        level = lower;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::{collection, g3sym, payoff};
    use crate::rational::{int, ratio};

    fn third() -> Payoff {
        payoff(&[(1, 3), (1, 3), (1, 3)])
    }

    fn corner() -> Payoff {
        payoff(&[(1, 1), (0, 1), (0, 1)])
    }

    #[test]
    fn epsilon_tilde_examples() {
        let g = g3sym();
        assert_eq!(epsilon_tilde(&g, &third(), &ExcessLevel(ratio(1, 3))).unwrap(), ratio(1, 3));
        assert_eq!(epsilon_tilde(&g, &corner(), &ExcessLevel(int(1))).unwrap(), int(1));
        assert_eq!(epsilon_tilde(&g, &third(), &ExcessLevel(int(0))).unwrap(), ratio(1, 3));
        assert!(epsilon_tilde(&g, &third(), &ExcessLevel(int(-5))).is_err());
    }

    #[test]
    fn d_tilde_examples() {
        let g = g3sym();
        let pairs = collection(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        let out = d_tilde(&g, &third(), &ExcessLevel(ratio(1, 3)), &ratio(1, 3), &pairs).unwrap();
        assert!(out.is_empty());

        let empty = CoalitionCollection::empty(3);
        let out = d_tilde(&g, &third(), &ExcessLevel(ratio(1, 3)), &ratio(1, 3), &empty).unwrap();
        assert_eq!(out, collection(3, &[&[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]]));

        // excess-0 coalitions at (1,0,0) are {2}, {3}, {1,2}, {1,3}, N; e({1}) = -1
        let top = collection(3, &[&[2, 3]]);
        let out = d_tilde(&g, &corner(), &ExcessLevel(int(1)), &int(1), &top).unwrap();
        assert_eq!(out, collection(3, &[&[2], &[3], &[1, 2], &[1, 3], &[1, 2, 3]]));
    }

    #[test]
    fn d_hat_next_examples() {
        let top = collection(3, &[&[2, 3]]);
        let empty = CoalitionCollection::empty(3);
        assert_eq!(d_hat_next(&empty, &top).unwrap(), top);
        assert_eq!(d_hat_next(&top, &empty).unwrap(), top);
        let more = collection(3, &[&[1], &[1, 2], &[1, 3], &[1, 2, 3]]);
        assert_eq!(d_hat_next(&top, &more).unwrap().len(), 5);
        assert!(d_hat_next(&top, &top).is_err());
    }

    #[test]
    fn golden_traces() {
        let g = g3sym();
        let t = verify_prenucleolus_modified(&g, &third()).unwrap();
        assert_eq!(t.verdict, Verdict::IsSolution);
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].d_hat, collection(3, &[&[1, 2], &[1, 3], &[2, 3]]));
        assert_eq!(t.steps[0].rank_d_hat, 3);

        let t = verify_prenucleolus_modified(&g, &corner()).unwrap();
        assert_eq!(t.verdict, Verdict::NotSolution);
        let r = t.rejection.unwrap();
        assert_eq!(r.level, 0);
        assert_eq!(r.collection, collection(3, &[&[2, 3]]));
        assert_eq!(r.farkas_y.unwrap(), vec![int(-2), int(1), int(1)]);
    }

    #[test]
    fn one_player_game() {
        let g = TuGame::from_table(1, vec![int(0), int(2)]).unwrap();
        let t = verify_prenucleolus_modified(&g, &Payoff::new(vec![int(2)])).unwrap();
        assert!(t.is_solution());
        assert_eq!(t.steps.len(), 1);
    }

    #[test]
    fn two_player_walk_adds_both_singletons() {
        // D_0 = {N}; both singletons are outside span{1_N}
        let g = TuGame::from_table(2, vec![int(0), int(0), int(0), int(1)]).unwrap();
        let t = verify_prenucleolus_modified(&g, &payoff(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(t.steps.len(), 2);
        let s = &t.steps[1];
        assert_eq!(s.eps_tilde, Some(ratio(1, 2)));
        assert_eq!(s.added.len(), 2);
        assert!(s.dropped.is_empty());
        assert_eq!(s.case, Some(ContainmentCase::I));
        assert_eq!(s.rank_d_hat, s.rank_level);
        assert!(t.is_solution());
    }

    #[test]
    fn coalitions_in_the_span_are_dropped() {
        // excesses at (2,2,2): {1,2} and {3} at 2, N at 0, {1} and {2} at -2
        let g = TuGame::from_fn(3, |c| match c.mask() {
            0b011 => int(6),
            0b100 => int(4),
            0b111 => int(6),
            _ => int(0),
        })
        .unwrap();
        let x = Payoff::new(vec![int(2), int(2), int(2)]);
        let t = verify_prenucleolus_modified(&g, &x).unwrap();
        assert!(t.is_solution());
        assert_eq!(t.steps.len(), 3);
        assert_eq!(t.steps[0].d_hat, collection(3, &[&[1, 2], &[3]]));
        let s = &t.steps[1];
        assert!(s.added.is_empty());
        assert_eq!(s.dropped, collection(3, &[&[1, 2, 3]]));
        assert_eq!(s.case, Some(ContainmentCase::I));
        let s = &t.steps[2];
        assert_eq!(s.added, collection(3, &[&[1], &[2]]));
        assert_eq!(s.case, Some(ContainmentCase::II));
        assert!(t.steps.iter().all(|s| s.rank_d_hat == s.rank_level));
    }
}
