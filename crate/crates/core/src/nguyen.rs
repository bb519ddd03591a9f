//! Replica of a published simplified nucleolus verifier that has been claimed
//! to make incorrect selections. It exists to search for inputs where its
//! verdict differs from [`crate::kohlberg::verify_nucleolus`].
//!
//! The procedure keeps a set `H` of characteristic vectors, seeded with `1_N`.
//! At step `k` it collects `T_k`, the coalitions of maximal excess among those
//! whose vectors lie outside `span(H)`. The union `T_1 ∪ … ∪ T_k` must be
//! `T_0`-balanced, where `T_0` holds the tight singletons; then `T_k` joins `H`.
//! The walk accepts once `H` spans `R^n`.
//!
//! The source does not pin down `T_0`-balancedness. The default reading is
//! weights `>= 0` on `T_0 ∪ Q` summing to `1_N`, strictly positive on `Q`;
//! [`T0Reading::Strict`] demands positive weights on `T_0` as well. The trace
//! header records the reading used.

use crate::balance::{check_balanced, check_balanced_relative, BalanceVerdict};
use crate::error::{Error, Result};
use crate::game::{excess_table, is_imputation, CoalitionCollection, Payoff, TuGame};
use crate::kohlberg::{tight_singletons, Rejection, Verdict, VerificationStep, VerificationTrace};
use crate::lp::linalg::SpanBasis;
use crate::rational::Rational;

pub const T0_READING: &str =
    "T0-balanced(Q): weights >= 0 on T0 ∪ Q with sum w_S 1_S = 1_N and w_S > 0 for S in Q";

pub const T0_READING_STRICT: &str = "T0-balanced(Q): T0 ∪ Q is balanced";

/// How the `T_0`-balancedness test is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum T0Reading {
    /// Tight singletons may take weight zero.
    #[default]
    Relative,
    /// Every member of `T_0 ∪ Q` needs positive weight.
    Strict,
}

impl T0Reading {
    pub fn description(self) -> &'static str {
        match self {
            T0Reading::Relative => T0_READING,
            T0Reading::Strict => T0_READING_STRICT,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NguyenState {
    h: SpanBasis,
    pub t0: CoalitionCollection,
    pub t_levels: Vec<CoalitionCollection>,
}

impl NguyenState {
    pub fn new(game: &TuGame, x: &Payoff) -> Result<Self> {
        let n = game.n();
        Ok(NguyenState {
            h: SpanBasis::from_masks([game.grand_coalition().mask()], n),
            t0: t0_init(game, x)?,
            t_levels: Vec::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.h.rank()
    }

    /// `T_1 ∪ … ∪ T_k`.
    pub fn union(&self) -> CoalitionCollection {
        self.t_levels
            .iter()
            .fold(CoalitionCollection::empty(self.t0.n()), |acc, t| acc.union(t))
    }

    fn extend(&mut self, t: CoalitionCollection) {
        for s in t.iter() {
            self.h.insert(s.mask());
        }
        self.t_levels.push(t);
    }
}

/// Singletons with `x_i = v({i})`.
pub fn t0_init(game: &TuGame, x: &Payoff) -> Result<CoalitionCollection> {
    if x.len() != game.n() {
        return Err(Error::domain("payoff length does not match the game"));
    }
    Ok(tight_singletons(game, x))
}

fn argmax_outside_span(game: &TuGame, table: &[Rational], state: &mut NguyenState) -> Result<(Rational, CoalitionCollection)> {
    let n = game.n();
    let mut best: Option<Rational> = None;
    let mut members = Vec::new();
    for c in game.coalitions() {
        if state.h.contains(c.mask()) {
            continue;
        }
        let e = &table[c.mask() as usize];
        match &best {
            Some(b) if e < b => {}
            Some(b) if e == b => members.push(c),
            _ => {
                best = Some(e.clone());
                members = vec![c];
            }
        }
    }
    let best = best.ok_or_else(|| Error::domain("span is already full; no next T"))?;
    Ok((best, CoalitionCollection::from_sorted(n, members)))
}

/// Coalitions of maximal excess among those outside `span(H)`.
pub fn next_t(game: &TuGame, x: &Payoff, state: &NguyenState) -> Result<CoalitionCollection> {
    let table = excess_table(game, x)?;
    let mut probe = state.clone();
    Ok(argmax_outside_span(game, &table, &mut probe)?.1)
}

fn t0_balance(q: &CoalitionCollection, t0: &CoalitionCollection, n: usize, reading: T0Reading) -> Result<BalanceVerdict> {
    if let Some(s) = t0.iter().find(|s| !s.is_singleton()) {
        return Err(Error::domain(format!("{s} in T0 is not a singleton")));
    }
    match reading {
        T0Reading::Relative => check_balanced_relative(n, q, t0),
        T0Reading::Strict => check_balanced(&q.union(t0)),
    }
}

pub fn is_t0_balanced(q: &CoalitionCollection, t0: &CoalitionCollection, n: usize) -> Result<bool> {
    Ok(t0_balance(q, t0, n, T0Reading::Relative)?.is_balanced())
}

/// Runs the simplified procedure on the imputation `x` under the default
/// reading.
pub fn verify_nucleolus_nguyen(game: &TuGame, x: &Payoff) -> Result<VerificationTrace> {
    verify_nucleolus_nguyen_with(game, x, T0Reading::Relative)
}

pub fn verify_nucleolus_nguyen_with(game: &TuGame, x: &Payoff, reading: T0Reading) -> Result<VerificationTrace> {
    if !is_imputation(game, x) {
        return Err(Error::domain("payoff is not an imputation"));
    }
    let n = game.n();
    let table = excess_table(game, x)?;
    let mut state = NguyenState::new(game, x)?;
    let header = vec![reading.description().to_string(), format!("T0={}", state.t0)];
    let mut steps = Vec::new();
    let mut k = 1;
    while state.rank() < n {
        let (psi, t_k) = argmax_outside_span(game, &table, &mut state)?;
        let q = state.union().union(&t_k);
        let balance = t0_balance(&q, &state.t0, n, reading)?;
        let ok = balance.is_balanced();
        let rejection = (!ok).then(|| Rejection {
            level: k,
            collection: q.clone(),
            farkas_y: balance.farkas_y.clone(),
        });
        if ok {
            state.extend(t_k.clone());
        }
        steps.push(VerificationStep {
            k,
            psi,
            collection: q,
            added: t_k,
            balance,
            rank: state.rank(),
        });
        if !ok {
            return Ok(VerificationTrace {
                method: "nguyen".into(),
                header,
                steps,
                verdict: Verdict::NotSolution,
                rejection,
            });
        }
        k += 1;
    }
    Ok(VerificationTrace {
        method: "nguyen".into(),
        header,
        steps,
        verdict: Verdict::IsSolution,
        rejection: None,
    })
}
