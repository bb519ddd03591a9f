//! Ground-truth pre-nucleolus and nucleolus by iterated exact LPs, and the
//! lexicographic improving direction derived from a rejection certificate.
//!
//! Round `r` minimizes `t` subject to efficiency, the equalities fixed in
//! earlier rounds, and `v(S) - x(S) <= t` for every coalition whose
//! characteristic vector is still independent of the fixed ones. Coalitions
//! whose constraint is tight in *every* optimal solution are then fixed at
//! `x(S) = v(S) - t*`. Once the fixed vectors span `R^n` the payoff is pinned.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    excess_table, is_preimputation, level_from_table, max_excess_outside, theta, Coalition,
    CoalitionCollection, Payoff, TuGame,
};
use crate::lp::linalg::{solve_unique, SpanBasis};
use crate::lp::simplex::{solve, LpOutcome, LpProblem, LpStatus};
use crate::rational::{max_abs, serialize_rational, serialize_rationals, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveRound {
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    /// Coalitions fixed in this round.
    pub fixed: CoalitionCollection,
    /// Players whose lower bound was fixed in this round (nucleolus only).
    pub fixed_bounds: Vec<usize>,
    /// `n` minus the rank of every fixed vector so far, including `1_N`.
    pub remaining_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveTrace {
    pub rounds: Vec<SolveRound>,
    pub result: Payoff,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImprovingDirection {
    #[serde(serialize_with = "serialize_rationals")]
    pub y: Vec<Rational>,
    #[serde(serialize_with = "serialize_rational")]
    pub delta_star: Rational,
    pub target: CoalitionCollection,
    /// `x + delta_star * y`.
    pub improved: Payoff,
}

/// Equality `x(S) = rhs` fixed by an earlier round.
struct Fixed {
    coalition: Coalition,
    rhs: Rational,
}

struct Scheme<'a> {
    game: &'a TuGame,
    order: Vec<Coalition>,
    lower_bounds: bool,
}

enum Candidate {
    Coalition(Coalition),
    Bound(usize),
}

impl Scheme<'_> {
    fn n(&self) -> usize {
        self.game.n()
    }

    fn singleton_worth(&self, i: usize) -> &Rational {
        self.game.worth(Coalition::singleton(i))
    }

    /// Variables: `x_0..x_{n-1}`, `t`, then `(u_S, q_S)` per active coalition
    /// and per open bound; the slack of each is `u + q` with `u in [0, 1]`.
    fn build(
        &self,
        fixed: &[Fixed],
        active: &[Coalition],
        open_bounds: &[usize],
        t_fixed: Option<&Rational>,
    ) -> LpProblem {
        let n = self.n();
        let t = n;
        let extra = active.len() + open_bounds.len();
        let mut p = LpProblem::new(n + 1 + 2 * extra);
        for i in 0..n {
            let lower = (self.lower_bounds && !open_bounds.contains(&i)).then(|| self.singleton_worth(i).clone());
            p.set_bounds(i, lower, None);
        }
        match t_fixed {
            Some(v) => p.set_bounds(t, Some(v.clone()), Some(v.clone())),
            None => p.set_bounds(t, None, None),
        }
        for k in 0..extra {
            let u = n + 1 + 2 * k;
            p.set_bounds(u, Some(Rational::zero()), Some(Rational::one()));
        }
        p.add_row((0..n).map(|i| (i, Rational::one())), self.game.grand_worth().clone());
        for f in fixed {
            p.add_row(f.coalition.players().map(|i| (i, Rational::one())), f.rhs.clone());
        }
        // x(S) + t - u_S - q_S = v(S)
        for (k, s) in active.iter().enumerate() {
            let u = n + 1 + 2 * k;
            let mut entries: Vec<(usize, Rational)> = s.players().map(|i| (i, Rational::one())).collect();
            entries.push((t, Rational::one()));
            entries.push((u, -Rational::one()));
            entries.push((u + 1, -Rational::one()));
            p.add_row(entries, self.game.worth(*s).clone());
        }
        // x_i - u_i - q_i = v({i})
        for (k, &i) in open_bounds.iter().enumerate() {
            let u = n + 1 + 2 * (active.len() + k);
            p.add_row(
                [(i, Rational::one()), (u, -Rational::one()), (u + 1, -Rational::one())],
                self.singleton_worth(i).clone(),
            );
        }
        p
    }

    fn optimal(out: LpOutcome, what: &str) -> Result<(Rational, Vec<Rational>)> {
        match out.status {
            LpStatus::Optimal => Ok((out.objective_value.expect("optimal"), out.solution.expect("optimal"))),
            s => Err(Error::Internal(format!("{what} LP ended {s:?}"))),
        }
    }

    fn run(&self) -> Result<(Payoff, SolveTrace)> {
        let n = self.n();
        let grand = Coalition::grand(n);
        let mut span = SpanBasis::from_masks([grand.mask()], n);
        let mut fixed: Vec<Fixed> = Vec::new();
        let mut fixed_bounds: Vec<usize> = Vec::new();
        let mut rounds = Vec::new();

        while span.rank() < n {
            let active: Vec<Coalition> = self
                .order
                .iter()
                .copied()
                .filter(|s| *s != grand && !span.contains(s.mask()))
                .collect();
            let open_bounds: Vec<usize> = if self.lower_bounds {
                (0..n).filter(|i| !fixed_bounds.contains(i)).collect()
            } else {
                Vec::new()
            };

            // minimize t
            let mut p = self.build(&fixed, &active, &[], None);
            p.objective[n] = -Rational::one();
            let (neg_t, _) = Self::optimal(solve(&p)?, "min-max-excess")?;
            let t_star = -neg_t;

            // find the candidates tight in every optimal solution
            let candidates: Vec<Candidate> = active
                .iter()
                .map(|s| Candidate::Coalition(*s))
                .chain(open_bounds.iter().map(|&i| Candidate::Bound(i)))
                .collect();
            let mut open: Vec<bool> = vec![true; candidates.len()];
            loop {
                let mut p = self.build(&fixed, &active, &open_bounds, Some(&t_star));
                for (k, o) in open.iter().enumerate() {
                    if *o {
                        p.objective[n + 1 + 2 * k] = Rational::one();
                    }
                }
                let (value, sol) = Self::optimal(solve(&p)?, "max-slack")?;
                if value.is_zero() {
                    break;
                }
                for (k, o) in open.iter_mut().enumerate() {
                    let slack = &sol[n + 1 + 2 * k] + &sol[n + 2 + 2 * k];
                    if slack.is_positive() {
                        *o = false;
                    }
                }
            }

            let mut fixed_now = Vec::new();
            let mut bounds_now = Vec::new();
            for (cand, o) in candidates.iter().zip(&open) {
                if !*o {
                    continue;
                }
                match *cand {
                    Candidate::Coalition(s) => {
                        fixed.push(Fixed {
                            coalition: s,
                            rhs: self.game.worth(s) - &t_star,
                        });
                        span.insert(s.mask());
                        fixed_now.push(s);
                    }
                    Candidate::Bound(i) => {
                        fixed.push(Fixed {
                            coalition: Coalition::singleton(i),
                            rhs: self.singleton_worth(i).clone(),
                        });
                        span.insert(Coalition::singleton(i).mask());
                        fixed_bounds.push(i);
                        bounds_now.push(i);
                    }
                }
            }
            if fixed_now.is_empty() {
                return Err(Error::Internal("a round fixed no coalition".into()));
            }
            fixed_now.sort_unstable();
            rounds.push(SolveRound {
                value: t_star,
                fixed: CoalitionCollection::new(n, fixed_now)?,
                fixed_bounds: bounds_now,
                remaining_dimension: n - span.rank(),
            });
        }

        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one(); n]];
        let mut rhs = vec![self.game.grand_worth().clone()];
        for f in &fixed {
            rows.push((0..n).map(|i| if f.coalition.contains(i) { Rational::one() } else { Rational::zero() }).collect());
            rhs.push(f.rhs.clone());
        }
        let x = solve_unique(&rows, &rhs, n)
            .ok_or_else(|| Error::Internal("fixed equalities do not pin a unique payoff".into()))?;
        let x = Payoff::new(x);
        Ok((
            x.clone(),
            SolveTrace {
                rounds,
                result: x,
            },
        ))
    }
}

fn default_order(game: &TuGame) -> Vec<Coalition> {
    game.coalitions().collect()
}

/// The pre-nucleolus.
pub fn prenucleolus(game: &TuGame) -> Result<(Payoff, SolveTrace)> {
    prenucleolus_ordered(game, &default_order(game))
}

/// The pre-nucleolus with LP rows laid out in the given coalition order.
/// `order` must list every nonempty coalition exactly once.
pub fn prenucleolus_ordered(game: &TuGame, order: &[Coalition]) -> Result<(Payoff, SolveTrace)> {
    check_order(game, order)?;
    Scheme {
        game,
        order: order.to_vec(),
        lower_bounds: false,
    }
    .run()
}

/// The nucleolus. Fails when the imputation set is empty.
pub fn nucleolus(game: &TuGame) -> Result<(Payoff, SolveTrace)> {
    if !game.has_imputations() {
        return Err(Error::domain("the imputation set is empty"));
    }
    Scheme {
        game,
        order: default_order(game),
        lower_bounds: true,
    }
    .run()
}

fn check_order(game: &TuGame, order: &[Coalition]) -> Result<()> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != default_order(game) {
        return Err(Error::domain("order must list every nonempty coalition once"));
    }
    Ok(())
}

fn coalition_sum(y: &[Rational], c: Coalition) -> Rational {
    c.players().map(|i| &y[i]).sum()
}

/// Builds `z = x + delta* y` with `theta(z) <_L theta(x)` from a rejection
/// certificate `y` for the level collection `unbalanced`.
pub fn improving_direction(
    game: &TuGame,
    x: &Payoff,
    unbalanced: &CoalitionCollection,
    farkas_y: &[Rational],
) -> Result<ImprovingDirection> {
    let n = game.n();
    if !is_preimputation(game, x) {
        return Err(Error::domain("payoff is not efficient"));
    }
    if farkas_y.len() != n {
        return Err(Error::domain("direction has the wrong length"));
    }
    if !farkas_y.iter().sum::<Rational>().is_zero() {
        return Err(Error::domain("direction must satisfy y(N) = 0"));
    }
    if unbalanced.iter().any(|s| coalition_sum(farkas_y, s).is_negative()) {
        return Err(Error::domain("direction must be non-negative on the collection"));
    }
    if !unbalanced.iter().any(|s| coalition_sum(farkas_y, s).is_positive()) {
        return Err(Error::domain("direction must be positive on some member"));
    }
    let table = excess_table(game, x)?;
    let psi = unbalanced
        .iter()
        .map(|s| &table[s.mask() as usize])
        .min()
        .ok_or_else(|| Error::domain("empty collection"))?
        .clone();
    if level_from_table(n, &table, &psi) != *unbalanced {
        return Err(Error::domain("collection is not an excess level set at this payoff"));
    }
    let next = max_excess_outside(&table, unbalanced)
        .ok_or_else(|| Error::domain("collection covers every coalition"))?;
    let gap = &psi - next;
    if !gap.is_positive() {
        return Err(Error::Internal("level gap is not positive".into()));
    }
    let sums: Vec<Rational> = game.coalitions().map(|s| coalition_sum(farkas_y, s)).collect();
    let scale = max_abs(&sums).max(Rational::one());
    let delta_star = gap / (Rational::from_integer(2.into()) * scale);
    let z = x.shifted(&delta_star, farkas_y);
    if theta(game, &z)?.lex_cmp(&theta(game, x)?)? != std::cmp::Ordering::Less {
        return Err(Error::Internal("direction failed to improve theta".into()));
    }
    Ok(ImprovingDirection {
        y: farkas_y.to_vec(),
        delta_star,
        target: unbalanced.clone(),
        improved: z,
    })
}
