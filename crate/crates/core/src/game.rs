//! TU games, payoffs, coalitions and the excess machinery built on them.
//!
//! Players are indexed `0..n` internally and printed 1-based. A coalition is
//! an `n`-bit mask; a game stores a dense worth table of length `2^n` with the
//! empty coalition pinned at zero.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const MAX_PLAYERS: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_mask(mask: u32) -> Self {
        Coalition(mask)
    }

    /// Builds a coalition from 0-based player indices.
    pub fn from_players(players: impl IntoIterator<Item = usize>) -> Self {
        Coalition(players.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub const fn grand(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub const fn singleton(i: usize) -> Self {
        Coalition(1 << i)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn contains(self, player: usize) -> bool {
        self.0 >> player & 1 == 1
    }

    pub const fn is_singleton(self) -> bool {
        self.0.count_ones() == 1
    }

    pub const fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based member indices in ascending order.
    pub fn players(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask >> i & 1 == 1)
    }

    /// The 0/1 incidence vector over `n` players.
    pub fn characteristic_vector(self, n: usize) -> Vec<i64> {
        (0..n).map(|i| i64::from(self.contains(i))).collect()
    }

    pub(crate) fn fits(self, n: usize) -> bool {
        u64::from(self.0) < (1u64 << n)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.players().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        f.write_str("}")
    }
}

impl Serialize for Coalition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.players().map(|p| p + 1))
    }
}

/// Duplicate-free collection of nonempty coalitions in ascending mask order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoalitionCollection {
    n: usize,
    members: Vec<Coalition>,
}

impl CoalitionCollection {
    pub fn empty(n: usize) -> Self {
        CoalitionCollection {
            n,
            members: Vec::new(),
        }
    }

    /// Sorts and deduplicates; rejects empty coalitions and players `>= n`.
    pub fn new(n: usize, members: impl IntoIterator<Item = Coalition>) -> Result<Self> {
        let mut members: Vec<Coalition> = members.into_iter().collect();
        for c in &members {
            if c.is_empty() {
                return Err(Error::domain("collections hold nonempty coalitions only"));
            }
            if !c.fits(n) {
                return Err(Error::domain(format!("coalition {c} exceeds n = {n}")));
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(CoalitionCollection { n, members })
    }

    pub fn from_masks(n: usize, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        Self::new(n, masks.into_iter().map(Coalition::from_mask))
    }

    /// All `2^n - 1` nonempty coalitions.
    pub fn all(n: usize) -> Self {
        CoalitionCollection {
            n,
            members: (1..(1u32 << n)).map(Coalition).collect(),
        }
    }

    pub fn singletons(n: usize) -> Self {
        CoalitionCollection {
            n,
            members: (0..n).map(Coalition::singleton).collect(),
        }
    }

    /// Members must already be sorted and unique.
    pub(crate) fn from_sorted(n: usize, members: Vec<Coalition>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        CoalitionCollection { n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Coalition] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Coalition> + '_ {
        self.members.iter().copied()
    }

    pub fn masks(&self) -> Vec<u32> {
        self.members.iter().map(|c| c.mask()).collect()
    }

    pub fn contains(&self, c: Coalition) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    pub fn is_subset_of(&self, other: &CoalitionCollection) -> bool {
        self.members.iter().all(|c| other.contains(*c))
    }

    pub fn union(&self, other: &CoalitionCollection) -> CoalitionCollection {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        CoalitionCollection {
            n: self.n.max(other.n),
            members,
        }
    }

    pub fn difference(&self, other: &CoalitionCollection) -> CoalitionCollection {
        CoalitionCollection {
            n: self.n,
            members: self
                .members
                .iter()
                .copied()
                .filter(|c| !other.contains(*c))
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &CoalitionCollection) -> bool {
        self.members.iter().all(|c| !other.contains(*c))
    }
}

impl fmt::Display for CoalitionCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, c) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for CoalitionCollection {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.members.iter())
    }
}

/// A transferable-utility game with a dense worth table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TuGame {
    n: usize,
    worth: Vec<Rational>,
}

impl TuGame {
    /// `worth` is indexed by coalition mask and must have length `2^n` with
    /// `worth[0] = 0`.
    pub fn from_table(n: usize, worth: Vec<Rational>) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::domain(format!(
                "player count must lie in 1..={MAX_PLAYERS}, got {n}"
            )));
        }
        if worth.len() != 1 << n {
            return Err(Error::domain(format!(
                "worth table for n = {n} needs {} entries, got {}",
                1usize << n,
                worth.len()
            )));
        }
        if !worth[0].is_zero() {
            return Err(Error::domain("the empty coalition must be worth 0"));
        }
        Ok(TuGame { n, worth })
    }

    /// Builds a game by evaluating `f` on every nonempty coalition.
    pub fn from_fn(n: usize, mut f: impl FnMut(Coalition) -> Rational) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::domain(format!(
                "player count must lie in 1..={MAX_PLAYERS}, got {n}"
            )));
        }
        let worth = (0..1u32 << n)
            .map(|m| {
                if m == 0 {
                    Rational::zero()
                } else {
                    f(Coalition(m))
                }
            })
            .collect();
        Ok(TuGame { n, worth })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn worth(&self, c: Coalition) -> &Rational {
        &self.worth[c.mask() as usize]
    }

    pub fn worth_table(&self) -> &[Rational] {
        &self.worth
    }

    pub fn grand_worth(&self) -> &Rational {
        &self.worth[self.worth.len() - 1]
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    /// Nonempty coalitions in ascending mask order.
    pub fn coalitions(&self) -> impl Iterator<Item = Coalition> {
        (1..(1u32 << self.n)).map(Coalition)
    }

    /// `sum_i v({i}) <= v(N)`.
    pub fn has_imputations(&self) -> bool {
        let singles: Rational = (0..self.n)
            .map(|i| self.worth(Coalition::singleton(i)).clone())
            .sum();
        &singles <= self.grand_worth()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Payoff(Vec<Rational>);

impl Payoff {
    pub fn new(values: Vec<Rational>) -> Self {
        Payoff(values)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x(S)`.
    pub fn coalition_sum(&self, c: Coalition) -> Rational {
        c.players().map(|i| &self.0[i]).sum()
    }

    /// `x + delta * y`.
    pub fn shifted(&self, delta: &Rational, y: &[Rational]) -> Payoff {
        Payoff(
            self.0
                .iter()
                .zip(y)
                .map(|(a, b)| a + delta * b)
                .collect(),
        )
    }
}

impl std::ops::Index<usize> for Payoff {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Serialize for Payoff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::serialize_rationals(&self.0, s)
    }
}

/// An excess threshold `psi`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExcessLevel(pub Rational);

impl ExcessLevel {
    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for ExcessLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All `2^n - 1` excesses sorted non-increasingly. Ties are ordered by
/// ascending coalition mask in `provenance`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThetaVector {
    pub values: Vec<Rational>,
    pub provenance: Vec<Coalition>,
}

impl ThetaVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lex_cmp(&self, other: &ThetaVector) -> Result<Ordering> {
        lex_compare(&self.values, &other.values)
    }
}

fn check_len(game: &TuGame, x: &Payoff) -> Result<()> {
    if x.len() != game.n() {
        return Err(Error::domain(format!(
            "payoff has {} entries, game has {} players",
            x.len(),
            game.n()
        )));
    }
    Ok(())
}

/// `e(S, x) = v(S) - x(S)`.
pub fn excess(game: &TuGame, s: Coalition, x: &Payoff) -> Result<Rational> {
    check_len(game, x)?;
    if s.is_empty() {
        return Err(Error::domain("excess of the empty coalition is undefined"));
    }
    if !s.fits(game.n()) {
        return Err(Error::domain(format!("coalition {s} exceeds n = {}", game.n())));
    }
    Ok(game.worth(s) - x.coalition_sum(s))
}

/// Excess of every coalition, indexed by mask (entry 0 is 0).
pub fn excess_table(game: &TuGame, x: &Payoff) -> Result<Vec<Rational>> {
    check_len(game, x)?;
    let size = 1usize << game.n();
    let mut sums = vec![Rational::zero(); size];
    for m in 1..size {
        let low = m.trailing_zeros() as usize;
        sums[m] = &sums[m & (m - 1)] + &x[low];
    }
    Ok(game
        .worth_table()
        .iter()
        .zip(sums)
        .map(|(v, s)| v - s)
        .collect())
}

pub fn theta(game: &TuGame, x: &Payoff) -> Result<ThetaVector> {
    let table = excess_table(game, x)?;
    Ok(theta_from_table(&table))
}

pub(crate) fn theta_from_table(table: &[Rational]) -> ThetaVector {
    let mut order: Vec<u32> = (1..table.len() as u32).collect();
    // stable sort keeps ascending masks within ties
    order.sort_by(|a, b| table[*b as usize].cmp(&table[*a as usize]));
    ThetaVector {
        values: order.iter().map(|m| table[*m as usize].clone()).collect(),
        provenance: order.into_iter().map(Coalition).collect(),
    }
}

/// Lexicographic comparison of two equal-length vectors.
pub fn lex_compare(a: &[Rational], b: &[Rational]) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::domain(format!(
            "cannot compare vectors of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(p, q)| p.cmp(q))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal))
}

pub fn is_preimputation(game: &TuGame, x: &Payoff) -> bool {
    x.len() == game.n() && &x.values().iter().sum::<Rational>() == game.grand_worth()
}

pub fn is_imputation(game: &TuGame, x: &Payoff) -> bool {
    is_preimputation(game, x)
        && (0..game.n()).all(|i| &x[i] >= game.worth(Coalition::singleton(i)))
}

/// `D(psi, x)`: every nonempty coalition with excess at least `psi`.
pub fn level_collection(game: &TuGame, x: &Payoff, psi: &ExcessLevel) -> Result<CoalitionCollection> {
    let table = excess_table(game, x)?;
    Ok(level_from_table(game.n(), &table, psi.value()))
}

pub(crate) fn level_from_table(n: usize, table: &[Rational], psi: &Rational) -> CoalitionCollection {
    CoalitionCollection::from_sorted(
        n,
        (1..table.len() as u32)
            .filter(|m| &table[*m as usize] >= psi)
            .map(Coalition)
            .collect(),
    )
}

/// Largest excess among nonempty coalitions not in `excluded`.
pub(crate) fn max_excess_outside(table: &[Rational], excluded: &CoalitionCollection) -> Option<Rational> {
    (1..table.len() as u32)
        .filter(|m| !excluded.contains(Coalition(*m)))
        .map(|m| &table[m as usize])
        .max()
        .cloned()
}

/// Distinct excess values attained at `x`, strictly decreasing.
pub fn distinct_excess_levels(game: &TuGame, x: &Payoff) -> Result<Vec<ExcessLevel>> {
    let table = excess_table(game, x)?;
    let mut values: Vec<Rational> = table[1..].to_vec();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    Ok(values.into_iter().map(ExcessLevel).collect())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::rational::int;

    /// Three players, `v(S) = 1` for `|S| >= 2`, else 0.
    pub fn g3sym() -> TuGame {
        TuGame::from_fn(3, |c| int(i64::from(c.size() >= 2))).unwrap()
    }

    pub fn payoff(values: &[(i64, i64)]) -> Payoff {
        Payoff::new(
            values
                .iter()
                .map(|(p, q)| crate::rational::ratio(*p, *q))
                .collect(),
        )
    }

    pub fn coalition(players: &[usize]) -> Coalition {
        Coalition::from_players(players.iter().map(|p| p - 1))
    }

    pub fn collection(n: usize, sets: &[&[usize]]) -> CoalitionCollection {
        CoalitionCollection::new(n, sets.iter().map(|s| coalition(s))).unwrap()
    }
}
