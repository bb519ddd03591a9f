//! Seeded random games, imputations and perturbations.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Coalition, Payoff, TuGame};
use crate::rational::{int, ratio, Rational};

/// Worth distribution for [`random_game`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dist {
    /// Every `v(S)` uniform on `lo..=hi`.
    UniformInt { lo: i64, hi: i64 },
    /// Singletons worth 0, `v(N)` uniform on `max(0, lo)..=hi`, other
    /// coalitions uniform on `lo..=hi`. The imputation set is never empty.
    ZeroNormalized { lo: i64, hi: i64 },
}

impl Dist {
    fn bounds(self) -> (i64, i64) {
        match self {
            Dist::UniformInt { lo, hi } | Dist::ZeroNormalized { lo, hi } => (lo, hi),
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::UniformInt { lo, hi } => write!(f, "uniform_int({lo},{hi})"),
            Dist::ZeroNormalized { lo, hi } => write!(f, "zero_normalized({lo},{hi})"),
        }
    }
}

impl FromStr for Dist {
    type Err = Error;

    /// `uniform_int(lo,hi)`, `zero_normalized(lo,hi)` or bare `zero_normalized`
    /// (bounds 0..=10).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "zero_normalized" {
            return Ok(Dist::ZeroNormalized { lo: 0, hi: 10 });
        }
        if s == "uniform_int" {
            return Ok(Dist::UniformInt { lo: -10, hi: 10 });
        }
        let bad = || Error::Config(format!("cannot parse distribution {s:?}"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let (lo, hi) = args.split_once(',').ok_or_else(bad)?;
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        match name.trim() {
            "uniform_int" => Ok(Dist::UniformInt { lo, hi }),
            "zero_normalized" => Ok(Dist::ZeroNormalized { lo, hi }),
            _ => Err(bad()),
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic for fixed `(n, seed, dist)`.
pub fn random_game(n: usize, seed: u64, dist: Dist) -> Result<TuGame> {
    let (lo, hi) = dist.bounds();
    if lo > hi {
        return Err(Error::Config(format!("empty range {lo}..={hi}")));
    }
    let mut rng = rng_from_seed(seed);
    let grand = Coalition::grand(n);
    TuGame::from_fn(n, |c| match dist {
        Dist::UniformInt { .. } => int(rng.gen_range(lo..=hi)),
        Dist::ZeroNormalized { .. } if c.is_singleton() => Rational::zero(),
        Dist::ZeroNormalized { .. } if c == grand => int(rng.gen_range(lo.max(0).min(hi)..=hi)),
        Dist::ZeroNormalized { .. } => int(rng.gen_range(lo..=hi)),
    })
}

/// `x + step (e_a - e_b)` for two distinct random players. Requires `n >= 2`.
pub fn perturb(x: &Payoff, step: &Rational, rng: &mut impl Rng) -> Result<Payoff> {
    let n = x.len();
    if n < 2 {
        return Err(Error::domain("perturbation needs at least two players"));
    }
    let players: Vec<usize> = (0..n).collect();
    let pair: Vec<usize> = players.choose_multiple(rng, 2).copied().collect();
    Ok(shift_pair(x, pair[0], pair[1], step))
}

fn shift_pair(x: &Payoff, to: usize, from: usize, step: &Rational) -> Payoff {
    let mut v = x.values().to_vec();
    v[to] += step;
    v[from] -= step;
    Payoff::new(v)
}

/// Like [`perturb`], but keeps `x` an imputation by taking from a player with
/// at least `step` of room above `v({i})`. When nobody has that much room the
/// step shrinks to the largest available room; `None` when there is none.
pub fn perturb_imputation(game: &TuGame, x: &Payoff, step: &Rational, rng: &mut impl Rng) -> Option<Payoff> {
    let n = game.n();
    if n < 2 {
        return None;
    }
    let room: Vec<Rational> = (0..n)
        .map(|i| &x[i] - game.worth(Coalition::singleton(i)))
        .collect();
    let donors: Vec<usize> = (0..n).filter(|&i| &room[i] >= step).collect();
    let (from, step) = if let Some(&d) = donors.choose(rng) {
        (d, step.clone())
    } else {
        let best = (0..n).max_by(|a, b| room[*a].cmp(&room[*b]))?;
        if room[best].is_zero() {
            return None;
        }
        (best, room[best].clone())
    };
    let others: Vec<usize> = (0..n).filter(|&i| i != from).collect();
    let to = *others.choose(rng)?;
    Some(shift_pair(x, to, from, &step))
}

/// An imputation with coordinates on a grid of step `1/denominator` above the
/// singleton worths. `None` when the imputation set is empty.
pub fn random_imputation(game: &TuGame, rng: &mut impl Rng) -> Option<Payoff> {
    if !game.has_imputations() {
        return None;
    }
    let n = game.n();
    let floor: Vec<Rational> = (0..n).map(|i| game.worth(Coalition::singleton(i)).clone()).collect();
    let surplus = game.grand_worth() - floor.iter().sum::<Rational>();
    // random point of the simplex: sorted cut points on 0..=den
    let den = 12 * n as i64;
    let mut cuts: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(0..=den)).collect();
    cuts.push(0);
    cuts.push(den);
    cuts.sort_unstable();
    Some(Payoff::new(
        (0..n)
            .map(|i| &floor[i] + &surplus * ratio(cuts[i + 1] - cuts[i], den))
            .collect(),
    ))
}

/// SplitMix64 finalizer, used to derive per-item seeds from a base seed.
pub fn mix_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_imputation;

    #[test]
    fn deterministic() {
        let d = Dist::UniformInt { lo: -10, hi: 10 };
        assert_eq!(random_game(3, 42, d).unwrap(), random_game(3, 42, d).unwrap());
        assert_ne!(random_game(3, 42, d).unwrap(), random_game(3, 43, d).unwrap());
    }

    #[test]
    fn zero_normalized_singletons() {
        let g = random_game(4, 7, Dist::ZeroNormalized { lo: -5, hi: 5 }).unwrap();
        assert!((0..4).all(|i| g.worth(Coalition::singleton(i)).is_zero()));
        assert!(g.has_imputations());
    }

    #[test]
    fn one_player_and_bad_range() {
        let g = random_game(1, 0, Dist::UniformInt { lo: 0, hi: 3 }).unwrap();
        assert_eq!(g.n(), 1);
        assert!(matches!(random_game(2, 0, Dist::UniformInt { lo: 3, hi: 0 }), Err(Error::Config(_))));
    }

    #[test]
    fn dist_parsing() {
        let d: Dist = "uniform_int(-10, 10)".parse().unwrap();
        assert_eq!(d, Dist::UniformInt { lo: -10, hi: 10 });
        assert_eq!(d.to_string().parse::<Dist>().unwrap(), d);
        assert!("gauss(0,1)".parse::<Dist>().is_err());
    }

    #[test]
    fn imputations_and_perturbations() {
        let mut rng = rng_from_seed(5);
        for seed in 0..20 {
            let g = random_game(4, seed, Dist::ZeroNormalized { lo: -3, hi: 6 }).unwrap();
            let x = random_imputation(&g, &mut rng).unwrap();
            assert!(is_imputation(&g, &x));
            if let Some(z) = perturb_imputation(&g, &x, &ratio(1, 7), &mut rng) {
                assert!(is_imputation(&g, &z));
                assert_ne!(z, x);
            }
            let z = perturb(&x, &ratio(1, 7), &mut rng).unwrap();
            assert_eq!(z.values().iter().sum::<Rational>(), x.values().iter().sum::<Rational>());
        }
    }
}
