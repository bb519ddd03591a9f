//! Exact rank and span routines.
//!
//! Two independent routes are provided for characteristic vectors:
//! [`mask_rank`] runs fraction-free (Bareiss) elimination over `i128`, while
//! [`SpanBasis`] maintains a reduced row echelon basis over `Ratio<i128>`.
//! Both are exact for 0/1 matrices with at most 16 columns: every Bareiss
//! intermediate is a minor bounded by Hadamard's `16^8 = 2^32`, and every
//! echelon entry is a ratio of two such minors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense rectangular matrix of rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("rows have inconsistent lengths"));
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    /// Stacked characteristic vectors, one row per mask.
    pub fn from_masks(masks: &[u32], n: usize) -> Self {
        let entries = masks
            .iter()
            .flat_map(|m| (0..n).map(move |i| Rational::from_integer(BigInt::from(m >> i & 1))))
            .collect();
        RationalMatrix {
            rows: masks.len(),
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Rank by fraction-free elimination after clearing each row's
    /// denominators.
    pub fn rank(&self) -> usize {
        let int_rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| (x * &l).to_integer()).collect()
            })
            .collect();
        bareiss_rank(int_rows).0
    }
}

/// Fraction-free Gaussian elimination. Returns the rank and the number of
/// entry updates performed.
pub fn bareiss_rank<T>(mut m: Vec<Vec<T>>) -> (usize, usize)
where
    T: Integer + Signed + Clone,
{
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = T::one();
    let mut steps = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in rank + 1..rows {
            let factor = m[i][col].clone();
            for j in col + 1..cols {
                let v = pivot.clone() * m[i][j].clone() - factor.clone() * m[rank][j].clone();
                m[i][j] = v / prev.clone();
                steps += 1;
            }
            m[i][col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    (rank, steps)
}

fn mask_rows(masks: &[u32], n: usize) -> Vec<Vec<i128>> {
    masks
        .iter()
        .map(|m| (0..n).map(|i| i128::from(m >> i & 1)).collect())
        .collect()
}

/// Rank of the characteristic vectors of `masks` over `n` players.
pub fn mask_rank(masks: &[u32], n: usize) -> usize {
    bareiss_rank(mask_rows(masks, n)).0
}

/// Whether `v` lies in the rational span of `basis`, decided by comparing
/// ranks.
pub fn mask_in_span(v: u32, basis: &[u32], n: usize) -> bool {
    let base = mask_rank(basis, n);
    let mut with = basis.to_vec();
    with.push(v);
    mask_rank(&with, n) == base
}

type Q = Ratio<i128>;

/// Incrementally maintained reduced row echelon basis of characteristic
/// vectors.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    n: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    steps: usize,
}

impl SpanBasis {
    pub fn new(n: usize) -> Self {
        SpanBasis {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
            steps: 0,
        }
    }

    pub fn from_masks(masks: impl IntoIterator<Item = u32>, n: usize) -> Self {
        let mut b = SpanBasis::new(n);
        for m in masks {
            b.insert(m);
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Row operations performed so far (one per eliminated entry).
    pub fn steps(&self) -> usize {
        self.steps
    }

    fn residual(&mut self, mask: u32) -> Vec<Q> {
        let mut v: Vec<Q> = (0..self.n)
            .map(|i| Q::from_integer(i128::from(mask >> i & 1)))
            .collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p];
            for j in 0..self.n {
                if !row[j].is_zero() {
                    v[j] -= f * row[j];
                    self.steps += 1;
                }
            }
        }
        v
    }

    pub fn contains(&mut self, mask: u32) -> bool {
        self.residual(mask).iter().all(Zero::is_zero)
    }

    /// Adds the vector; returns `true` when it raised the rank.
    pub fn insert(&mut self, mask: u32) -> bool {
        let mut v = self.residual(mask);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[p];
        for x in v.iter_mut() {
            *x /= lead;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p];
            for j in 0..self.n {
                if !v[j].is_zero() {
                    row[j] -= f * v[j];
                    self.steps += 1;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

/// Unique solution of `rows * x = rhs`, or `None` when the system is
/// inconsistent or underdetermined.
pub fn solve_unique(rows: &[Vec<Rational>], rhs: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let lead = a[rank][col].clone();
        for x in a[rank].iter_mut() {
            *x /= &lead;
        }
        let pivot_row = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    if a[rank..].iter().any(|r| !r[cols].is_zero()) || rank < cols {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = a[r][cols].clone();
    }
    Some(x)
}

/// `a . b` for rationals.
pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(mask_rank(&[0b011, 0b101, 0b110], 3), 3);
        assert_eq!(mask_rank(&[], 3), 0);
        assert_eq!(mask_rank(&[0b111, 0b111], 3), 1);
    }

    #[test]
    fn pair_matrix_determinant_is_minus_two() {
        // rows 110, 101, 011; cofactor expansion along the first row
        let m = [[1i128, 1, 0], [1, 0, 1], [0, 1, 1]];
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        assert_eq!(det, -2);
        let rows = m.iter().map(|r| r.to_vec()).collect();
        assert_eq!(bareiss_rank(rows).0, 3);
    }

    #[test]
    fn span_examples() {
        assert!(mask_in_span(0b111, &[0b011, 0b101, 0b110], 3));
        assert!(mask_in_span(0b010, &[0b010, 0b100], 3));
        // player 1 only vs {2,3}
        assert!(!mask_in_span(0b001, &[0b110], 3));
        let mut b = SpanBasis::from_masks([0b011, 0b101, 0b110], 3);
        assert!(b.contains(0b111));
        let mut b = SpanBasis::from_masks([0b110], 3);
        assert!(!b.contains(0b001));
    }

    #[test]
    fn rational_matrix_rank() {
        let m = RationalMatrix::from_rows(
            2,
            vec![
                vec![ratio(1, 2), ratio(1, 3)],
                vec![int(3), int(2)],
                vec![int(1), int(0)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        let m = RationalMatrix::from_rows(2, vec![vec![ratio(1, 2), ratio(1, 3)], vec![int(3), int(2)]]).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(RationalMatrix::new(2, 2, vec![int(1)]).is_err());
    }

    #[test]
    fn solve_unique_cases() {
        let rows = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        let x = solve_unique(&rows, &[int(3), int(1)], 2).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(solve_unique(&rows[..1], &[int(3)], 2).is_none());
        let bad = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(solve_unique(&bad, &[int(1), int(3)], 2).is_none());
    }

    fn masks_strategy() -> impl Strategy<Value = (usize, Vec<u32>)> {
        (1usize..=6).prop_flat_map(|n| {
            (Just(n), proptest::collection::vec(1u32..(1 << n), 0..12))
        })
    }

    proptest! {
        #[test]
        fn bareiss_and_echelon_agree((n, masks) in masks_strategy()) {
            let b = SpanBasis::from_masks(masks.iter().copied(), n);
            prop_assert_eq!(mask_rank(&masks, n), b.rank());
            prop_assert_eq!(RationalMatrix::from_masks(&masks, n).rank(), b.rank());
        }

        #[test]
        fn full_rank_iff_units_in_span((n, masks) in masks_strategy()) {
            let full = mask_rank(&masks, n) == n;
            let units = (0..n).all(|i| mask_in_span(1 << i, &masks, n));
            prop_assert_eq!(full, units);
            let mut b = SpanBasis::from_masks(masks.iter().copied(), n);
            prop_assert_eq!(full, (0..n).all(|i| b.contains(1 << i)));
        }

        #[test]
        fn span_routes_agree((n, masks) in masks_strategy(), v in 1u32..64) {
            let v = v & ((1 << n) - 1);
            prop_assume!(v != 0);
            let mut b = SpanBasis::from_masks(masks.iter().copied(), n);
            prop_assert_eq!(mask_in_span(v, &masks, n), b.contains(v));
        }
    }
}
