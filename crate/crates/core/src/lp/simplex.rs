//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Problems are stated as
//!
//! ```text
//! maximize  c . w
//! subject   A w = b
//!           lower_j <= w_j <= upper_j     (either bound may be absent)
//! ```
//!
//! and internally rewritten into standard form `A' x = b', x >= 0`.
//!
//! Certificate conventions (all re-verified before [`solve`] returns):
//!
//! - **Optimal**: `duals = y` with `r = c - A^T y`; `r_j > 0` only where
//!   `upper_j` exists, `r_j < 0` only where `lower_j` exists, and
//!   `b.y + sum_{r_j>0} r_j upper_j + sum_{r_j<0} r_j lower_j = c.w`.
//! - **Infeasible**: `farkas = y` with `b.y > sup { (A^T y).w : lower <= w <= upper }`.
//!   For `w >= 0` this reads `A^T y <= 0` and `b.y > 0`.
//! - **Unbounded**: a feasible `w` and a ray `d` with `A d = 0`, `c.d > 0`,
//!   `d_j >= 0` where `lower_j` exists and `d_j <= 0` where `upper_j` exists.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::linalg::dot;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

impl LpProblem {
    /// `num_vars` variables with `w >= 0`, zero objective, no rows.
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
            rhs: Vec::new(),
            lower: vec![Some(Rational::zero()); num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Appends the row `sum coeff_j w_j = rhs` from sparse entries.
    pub fn add_row(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) {
        let mut row = vec![Rational::zero(); self.num_vars()];
        for (j, v) in entries {
            row[j] += v;
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::domain("bound vectors do not match the variable count"));
        }
        if self.rows.len() != self.rhs.len() {
            return Err(Error::domain("row count does not match right-hand side length"));
        }
        if let Some(r) = self.rows.iter().position(|r| r.len() != n) {
            return Err(Error::domain(format!("row {r} has the wrong length")));
        }
        for j in 0..n {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    return Err(Error::domain(format!("variable {j} has lower > upper")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Optimal point, or a feasible point when unbounded.
    pub solution: Option<Vec<Rational>>,
    pub objective_value: Option<Rational>,
    pub duals: Option<Vec<Rational>>,
    pub farkas: Option<Vec<Rational>>,
    pub ray: Option<Vec<Rational>>,
    pub pivots: usize,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Clone, Debug)]
enum VarMap {
    /// w = l + x
    Lower { col: usize, lower: Rational },
    /// w = l + x, x + s = u - l
    Boxed { col: usize, lower: Rational },
    /// w = u - x
    Upper { col: usize, upper: Rational },
    /// w = x+ - x-
    Free { pos: usize, neg: usize },
}

struct Tableau {
    /// rows of B^-1 [A' | I | b']
    rows: Vec<Vec<Rational>>,
    /// reduced costs, last entry is minus the objective value
    cost: Vec<Rational>,
    basis: Vec<usize>,
    num_struct: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.rows.first().map_or(self.cost.len() - 1, |r| r.len() - 1)
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.num_struct
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let lead = self.rows[r][e].clone();
        if !lead.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x /= &lead;
                }
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !self.cost[e].is_zero() {
            let f = self.cost[e].clone();
            for &j in &nz {
                self.cost[j] -= &f * &prow[j];
            }
        }
        self.basis[r] = e;
        self.pivots += 1;
    }

    fn set_costs(&mut self, c: &[Rational]) {
        let width = self.cost.len();
        let mut cost: Vec<Rational> = c.to_vec();
        cost.push(Rational::zero());
        debug_assert_eq!(cost.len(), width);
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            let cb = &c[b];
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    cost[j] -= cb * v;
                }
            }
        }
        self.cost = cost;
    }

    /// Bland's rule. `Ok(true)` on optimality, `Ok(false)` with the entering
    /// column stored in `unbounded_col` on unboundedness.
    fn optimize(&mut self, allow_artificial: bool, unbounded_col: &mut Option<usize>) -> bool {
        let rhs = self.rhs_col();
        loop {
            let entering = (0..rhs).find(|&j| {
                self.cost[j].is_positive() && (allow_artificial || !self.is_artificial(j))
            });
            let Some(e) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[e];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, e),
                None => {
                    *unbounded_col = Some(e);
                    return false;
                }
            }
        }
    }

    fn primal(&self) -> Vec<Rational> {
        let rhs = self.rhs_col();
        let mut x = vec![Rational::zero(); rhs];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rows[i][rhs].clone();
        }
        x
    }
}

/// Solves `problem` exactly. Every returned certificate has been re-verified.
pub fn solve(problem: &LpProblem) -> Result<LpOutcome> {
    problem.validate()?;
    let m = problem.rows.len();
    let nv = problem.num_vars();

    // standard form columns
    let mut maps = Vec::with_capacity(nv);
    let mut ncols = 0;
    let mut boxed = Vec::new();
    for j in 0..nv {
        let map = match (&problem.lower[j], &problem.upper[j]) {
            (Some(l), None) => VarMap::Lower {
                col: ncols,
                lower: l.clone(),
            },
            (Some(l), Some(_)) => {
                boxed.push(j);
                VarMap::Boxed {
                    col: ncols,
                    lower: l.clone(),
                }
            }
            (None, Some(u)) => VarMap::Upper {
                col: ncols,
                upper: u.clone(),
            },
            (None, None) => {
                ncols += 1;
                VarMap::Free {
                    pos: ncols - 1,
                    neg: ncols,
                }
            }
        };
        ncols += 1;
        maps.push(map);
    }
    let slack_base = ncols;
    ncols += boxed.len();
    let mrows = m + boxed.len();

    // A' and b'
    let mut a = vec![vec![Rational::zero(); ncols]; mrows];
    let mut b: Vec<Rational> = problem.rhs.clone();
    b.resize(mrows, Rational::zero());
    let mut c = vec![Rational::zero(); ncols];
    let mut c_offset = Rational::zero();
    for (j, map) in maps.iter().enumerate() {
        let cj = &problem.objective[j];
        match map {
            VarMap::Lower { col, lower } | VarMap::Boxed { col, lower } => {
                for i in 0..m {
                    let aij = &problem.rows[i][j];
                    if !aij.is_zero() {
                        a[i][*col] = aij.clone();
                        b[i] -= aij * lower;
                    }
                }
                c[*col] = cj.clone();
                c_offset += cj * lower;
            }
            VarMap::Upper { col, upper } => {
                for i in 0..m {
                    let aij = &problem.rows[i][j];
                    if !aij.is_zero() {
                        a[i][*col] = -aij.clone();
                        b[i] -= aij * upper;
                    }
                }
                c[*col] = -cj.clone();
                c_offset += cj * upper;
            }
            VarMap::Free { pos, neg } => {
                for i in 0..m {
                    let aij = &problem.rows[i][j];
                    if !aij.is_zero() {
                        a[i][*pos] = aij.clone();
                        a[i][*neg] = -aij.clone();
                    }
                }
                c[*pos] = cj.clone();
                c[*neg] = -cj.clone();
            }
        }
    }
    for (k, &j) in boxed.iter().enumerate() {
        let VarMap::Boxed { col, lower } = &maps[j] else {
            unreachable!()
        };
        let row = m + k;
        a[row][*col] = Rational::one();
        a[row][slack_base + k] = Rational::one();
        b[row] = problem.upper[j].as_ref().unwrap() - lower;
    }

    // nonnegative right-hand sides
    let mut sign = vec![Rational::one(); mrows];
    for i in 0..mrows {
        if b[i].is_negative() {
            sign[i] = -Rational::one();
            b[i] = -b[i].clone();
            for x in a[i].iter_mut() {
                if !x.is_zero() {
                    *x = -x.clone();
                }
            }
        }
    }

    // phase 1 tableau with one artificial per row
    let width = ncols + mrows + 1;
    let rows: Vec<Vec<Rational>> = (0..mrows)
        .map(|i| {
            let mut row = a[i].clone();
            row.resize(width, Rational::zero());
            row[ncols + i] = Rational::one();
            row[width - 1] = b[i].clone();
            row
        })
        .collect();
    let mut t = Tableau {
        rows,
        cost: vec![Rational::zero(); width],
        basis: (ncols..ncols + mrows).collect(),
        num_struct: ncols,
        pivots: 0,
    };
    let mut phase1 = vec![Rational::zero(); width - 1];
    for x in phase1[ncols..].iter_mut() {
        *x = -Rational::one();
    }
    t.set_costs(&phase1);
    let mut unb = None;
    t.optimize(true, &mut unb);
    debug_assert!(unb.is_none(), "phase 1 is bounded");

    let phase1_value = -t.cost[width - 1].clone();
    if phase1_value.is_negative() {
        // y_std_i = -1 - d_{a_i}; Farkas direction is its negation
        let y: Vec<Rational> = (0..m)
            .map(|i| (Rational::one() + &t.cost[ncols + i]) * &sign[i])
            .collect();
        let outcome = LpOutcome {
            status: LpStatus::Infeasible,
            solution: None,
            objective_value: None,
            duals: None,
            farkas: Some(y),
            ray: None,
            pivots: t.pivots,
        };
        if !verify_farkas(problem, outcome.farkas.as_ref().unwrap()) {
            return Err(Error::Internal("Farkas certificate failed to verify".into()));
        }
        return Ok(outcome);
    }

    // drive zero-level artificials out of the basis where possible
    for r in 0..mrows {
        if t.is_artificial(t.basis[r]) {
            if let Some(j) = (0..ncols).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, j);
            }
        }
    }

    let mut phase2 = c.clone();
    phase2.resize(width - 1, Rational::zero());
    t.set_costs(&phase2);
    let mut unb = None;
    let optimal = t.optimize(false, &mut unb);

    let x = t.primal();
    let to_original = |x: &[Rational], with_offset: bool| -> Vec<Rational> {
        maps.iter()
            .map(|map| match map {
                VarMap::Lower { col, lower } | VarMap::Boxed { col, lower } => {
                    if with_offset {
                        lower + &x[*col]
                    } else {
                        x[*col].clone()
                    }
                }
                VarMap::Upper { col, upper } => {
                    if with_offset {
                        upper - &x[*col]
                    } else {
                        -x[*col].clone()
                    }
                }
                VarMap::Free { pos, neg } => &x[*pos] - &x[*neg],
            })
            .collect()
    };
    let w = to_original(&x, true);

    if !optimal {
        let e = unb.unwrap();
        let rhs = t.rhs_col();
        let mut dx = vec![Rational::zero(); rhs];
        dx[e] = Rational::one();
        for (i, &bv) in t.basis.iter().enumerate() {
            dx[bv] = -t.rows[i][e].clone();
        }
        let d = to_original(&dx, false);
        if !verify_ray(problem, &w, &d) {
            return Err(Error::Internal("unbounded ray failed to verify".into()));
        }
        return Ok(LpOutcome {
            status: LpStatus::Unbounded,
            solution: Some(w),
            objective_value: None,
            duals: None,
            farkas: None,
            ray: Some(d),
            pivots: t.pivots,
        });
    }

    let value = -t.cost[width - 1].clone() + c_offset;
    // y_std_i = -d_{a_i} with zero artificial cost
    let y: Vec<Rational> = (0..m)
        .map(|i| -t.cost[ncols + i].clone() * &sign[i])
        .collect();
    if !verify_optimal(problem, &w, &y) {
        return Err(Error::Internal("optimality certificate failed to verify".into()));
    }
    Ok(LpOutcome {
        status: LpStatus::Optimal,
        solution: Some(w),
        objective_value: Some(value),
        duals: Some(y),
        farkas: None,
        ray: None,
        pivots: t.pivots,
    })
}

fn primal_feasible(p: &LpProblem, w: &[Rational]) -> bool {
    w.len() == p.num_vars()
        && p.rows.iter().zip(&p.rhs).all(|(r, b)| &dot(r, w) == b)
        && (0..w.len()).all(|j| {
            p.lower[j].as_ref().is_none_or(|l| &w[j] >= l)
                && p.upper[j].as_ref().is_none_or(|u| &w[j] <= u)
        })
}

fn reduced_costs(p: &LpProblem, y: &[Rational]) -> Vec<Rational> {
    (0..p.num_vars())
        .map(|j| {
            let col: Rational = p
                .rows
                .iter()
                .zip(y)
                .filter(|(r, yi)| !r[j].is_zero() && !yi.is_zero())
                .map(|(r, yi)| &r[j] * yi)
                .sum();
            &p.objective[j] - col
        })
        .collect()
}

/// Primal feasibility, dual feasibility and zero duality gap.
pub fn verify_optimal(p: &LpProblem, w: &[Rational], y: &[Rational]) -> bool {
    if !primal_feasible(p, w) || y.len() != p.rows.len() {
        return false;
    }
    let r = reduced_costs(p, y);
    let mut dual_value = dot(&p.rhs, y);
    for (j, rj) in r.iter().enumerate() {
        if rj.is_positive() {
            match &p.upper[j] {
                Some(u) => dual_value += rj * u,
                None => return false,
            }
        } else if rj.is_negative() {
            match &p.lower[j] {
                Some(l) => dual_value += rj * l,
                None => return false,
            }
        }
    }
    dual_value == dot(&p.objective, w)
}

/// `b.y` strictly exceeds the largest value `(A^T y).w` can take on the box.
pub fn verify_farkas(p: &LpProblem, y: &[Rational]) -> bool {
    if y.len() != p.rows.len() {
        return false;
    }
    // reuse reduced_costs with a zero objective: r = -A^T y
    let zero = LpProblem {
        objective: vec![Rational::zero(); p.num_vars()],
        ..p.clone()
    };
    let r: Vec<Rational> = reduced_costs(&zero, y).into_iter().map(|v| -v).collect();
    let mut sup = Rational::zero();
    for (j, rj) in r.iter().enumerate() {
        if rj.is_positive() {
            match &p.upper[j] {
                Some(u) => sup += rj * u,
                None => return false,
            }
        } else if rj.is_negative() {
            match &p.lower[j] {
                Some(l) => sup += rj * l,
                None => return false,
            }
        }
    }
    dot(&p.rhs, y) > sup
}

pub fn verify_ray(p: &LpProblem, w: &[Rational], d: &[Rational]) -> bool {
    primal_feasible(p, w)
        && d.len() == p.num_vars()
        && p.rows.iter().all(|r| dot(r, d).is_zero())
        && dot(&p.objective, d).is_positive()
        && (0..d.len()).all(|j| {
            (p.lower[j].is_none() || !d[j].is_negative())
                && (p.upper[j].is_none() || !d[j].is_positive())
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn symmetric_max_min() {
        // max t s.t. w1 + w2 = 1, w1 - t - s1 = 0, w2 - t - s2 = 0
        // vars: w1 w2 t s1 s2
        let mut p = LpProblem::new(5);
        p.objective[2] = int(1);
        p.set_bounds(2, None, None);
        p.add_row([(0, int(1)), (1, int(1))], int(1));
        p.add_row([(0, int(1)), (2, int(-1)), (3, int(-1))], int(0));
        p.add_row([(1, int(1)), (2, int(-1)), (4, int(-1))], int(0));
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective_value, Some(ratio(1, 2)));
        let w = out.solution.unwrap();
        assert_eq!(&w[..3], &[ratio(1, 2), ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn nonnegative_sum_cannot_be_negative() {
        let mut p = LpProblem::new(3);
        p.add_row((0..3).map(|j| (j, int(1))), int(-1));
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        let y = out.farkas.unwrap();
        // A^T y <= 0 and b.y > 0
        assert!(y[0].is_negative());
    }

    #[test]
    fn unbounded_without_rows() {
        let mut p = LpProblem::new(1);
        p.objective[0] = int(1);
        let out = solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Unbounded);
        assert!(out.ray.unwrap()[0].is_positive());
    }

    #[test]
    fn malformed_problems_are_rejected() {
        let mut p = LpProblem::new(2);
        p.rows.push(vec![int(1)]);
        p.rhs.push(int(0));
        assert!(matches!(solve(&p), Err(Error::Domain(_))));
        let mut p = LpProblem::new(1);
        p.set_bounds(0, Some(int(2)), Some(int(1)));
        assert!(matches!(solve(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn boxed_and_upper_bounded_variables() {
        // max w0 - w1, w0 + w1 = 1, w0 in [-2, 3/4], w1 <= 5 (free below)
        let mut p = LpProblem::new(2);
        p.objective = vec![int(1), int(-1)];
        p.set_bounds(0, Some(int(-2)), Some(ratio(3, 4)));
        p.set_bounds(1, None, Some(int(5)));
        p.add_row([(0, int(1)), (1, int(1))], int(1));
        let out = solve(&p).unwrap();
        assert_eq!(out.objective_value, Some(ratio(1, 2)));
        assert_eq!(out.solution.unwrap(), vec![ratio(3, 4), ratio(1, 4)]);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let mut p = LpProblem::new(2);
        p.objective = vec![int(1), int(0)];
        p.add_row([(0, int(1)), (1, int(1))], int(2));
        p.add_row([(0, int(2)), (1, int(2))], int(4));
        let out = solve(&p).unwrap();
        assert_eq!(out.objective_value, Some(int(2)));
    }

    fn binomial_saturating(n: usize, k: usize) -> u128 {
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        }
        acc
    }

    /// Brute-force optimum over all basic solutions of a tiny `w >= 0` problem.
    fn brute_force_optimum(p: &LpProblem) -> Option<Rational> {
        let n = p.num_vars();
        let m = p.rows.len();
        let mut best: Option<Rational> = None;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize > m {
                continue;
            }
            let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            let sub: Vec<Vec<Rational>> = p
                .rows
                .iter()
                .map(|r| cols.iter().map(|&j| r[j].clone()).collect())
                .collect();
            let Some(xs) = crate::lp::linalg::solve_unique(&sub, &p.rhs, cols.len()) else {
                continue;
            };
            if xs.iter().any(|v| v.is_negative()) {
                continue;
            }
            let val: Rational = cols.iter().zip(&xs).map(|(&j, v)| &p.objective[j] * v).sum();
            if best.as_ref().is_none_or(|b| &val > b) {
                best = Some(val);
            }
        }
        best
    }

    proptest! {
        #[test]
        fn certificates_verify_and_match_brute_force(
            nv in 1usize..5,
            m in 1usize..4,
            coeffs in proptest::collection::vec(-3i64..=3, 20),
            rhs in proptest::collection::vec(-3i64..=3, 4),
            obj in proptest::collection::vec(-3i64..=3, 5),
        ) {
            let mut p = LpProblem::new(nv);
            p.objective = obj[..nv].iter().map(|v| int(*v)).collect();
            for i in 0..m {
                p.add_row((0..nv).map(|j| (j, int(coeffs[i * nv + j]))), int(rhs[i]));
            }
            // keep it bounded: sum w <= 10 via a slack
            let mut q = LpProblem::new(nv + 1);
            q.objective[..nv].clone_from_slice(&p.objective);
            for (r, b) in p.rows.iter().zip(&p.rhs) {
                let mut row = r.clone();
                row.push(int(0));
                q.rows.push(row);
                q.rhs.push(b.clone());
            }
            q.add_row((0..=nv).map(|j| (j, int(1))), int(10));

            let out = solve(&q).unwrap();
            let bound = binomial_saturating(q.num_vars() + q.rows.len() * 2, q.rows.len());
            prop_assert!((out.pivots as u128) <= bound);
            let brute = brute_force_optimum(&q);
            match out.status {
                LpStatus::Optimal => {
                    prop_assert!(verify_optimal(&q, out.solution.as_ref().unwrap(), out.duals.as_ref().unwrap()));
                    prop_assert_eq!(out.objective_value, brute);
                }
                LpStatus::Infeasible => {
                    prop_assert!(verify_farkas(&q, out.farkas.as_ref().unwrap()));
                    prop_assert!(brute.is_none());
                }
                LpStatus::Unbounded => prop_assert!(false, "bounded by construction"),
            }

            // free variables: the unbounded/infeasible/optimal certificates still verify
            let mut f = p.clone();
            for j in 0..nv { f.set_bounds(j, None, Some(int(4))); }
            let out = solve(&f).unwrap();
            match out.status {
                LpStatus::Optimal => prop_assert!(verify_optimal(&f, out.solution.as_ref().unwrap(), out.duals.as_ref().unwrap())),
                LpStatus::Infeasible => prop_assert!(verify_farkas(&f, out.farkas.as_ref().unwrap())),
                LpStatus::Unbounded => prop_assert!(verify_ray(&f, out.solution.as_ref().unwrap(), out.ray.as_ref().unwrap())),
            }
        }
    }
}
