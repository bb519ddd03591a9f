//! Balanced collections and the two dual characterizations of balancedness.
//!
//! A collection `C` over `N` is *balanced* when some strictly positive weights
//! satisfy `sum_S w_S 1_S = 1_N`, and *weakly balanced* when non-negative
//! weights do. The same question relative to a set of optional coalitions
//! (weights only `>= 0`) underlies the nucleolus test, so everything here is
//! phrased in terms of a *required* part and an *optional* part.
//!
//! Three independent exact routes decide strict balancedness:
//!
//! | entry point | route |
//! |---|---|
//! | [`check_balanced`] | one LP: maximize a common lower bound `t` on the required weights |
//! | [`property_i`] | cone LP: can some `y` with `y(N) = 0` be `>= 0` on `C` and `> 0` on a required member? |
//! | [`property_ii`] | one LP per required coalition maximizing its own weight, then averaging |
//!
//! Every certificate is re-verified by substitution before it is returned.

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{Coalition, CoalitionCollection};
use crate::lp::linalg::{solve_unique, SpanBasis};
use crate::lp::simplex::{solve, LpOutcome, LpProblem, LpStatus};
use crate::rational::{primitive_integer_multiple, serialize_opt_rationals, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BalanceKind {
    Balanced,
    WeaklyBalancedOnly,
    Unbalanced,
}

/// Weights as `(coalition, weight)` pairs in ascending coalition order.
pub type Weights = Vec<(Coalition, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceVerdict {
    pub kind: BalanceKind,
    #[serde(serialize_with = "serialize_weights")]
    pub weights: Option<Weights>,
    /// `y(S) >= 0` on the collection, `y(N) = 0`, `y(S) > 0` on some required
    /// member. Primitive integer vector. Present unless `Balanced`.
    #[serde(serialize_with = "serialize_opt_rationals")]
    pub farkas_y: Option<Vec<Rational>>,
    /// `y(S) >= 0` on the collection and `y(N) < 0`. Present when `Unbalanced`.
    #[serde(serialize_with = "serialize_opt_rationals")]
    pub weak_farkas_y: Option<Vec<Rational>>,
    /// Simplex pivots spent deciding the verdict.
    #[serde(skip)]
    pub lp_pivots: usize,
}

impl BalanceVerdict {
    pub fn is_balanced(&self) -> bool {
        self.kind == BalanceKind::Balanced
    }

    pub fn weight_of(&self, c: Coalition) -> Option<&Rational> {
        self.weights
            .as_ref()?
            .iter()
            .find(|(s, _)| *s == c)
            .map(|(_, w)| w)
    }
}

fn serialize_weights<S: Serializer>(w: &Option<Weights>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        coalition: Coalition,
        #[serde(serialize_with = "crate::rational::serialize_rational")]
        weight: &'a Rational,
    }
    w.as_ref()
        .map(|ws| {
            ws.iter()
                .map(|(c, w)| Entry {
                    coalition: *c,
                    weight: w,
                })
                .collect::<Vec<_>>()
        })
        .serialize(s)
}

/// Outcome of a property test: whether it holds, and the certificate for
/// whichever side was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub holds: bool,
    pub weights: Option<Weights>,
    pub witness: Option<Vec<Rational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyMode {
    /// Cone form: no `y >= 0` on the collection with `y(N) = 0` is positive on a required member.
    I,
    /// Weight form: weights `>= 0` on the collection, `> 0` on required members.
    II,
}

/// A required/optional split of a coalition collection over `n` players.
#[derive(Clone, Debug)]
struct System {
    n: usize,
    required: Vec<Coalition>,
    optional: Vec<Coalition>,
}

impl System {
    fn new(n: usize, required: &[Coalition], optional: &[Coalition]) -> Result<Self> {
        if required.is_empty() {
            return Err(Error::domain("balancedness needs a nonempty collection"));
        }
        let optional: Vec<Coalition> = optional
            .iter()
            .copied()
            .filter(|c| !required.contains(c))
            .collect();
        Ok(System {
            n,
            required: required.to_vec(),
            optional,
        })
    }

    fn all(&self) -> impl Iterator<Item = Coalition> + '_ {
        self.required.iter().chain(&self.optional).copied()
    }

    fn sorted_weights(&self, w: impl IntoIterator<Item = Rational>) -> Weights {
        let mut out: Weights = self.all().zip(w).collect();
        out.sort_by_key(|(c, _)| *c);
        out
    }

    /// One row per player: `sum_{S ∋ i} w_S = 1` over the listed columns.
    fn cover_rows(&self, p: &mut LpProblem, cols: &[(Coalition, usize)]) {
        for i in 0..self.n {
            let entries: Vec<(usize, Rational)> = cols
                .iter()
                .filter(|(c, _)| c.contains(i))
                .map(|(_, j)| (*j, Rational::one()))
                .collect();
            p.add_row(entries, Rational::one());
        }
    }

    fn coalition_sum(y: &[Rational], c: Coalition) -> Rational {
        c.players().map(|i| &y[i]).sum()
    }

    fn check_weights(&self, w: &Weights, strict: bool) -> bool {
        let mut cover = vec![Rational::zero(); self.n];
        for (c, wc) in w {
            if wc.is_negative() || (strict && wc.is_zero() && self.required.contains(c)) {
                return false;
            }
            for i in c.players() {
                cover[i] += wc;
            }
        }
        cover.iter().all(One::is_one) && w.len() == self.required.len() + self.optional.len()
    }

    /// `y(S) >= 0` on every member, `y(N) = 0`, positive on some required member.
    fn check_cone_witness(&self, y: &[Rational]) -> bool {
        y.len() == self.n
            && y.iter().sum::<Rational>().is_zero()
            && self.all().all(|c| !Self::coalition_sum(y, c).is_negative())
            && self
                .required
                .iter()
                .any(|c| Self::coalition_sum(y, *c).is_positive())
    }

    fn check_weak_witness(&self, y: &[Rational]) -> bool {
        y.len() == self.n
            && y.iter().sum::<Rational>().is_negative()
            && self.all().all(|c| !Self::coalition_sum(y, c).is_negative())
    }

    /// maximize `t` s.t. `sum_R (t + s_S) 1_S + sum_O w_S 1_S = 1_N`,
    /// `0 <= t <= 1`, `s, w >= 0`.
    fn max_common_lower_bound(&self) -> Result<LpOutcome> {
        let r = self.required.len();
        let o = self.optional.len();
        let mut p = LpProblem::new(1 + r + o);
        p.objective[0] = Rational::one();
        p.set_bounds(0, Some(Rational::zero()), Some(Rational::one()));
        for i in 0..self.n {
            let mut entries = Vec::new();
            let t_coeff = self.required.iter().filter(|c| c.contains(i)).count();
            if t_coeff > 0 {
                entries.push((0, Rational::from_integer(t_coeff.into())));
            }
            for (k, c) in self.all().enumerate() {
                if c.contains(i) {
                    entries.push((1 + k, Rational::one()));
                }
            }
            p.add_row(entries, Rational::one());
        }
        solve(&p)
    }

    /// Feasibility of `sum w_S 1_S = 1_N`, `w >= 0`.
    fn weak_system(&self) -> Result<LpOutcome> {
        let cols: Vec<(Coalition, usize)> = self.all().enumerate().map(|(j, c)| (c, j)).collect();
        let mut p = LpProblem::new(cols.len());
        self.cover_rows(&mut p, &cols);
        solve(&p)
    }

    /// maximize `sum_{S in target} y(S)` over `y(S) >= 0` on all members,
    /// `y(N) = 0`, `y in [-1, 1]^n`.
    fn cone_lp(&self, target: &[Coalition]) -> Result<LpOutcome> {
        let members: Vec<Coalition> = self.all().collect();
        let n = self.n;
        let mut p = LpProblem::new(n + members.len());
        for i in 0..n {
            p.set_bounds(i, Some(-Rational::one()), Some(Rational::one()));
        }
        for (k, c) in members.iter().enumerate() {
            let mut entries: Vec<(usize, Rational)> = c.players().map(|i| (i, Rational::one())).collect();
            entries.push((n + k, -Rational::one()));
            p.add_row(entries, Rational::zero());
        }
        p.add_row((0..n).map(|i| (i, Rational::one())), Rational::zero());
        for c in target {
            for i in c.players() {
                p.objective[i] += Rational::one();
            }
        }
        solve(&p)
    }

    /// A canonical cone witness: positive on every member that can be made
    /// positive at all, then projected so the remaining members and `N` sit
    /// at exactly zero, scaled to a primitive integer vector.
    fn canonical_witness(&self) -> Result<(Option<Vec<Rational>>, usize)> {
        let mut pivots = 0;
        let mut remaining: Vec<Coalition> = self.all().collect();
        let mut y_sum = vec![Rational::zero(); self.n];
        loop {
            let out = self.cone_lp(&remaining)?;
            pivots += out.pivots;
            let value = out.objective_value.clone().ok_or_else(|| {
                Error::Internal("cone LP is always feasible and bounded".into())
            })?;
            if value.is_zero() {
                break;
            }
            let y = out.solution.expect("optimal LP has a solution");
            let y = y[..self.n].to_vec();
            remaining.retain(|c| !Self::coalition_sum(&y, *c).is_positive());
            for (a, b) in y_sum.iter_mut().zip(&y) {
                *a += b;
            }
        }
        let positive: Vec<Coalition> = self.all().filter(|c| !remaining.contains(c)).collect();
        if !positive.iter().any(|c| self.required.contains(c)) {
            return Ok((None, pivots));
        }

        let mut g = vec![Rational::zero(); self.n];
        for c in &positive {
            for i in c.players() {
                g[i] += Rational::one();
            }
        }
        let candidate = project_out(self.n, &g, remaining.iter().copied().chain([Coalition::grand(self.n)]));
        let y = match candidate {
            Some(p) if positive.iter().all(|c| Self::coalition_sum(&p, *c).is_positive()) => p,
            _ => y_sum,
        };
        let y = primitive_integer_multiple(&y);
        if !self.check_cone_witness(&y) {
            return Err(Error::Internal("cone witness failed to verify".into()));
        }
        Ok((Some(y), pivots))
    }

    /// Required weights strictly positive, optional weights non-negative.
    fn decide(&self) -> Result<BalanceVerdict> {
        let out = self.max_common_lower_bound()?;
        let mut pivots = out.pivots;
        match out.status {
            LpStatus::Optimal if out.objective_value.as_ref().is_some_and(|t| t.is_positive()) => {
                let sol = out.solution.expect("optimal LP has a solution");
                let t = &sol[0];
                let r = self.required.len();
                let w = sol[1..]
                    .iter()
                    .enumerate()
                    .map(|(k, v)| if k < r { t + v } else { v.clone() });
                let weights = self.sorted_weights(w);
                if !self.check_weights(&weights, true) {
                    return Err(Error::Internal("balancing weights failed to verify".into()));
                }
                Ok(BalanceVerdict {
                    kind: BalanceKind::Balanced,
                    weights: Some(weights),
                    farkas_y: None,
                    weak_farkas_y: None,
                    lp_pivots: pivots,
                })
            }
            LpStatus::Optimal => {
                let sol = out.solution.expect("optimal LP has a solution");
                let weights = self.sorted_weights(sol[1..].iter().cloned());
                if !self.check_weights(&weights, false) {
                    return Err(Error::Internal("weak weights failed to verify".into()));
                }
                let (y, p) = self.canonical_witness()?;
                pivots += p;
                let y = y.ok_or_else(|| Error::Internal("no cone witness for a non-balanced system".into()))?;
                Ok(BalanceVerdict {
                    kind: BalanceKind::WeaklyBalancedOnly,
                    weights: Some(weights),
                    farkas_y: Some(y),
                    weak_farkas_y: None,
                    lp_pivots: pivots,
                })
            }
            LpStatus::Infeasible => {
                let weak = self.weak_system()?;
                pivots += weak.pivots;
                if weak.status != LpStatus::Infeasible {
                    return Err(Error::Internal("weak system feasible but the bounded one is not".into()));
                }
                let (y, p) = self.canonical_witness()?;
                pivots += p;
                let y = y.ok_or_else(|| Error::Internal("no cone witness for an unbalanced system".into()))?;
                let weak_y = self.weak_witness(weak)?;
                Ok(BalanceVerdict {
                    kind: BalanceKind::Unbalanced,
                    weights: None,
                    farkas_y: Some(y),
                    weak_farkas_y: Some(weak_y),
                    lp_pivots: pivots,
                })
            }
            LpStatus::Unbounded => Err(Error::Internal("bounded LP reported unbounded".into())),
        }
    }

    /// The simplex certificate has `y(S) <= 0` on members and `y(N) > 0`;
    /// negate it.
    fn weak_witness(&self, out: LpOutcome) -> Result<Vec<Rational>> {
        let y: Vec<Rational> = out
            .farkas
            .ok_or_else(|| Error::Internal("infeasible LP without certificate".into()))?
            .into_iter()
            .map(|v| -v)
            .collect();
        let y = primitive_integer_multiple(&y);
        if !self.check_weak_witness(&y) {
            return Err(Error::Internal("weak Farkas certificate failed to verify".into()));
        }
        Ok(y)
    }
}

/// Orthogonal projection of `g` onto `{y : y(T) = 0 for every listed T}`.
fn project_out(n: usize, g: &[Rational], constraints: impl IntoIterator<Item = Coalition>) -> Option<Vec<Rational>> {
    let mut basis = SpanBasis::new(n);
    let independent: Vec<Coalition> = constraints.into_iter().filter(|c| basis.insert(c.mask())).collect();
    let k = independent.len();
    // Gram system (B B^T) lambda = B g
    let gram: Vec<Vec<Rational>> = independent
        .iter()
        .map(|a| {
            independent
                .iter()
                .map(|b| Rational::from_integer((a.mask() & b.mask()).count_ones().into()))
                .collect()
        })
        .collect();
    let bg: Vec<Rational> = independent.iter().map(|c| System::coalition_sum(g, *c)).collect();
    let lambda = solve_unique(&gram, &bg, k)?;
    let mut p = g.to_vec();
    for (c, l) in independent.iter().zip(&lambda) {
        for i in c.players() {
            p[i] -= l;
        }
    }
    Some(p)
}

fn check_collection(c: &CoalitionCollection) -> Result<()> {
    if c.is_empty() {
        return Err(Error::domain("balancedness of an empty collection is undefined"));
    }
    Ok(())
}

/// Strict balancedness via one LP maximizing a common lower bound on the
/// weights. `WeaklyBalancedOnly` and `Unbalanced` are told apart by solving
/// the weak system.
pub fn check_balanced(c: &CoalitionCollection) -> Result<BalanceVerdict> {
    check_collection(c)?;
    System::new(c.n(), c.members(), &[])?.decide()
}

/// Weak balancedness: weights `>= 0`. The verdict still reports whether the
/// collection is balanced outright.
pub fn check_weakly_balanced(c: &CoalitionCollection) -> Result<BalanceVerdict> {
    check_collection(c)?;
    let sys = System::new(c.n(), c.members(), &[])?;
    let weak = sys.weak_system()?;
    match weak.status {
        LpStatus::Infeasible => {
            let mut pivots = weak.pivots;
            let weak_y = sys.weak_witness(weak)?;
            let (y, p) = sys.canonical_witness()?;
            pivots += p;
            Ok(BalanceVerdict {
                kind: BalanceKind::Unbalanced,
                weights: None,
                farkas_y: y,
                weak_farkas_y: Some(weak_y),
                lp_pivots: pivots,
            })
        }
        LpStatus::Optimal => {
            let weights = sys.sorted_weights(weak.solution.clone().expect("feasible"));
            if !sys.check_weights(&weights, false) {
                return Err(Error::Internal("weak weights failed to verify".into()));
            }
            let mut strict = sys.decide()?;
            strict.lp_pivots += weak.pivots;
            if strict.kind == BalanceKind::WeaklyBalancedOnly {
                strict.weights = Some(weights);
            }
            Ok(strict)
        }
        LpStatus::Unbounded => Err(Error::Internal("feasibility LP reported unbounded".into())),
    }
}

/// Balancedness of `required ∪ optional` with positive weights demanded only on
/// `required`.
pub fn check_balanced_relative(
    n: usize,
    required: &CoalitionCollection,
    optional: &CoalitionCollection,
) -> Result<BalanceVerdict> {
    check_collection(required)?;
    System::new(n, required.members(), optional.members())?.decide()
}

fn cone_property(sys: &System) -> Result<PropertyOutcome> {
    let out = sys.cone_lp(&sys.required)?;
    let value = out
        .objective_value
        .ok_or_else(|| Error::Internal("cone LP is always feasible and bounded".into()))?;
    if value.is_zero() {
        return Ok(PropertyOutcome {
            holds: true,
            weights: None,
            witness: None,
        });
    }
    let (y, _) = sys.canonical_witness()?;
    let y = y.ok_or_else(|| Error::Internal("positive cone optimum without witness".into()))?;
    Ok(PropertyOutcome {
        holds: false,
        weights: None,
        witness: Some(y),
    })
}

fn per_coalition_weights(sys: &System) -> Result<PropertyOutcome> {
    let cols: Vec<(Coalition, usize)> = sys.all().enumerate().map(|(j, c)| (c, j)).collect();
    let mut total = vec![Rational::zero(); cols.len()];
    for k in 0..sys.required.len() {
        let mut p = LpProblem::new(cols.len());
        sys.cover_rows(&mut p, &cols);
        p.objective[k] = Rational::one();
        let out = solve(&p)?;
        let best = match out.status {
            LpStatus::Optimal => out.objective_value.clone().expect("optimal"),
            _ => Rational::zero(),
        };
        if !best.is_positive() {
            return Ok(PropertyOutcome {
                holds: false,
                weights: None,
                witness: None,
            });
        }
        for (t, v) in total.iter_mut().zip(out.solution.expect("optimal")) {
            *t += v;
        }
    }
    let count = Rational::from_integer(sys.required.len().into());
    let weights = sys.sorted_weights(total.into_iter().map(|v| v / &count));
    if !sys.check_weights(&weights, true) {
        return Err(Error::Internal("averaged weights failed to verify".into()));
    }
    Ok(PropertyOutcome {
        holds: true,
        weights: Some(weights),
        witness: None,
    })
}

/// Every `y` with `y(S) >= 0` on `c` and `y(N) = 0` has `y(S) = 0` on `c`.
/// Decided by one cone LP; the witness is returned when violated.
pub fn property_i(c: &CoalitionCollection) -> Result<PropertyOutcome> {
    check_collection(c)?;
    cone_property(&System::new(c.n(), c.members(), &[])?)
}

/// Strictly positive balancing weights exist. Decided by maximizing each
/// weight on its own and averaging the optimizers.
pub fn property_ii(c: &CoalitionCollection) -> Result<PropertyOutcome> {
    check_collection(c)?;
    per_coalition_weights(&System::new(c.n(), c.members(), &[])?)
}

/// The nucleolus variants: the collection is `c0 ∪ c` where `c0` holds
/// singletons; positivity (mode II) or vanishing (mode I) is demanded only on
/// `d_required`.
pub fn nucleolus_property(
    c: &CoalitionCollection,
    d_required: &CoalitionCollection,
    c0: &CoalitionCollection,
    mode: PropertyMode,
) -> Result<PropertyOutcome> {
    if let Some(s) = c0.iter().find(|s| !s.is_singleton()) {
        return Err(Error::domain(format!("{s} in the singleton collection is not a singleton")));
    }
    if !d_required.is_subset_of(c) {
        return Err(Error::domain("required coalitions must belong to the collection"));
    }
    check_collection(d_required)?;
    let optional = c.union(c0).difference(d_required);
    let sys = System::new(c.n(), d_required.members(), optional.members())?;
    match mode {
        PropertyMode::I => cone_property(&sys),
        PropertyMode::II => {
            let v = sys.decide()?;
            Ok(PropertyOutcome {
                holds: v.is_balanced(),
                weights: v.weights.filter(|_| v.kind == BalanceKind::Balanced),
                witness: v.farkas_y,
            })
        }
    }
}

/// Re-checks a cone witness against a collection: `y(S) >= 0` on `c`,
/// `y(N) = 0`, `y(S) > 0` on some member.
pub fn is_cone_witness(c: &CoalitionCollection, y: &[Rational]) -> bool {
    System {
        n: c.n(),
        required: c.members().to_vec(),
        optional: Vec::new(),
    }
    .check_cone_witness(y)
}

/// Re-checks balancing weights: non-negative, cover every player exactly once,
/// strictly positive when `strict`.
pub fn are_balancing_weights(c: &CoalitionCollection, w: &Weights, strict: bool) -> bool {
    let listed: Vec<Coalition> = w.iter().map(|(s, _)| *s).collect();
    listed == c.members()
        && System {
            n: c.n(),
            required: c.members().to_vec(),
            optional: Vec::new(),
        }
        .check_weights(w, strict)
}

/// Dot product `y . 1_S`.
pub fn coalition_value(y: &[Rational], c: Coalition) -> Rational {
    System::coalition_sum(y, c)
}
