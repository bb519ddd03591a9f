//! Cost of span pruning against full-collection balancedness LPs.
//!
//! For each game and point, the Kohlberg walk is replayed level by level and
//! each level's balancedness LP is timed and its simplex pivots counted. The
//! span-pruned walk is replayed the same way, timing and counting the
//! elimination steps of its span-membership checks. Step counts are
//! deterministic; wall-clock times are not.

use std::time::Instant;

use serde::Serialize;

use crate::balance::check_balanced;
use crate::error::{Error, Result};
use crate::game::{excess_table, level_from_table, Payoff, TuGame};
use crate::kohlberg::verify_prenucleolus;
use crate::lp::linalg::SpanBasis;
use crate::modified::verify_prenucleolus_modified;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub game: usize,
    pub level: usize,
    pub lp_pivots: Option<usize>,
    pub lp_nanos: Option<u128>,
    pub span_steps: Option<usize>,
    pub span_nanos: Option<u128>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BenchTotals {
    pub games: usize,
    pub lp_levels: usize,
    pub lp_pivots: usize,
    pub lp_nanos: u128,
    pub span_levels: usize,
    pub span_steps: usize,
    pub span_nanos: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    pub totals: BenchTotals,
}

impl BenchTable {
    /// Everything except wall-clock times; equal across runs on equal input.
    pub fn step_counts(&self) -> Vec<(usize, usize, Option<usize>, Option<usize>)> {
        self.rows
            .iter()
            .map(|r| (r.game, r.level, r.lp_pivots, r.span_steps))
            .collect()
    }
}

fn time<T>(f: impl FnOnce() -> T) -> (T, u128) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_nanos())
}

pub fn bench_span_vs_lp(games: &[TuGame], points: &[Payoff]) -> Result<BenchTable> {
    if games.is_empty() || games.len() != points.len() {
        return Err(Error::domain("games and points must be nonempty lists of equal length"));
    }
    let mut rows = Vec::new();
    let mut totals = BenchTotals {
        games: games.len(),
        ..BenchTotals::default()
    };
    for (g, (game, x)) in games.iter().zip(points).enumerate() {
        let n = game.n();
        let table = excess_table(game, x)?;

        let mut lp: Vec<(usize, u128)> = Vec::new();
        for step in verify_prenucleolus(game, x)?.steps {
            let (verdict, nanos) = time(|| check_balanced(&step.collection));
            lp.push((verdict?.lp_pivots, nanos));
        }

        // replay the pruning: the top level seeds the span, each later level
        // tests its new coalitions against the previous pruned collection
        let mut span: Vec<(usize, u128)> = Vec::new();
        let trace = verify_prenucleolus_modified(game, x)?;
        let mut basis = SpanBasis::new(n);
        for (k, step) in trace.steps.iter().enumerate() {
            let level = level_from_table(n, &table, &step.psi);
            let candidates = if k == 0 {
                level.clone()
            } else {
                level.difference(&trace.steps[k - 1].d_hat)
            };
            let before = basis.steps();
            let (added, nanos) = time(|| {
                let keep: Vec<u32> = candidates
                    .masks()
                    .into_iter()
                    .filter(|m| k == 0 || !basis.contains(*m))
                    .collect();
                for m in &keep {
                    basis.insert(*m);
                }
                keep.len()
            });
            debug_assert_eq!(added, step.added.len());
            span.push((basis.steps() - before, nanos));
        }

        for level in 0..lp.len().max(span.len()) {
            let a = lp.get(level);
            let b = span.get(level);
            if let Some((p, t)) = a {
                totals.lp_levels += 1;
                totals.lp_pivots += p;
                totals.lp_nanos += t;
            }
            if let Some((s, t)) = b {
                totals.span_levels += 1;
                totals.span_steps += s;
                totals.span_nanos += t;
            }
            rows.push(BenchRow {
                game: g,
                level,
                lp_pivots: a.map(|v| v.0),
                lp_nanos: a.map(|v| v.1),
                span_steps: b.map(|v| v.0),
                span_nanos: b.map(|v| v.1),
            });
        }
    }
    Ok(BenchTable { rows, totals })
}
