//! Three-way comparison of the verifiers over random games.
//!
//! For every generated `(game, point)` pair the Kohlberg verifier is ground
//! truth for the pre-nucleolus question; the span-pruned verifier is compared
//! against it. When the point is an imputation the nucleolus verifier is
//! ground truth for the replica. Every disagreement is written to a
//! self-contained counterexample file that [`replay_counterexample`] can
//! re-run anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::balance::{are_balancing_weights, is_cone_witness};
use crate::error::{Error, Result};
use crate::game::{excess_table, is_imputation, level_from_table, theta, Payoff, TuGame};
use crate::harness::format::{emit_game, emit_payoff, parse_game, parse_payoff, read_to_string, write_string};
use crate::harness::random::{mix_seed, perturb, perturb_imputation, random_game, random_imputation, rng_from_seed, Dist};
use crate::kohlberg::{verify_nucleolus, verify_prenucleolus, SingletonRule, Verdict, VerificationTrace};
use crate::modified::{verify_prenucleolus_modified, ContainmentCase, ModifiedTrace};
use crate::nguyen::verify_nucleolus_nguyen;
use crate::oracle::{nucleolus, prenucleolus};
use crate::rational::ratio;

/// How the candidate point of each row is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointRule {
    /// The pre-nucleolus.
    Oracle,
    /// The pre-nucleolus moved by `1/7` from one player to another.
    OraclePerturbed,
    /// A random grid point of the imputation set.
    RandomImputation,
    /// The nucleolus.
    Nucleolus,
    /// The nucleolus moved by up to `1/7`, staying an imputation.
    NucleolusPerturbed,
}

impl PointRule {
    pub const ALL: [PointRule; 5] = [
        PointRule::Oracle,
        PointRule::OraclePerturbed,
        PointRule::RandomImputation,
        PointRule::Nucleolus,
        PointRule::NucleolusPerturbed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PointRule::Oracle => "oracle",
            PointRule::OraclePerturbed => "oracle_perturbed",
            PointRule::RandomImputation => "random_imputation",
            PointRule::Nucleolus => "nucleolus",
            PointRule::NucleolusPerturbed => "nucleolus_perturbed",
        }
    }
}

impl fmt::Display for PointRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PointRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PointRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown point rule {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareConfig {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    #[serde(serialize_with = "serialize_display")]
    pub dist: Dist,
    pub point_rule: PointRule,
}

fn serialize_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CaseHistogram {
    pub i: usize,
    pub ii: usize,
    pub iii: usize,
}

impl CaseHistogram {
    fn add(&mut self, other: &CaseHistogram) {
        self.i += other.i;
        self.ii += other.ii;
        self.iii += other.iii;
    }

    pub fn of(trace: &ModifiedTrace) -> Self {
        let mut h = CaseHistogram::default();
        for case in trace.steps.iter().filter_map(|s| s.case) {
            match case {
                ContainmentCase::I => h.i += 1,
                ContainmentCase::II => h.ii += 1,
                ContainmentCase::III => h.iii += 1,
            }
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub index: usize,
    pub game_seed: u64,
    pub point_rule: PointRule,
    /// Why no point exists for this row (empty imputation set, ...).
    pub skipped: Option<String>,
    pub point: Option<Payoff>,
    pub kohlberg: Option<Verdict>,
    pub modified: Option<Verdict>,
    pub nucleolus: Option<Verdict>,
    pub nguyen: Option<Verdict>,
    pub modified_agrees: Option<bool>,
    pub nguyen_agrees: Option<bool>,
    pub cases: CaseHistogram,
    /// Steps where the pruned collection and the full level differ in rank.
    pub rank_mismatches: usize,
    pub invariant_violations: Vec<String>,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub skipped: usize,
    pub kohlberg_accepts: usize,
    pub kohlberg_rejects: usize,
    pub modified_agreements: usize,
    pub modified_disagreements: usize,
    pub nucleolus_rows: usize,
    pub nguyen_agreements: usize,
    pub nguyen_disagreements: usize,
    pub cases: CaseHistogram,
    pub rank_mismatches: usize,
    pub invariant_violations: usize,
    pub counterexample_files: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub config: CompareConfig,
    pub rows: Vec<ComparisonRow>,
    pub summary: Summary,
}

/// Every trace a row produces; stored verbatim in counterexample files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceBundle {
    pub kohlberg: VerificationTrace,
    pub modified: ModifiedTrace,
    pub nucleolus: Option<VerificationTrace>,
    pub nguyen: Option<VerificationTrace>,
}

pub fn bundle_traces(game: &TuGame, x: &Payoff) -> Result<TraceBundle> {
    let kohlberg = verify_prenucleolus(game, x)?;
    let modified = verify_prenucleolus_modified(game, x)?;
    let (nucleolus, nguyen) = if is_imputation(game, x) {
        (
            Some(verify_nucleolus(game, x, SingletonRule::Tight)?),
            Some(verify_nucleolus_nguyen(game, x)?),
        )
    } else {
        (None, None)
    };
    Ok(TraceBundle {
        kohlberg,
        modified,
        nucleolus,
        nguyen,
    })
}

pub const KIND_MODIFIED: &str = "kohlberg-vs-modified";
pub const KIND_NGUYEN: &str = "nucleolus-vs-nguyen";

#[derive(Serialize)]
struct CounterexampleFile<'a> {
    kind: &'a str,
    index: usize,
    game_seed: u64,
    config: &'a CompareConfig,
    game: String,
    point: String,
    traces: &'a TraceBundle,
}

/// Structural checks on one row's traces. Returns one message per violation.
pub fn invariant_violations(game: &TuGame, x: &Payoff, traces: &TraceBundle) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let n = game.n();
    let table = excess_table(game, x)?;

    let th = theta(game, x)?;
    let mut prov: Vec<u32> = th.provenance.iter().map(|c| c.mask()).collect();
    if th.values.windows(2).any(|w| w[0] < w[1]) {
        out.push("theta is not non-increasing".into());
    }
    if th.values.iter().zip(&th.provenance).any(|(v, c)| v != &table[c.mask() as usize]) {
        out.push("theta entry differs from its coalition's excess".into());
    }
    prov.sort_unstable();
    if prov != (1..(1u32 << n)).collect::<Vec<_>>() {
        out.push("theta provenance is not a permutation of the coalitions".into());
    }

    for trace in [Some(&traces.kohlberg), traces.nucleolus.as_ref(), traces.nguyen.as_ref()]
        .into_iter()
        .flatten()
    {
        for w in trace.steps.windows(2) {
            if w[0].psi <= w[1].psi {
                out.push(format!("{}: levels do not strictly decrease at step {}", trace.method, w[1].k));
            }
            if !w[0].collection.is_subset_of(&w[1].collection) || w[0].collection == w[1].collection {
                out.push(format!("{}: collections do not strictly grow at step {}", trace.method, w[1].k));
            }
            if w[0].rank > w[1].rank {
                out.push(format!("{}: rank decreased at step {}", trace.method, w[1].k));
            }
        }
        if trace.method == "kohlberg" {
            for s in &trace.steps {
                if s.collection != level_from_table(n, &table, &s.psi) {
                    out.push(format!("kohlberg: step {} is not the level set at its psi", s.k));
                }
                if s.balance.is_balanced() && !are_balancing_weights(&s.collection, s.balance.weights.as_ref().unwrap(), true) {
                    out.push(format!("kohlberg: step {} weights do not re-verify", s.k));
                }
            }
            if let Some(r) = &trace.rejection {
                if !r.farkas_y.as_ref().is_some_and(|y| is_cone_witness(&r.collection, y)) {
                    out.push("kohlberg: rejection certificate does not re-verify".into());
                }
            }
        }
        if trace.is_solution() && trace.steps.last().is_some_and(|s| s.rank != n) {
            out.push(format!("{}: accepted below full rank", trace.method));
        }
    }

    let m = &traces.modified;
    for s in &m.steps {
        let level = level_from_table(n, &table, &s.psi);
        if let Some(eps) = &s.eps_tilde {
            if !eps.is_positive() {
                out.push(format!("modified: eps_tilde <= 0 at step {}", s.k));
            }
        }
        if !s.d_hat.is_subset_of(&level) {
            out.push(format!("modified: pruned collection escapes its level at step {}", s.k));
        }
        if !s.added.is_disjoint(&s.dropped) {
            out.push(format!("modified: added and dropped overlap at step {}", s.k));
        }
    }
    for w in m.steps.windows(2) {
        let prev = level_from_table(n, &table, &w[0].psi);
        let new = level_from_table(n, &table, &w[1].psi).difference(&prev);
        if w[1].added.union(&w[1].dropped) != new {
            out.push(format!("modified: added and dropped do not partition the new level at step {}", w[1].k));
        }
        if !prev.is_subset_of(&level_from_table(n, &table, &w[1].psi)) {
            out.push(format!("modified: level sets not monotone at step {}", w[1].k));
        }
    }
    Ok(out)
}

enum Point {
    Ready(Payoff),
    Skipped(String),
}

fn choose_point(game: &TuGame, rule: PointRule, seed: u64) -> Result<Point> {
    let mut rng = rng_from_seed(seed);
    let step = ratio(1, 7);
    Ok(match rule {
        PointRule::Oracle => Point::Ready(prenucleolus(game)?.0),
        PointRule::OraclePerturbed => {
            if game.n() < 2 {
                Point::Skipped("perturbation needs two players".into())
            } else {
                Point::Ready(perturb(&prenucleolus(game)?.0, &step, &mut rng)?)
            }
        }
        PointRule::RandomImputation => match random_imputation(game, &mut rng) {
            Some(x) => Point::Ready(x),
            None => Point::Skipped("empty imputation set".into()),
        },
        PointRule::Nucleolus | PointRule::NucleolusPerturbed if !game.has_imputations() => {
            Point::Skipped("empty imputation set".into())
        }
        PointRule::Nucleolus => Point::Ready(nucleolus(game)?.0),
        PointRule::NucleolusPerturbed => match perturb_imputation(game, &nucleolus(game)?.0, &step, &mut rng) {
            Some(x) => Point::Ready(x),
            None => Point::Skipped("imputation set is a single point".into()),
        },
    })
}

/// Evaluates one row; writes its counterexample files under `out` if given.
pub fn evaluate_row(config: &CompareConfig, index: usize, out: Option<&Path>) -> Result<ComparisonRow> {
    let game_seed = mix_seed(config.seed, index as u64);
    let game = random_game(config.n, game_seed, config.dist)?;
    let mut row = ComparisonRow {
        index,
        game_seed,
        point_rule: config.point_rule,
        skipped: None,
        point: None,
        kohlberg: None,
        modified: None,
        nucleolus: None,
        nguyen: None,
        modified_agrees: None,
        nguyen_agrees: None,
        cases: CaseHistogram::default(),
        rank_mismatches: 0,
        invariant_violations: Vec::new(),
        counterexamples: Vec::new(),
    };
    let x = match choose_point(&game, config.point_rule, mix_seed(game_seed, 1))? {
        Point::Ready(x) => x,
        Point::Skipped(why) => {
            row.skipped = Some(why);
            return Ok(row);
        }
    };
    let traces = bundle_traces(&game, &x)?;
    row.kohlberg = Some(traces.kohlberg.verdict);
    row.modified = Some(traces.modified.verdict);
    row.nucleolus = traces.nucleolus.as_ref().map(|t| t.verdict);
    row.nguyen = traces.nguyen.as_ref().map(|t| t.verdict);
    row.modified_agrees = Some(traces.kohlberg.verdict == traces.modified.verdict);
    row.nguyen_agrees = row.nucleolus.zip(row.nguyen).map(|(a, b)| a == b);
    row.cases = CaseHistogram::of(&traces.modified);
    row.rank_mismatches = traces
        .modified
        .steps
        .iter()
        .filter(|s| s.rank_d_hat != s.rank_level)
        .count();
    row.invariant_violations = invariant_violations(&game, &x, &traces)?;

    let mut kinds = Vec::new();
    if row.modified_agrees == Some(false) {
        kinds.push(KIND_MODIFIED);
    }
    if row.nguyen_agrees == Some(false) {
        kinds.push(KIND_NGUYEN);
    }
    for kind in kinds {
        let name = format!("counterexamples/{index:05}-{kind}.json");
        if let Some(dir) = out {
            let file = CounterexampleFile {
                kind,
                index,
                game_seed,
                config,
                game: emit_game(&game),
                point: emit_payoff(&x),
                traces: &traces,
            };
            write_string(&dir.join(&name), &serde_json::to_string_pretty(&file)?)?;
        }
        row.counterexamples.push(name);
    }
    row.point = Some(x);
    Ok(row)
}

fn summarize(rows: &[ComparisonRow]) -> Summary {
    let mut s = Summary {
        rows: rows.len(),
        ..Summary::default()
    };
    for r in rows {
        if r.skipped.is_some() {
            s.skipped += 1;
            continue;
        }
        match r.kohlberg {
            Some(Verdict::IsSolution) => s.kohlberg_accepts += 1,
            _ => s.kohlberg_rejects += 1,
        }
        match r.modified_agrees {
            Some(true) => s.modified_agreements += 1,
            _ => s.modified_disagreements += 1,
        }
        if let Some(agree) = r.nguyen_agrees {
            s.nucleolus_rows += 1;
            if agree {
                s.nguyen_agreements += 1;
            } else {
                s.nguyen_disagreements += 1;
            }
        }
        s.cases.add(&r.cases);
        s.rank_mismatches += r.rank_mismatches;
        s.invariant_violations += r.invariant_violations.len();
        s.counterexample_files += r.counterexamples.len();
    }
    s
}

/// Runs the sweep. With `out`, writes `report.json` and one file per
/// disagreement under `out/counterexamples/`.
pub fn compare_methods(config: &CompareConfig, out: Option<&Path>) -> Result<ComparisonReport> {
    if config.count == 0 {
        return Err(Error::Config("count must be at least 1".into()));
    }
    if config.n == 0 || config.n > 16 {
        return Err(Error::Config(format!("n must be in 1..=16, got {}", config.n)));
    }
    let rows: Vec<ComparisonRow> = (0..config.count)
        .into_par_iter()
        .map(|i| evaluate_row(config, i, out))
        .collect::<Result<_>>()?;
    let report = ComparisonReport {
        config: config.clone(),
        summary: summarize(&rows),
        rows,
    };
    if let Some(dir) = out {
        write_string(&dir.join("report.json"), &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayOutcome {
    pub path: PathBuf,
    pub kind: String,
    pub identical: bool,
    pub verdicts: BTreeMap<String, Verdict>,
}

/// Re-runs every verifier on the game and point stored in a counterexample
/// file and compares the fresh traces with the stored ones.
pub fn replay_counterexample(path: &Path) -> Result<ReplayOutcome> {
    let stored: Value = serde_json::from_str(&read_to_string(path)?)?;
    let field = |name: &str| {
        stored
            .get(name)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Config(format!("{}: missing field {name:?}", path.display())))
    };
    let game = parse_game(field("game")?)?;
    let x = parse_payoff(field("point")?)?;
    let kind = field("kind")?.to_string();
    let fresh = bundle_traces(&game, &x)?;
    let identical = stored.get("traces") == Some(&serde_json::to_value(&fresh)?);
    let mut verdicts = BTreeMap::new();
    verdicts.insert("kohlberg".to_string(), fresh.kohlberg.verdict);
    verdicts.insert("modified".to_string(), fresh.modified.verdict);
    if let Some(t) = &fresh.nucleolus {
        verdicts.insert("nucleolus".to_string(), t.verdict);
    }
    if let Some(t) = &fresh.nguyen {
        verdicts.insert("nguyen".to_string(), t.verdict);
    }
    Ok(ReplayOutcome {
        path: path.to_path_buf(),
        kind,
        identical,
        verdicts,
    })
}

/// Replays every `*.json` file in `dir/counterexamples`, in name order.
pub fn replay_directory(dir: &Path) -> Result<Vec<ReplayOutcome>> {
    let sub = dir.join("counterexamples");
    if !sub.exists() {
        return Ok(Vec::new());
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&sub)
        .map_err(|e| Error::io(&sub, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| replay_counterexample(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(rule: PointRule) -> CompareConfig {
        CompareConfig {
            n: 3,
            count: 10,
            seed: 7,
            dist: Dist::UniformInt { lo: -10, hi: 10 },
            point_rule: rule,
        }
    }

    #[test]
    fn oracle_rows_are_all_accepted() {
        let r = compare_methods(&config(PointRule::Oracle), None).unwrap();
        assert_eq!(r.rows.len(), 10);
        assert!(r.rows.iter().all(|row| row.kohlberg == Some(Verdict::IsSolution)));
        assert_eq!(r.summary.invariant_violations, 0);
    }

    #[test]
    fn perturbed_rows_are_all_rejected() {
        let r = compare_methods(&config(PointRule::OraclePerturbed), None).unwrap();
        assert!(r.rows.iter().all(|row| row.kohlberg == Some(Verdict::NotSolution)));
    }

    #[test]
    fn zero_count_is_a_config_error() {
        let mut c = config(PointRule::Oracle);
        c.count = 0;
        assert!(matches!(compare_methods(&c, None), Err(Error::Config(_))));
    }

    #[test]
    fn summary_arithmetic() {
        let mut c = config(PointRule::RandomImputation);
        c.dist = Dist::ZeroNormalized { lo: -4, hi: 8 };
        c.count = 20;
        let s = compare_methods(&c, None).unwrap().summary;
        assert_eq!(s.modified_agreements + s.modified_disagreements + s.skipped, s.rows);
        assert_eq!(s.nguyen_agreements + s.nguyen_disagreements, s.nucleolus_rows);
    }

    #[test]
    fn point_rule_names_round_trip() {
        for r in PointRule::ALL {
            assert_eq!(r.name().parse::<PointRule>().unwrap(), r);
        }
        assert!("centroid".parse::<PointRule>().is_err());
    }
}
