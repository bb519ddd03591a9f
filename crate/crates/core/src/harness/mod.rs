//! Experiment plumbing: file formats, random instances, the comparison sweep
//! and the span-versus-LP benchmark.

pub mod bench;
pub mod compare;
pub mod format;
pub mod random;

pub use bench::{bench_span_vs_lp, BenchTable};
pub use compare::{compare_methods, replay_counterexample, CompareConfig, ComparisonReport, PointRule};
pub use format::{emit_game, emit_payoff, parse_game, parse_payoff};
pub use random::{random_game, Dist};
