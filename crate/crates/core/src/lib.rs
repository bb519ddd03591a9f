//! Exact-arithmetic nucleolus toolkit for TU cooperative games.
//!
//! The crate computes the pre-nucleolus and nucleolus of transferable-utility
//! games with an iterated exact-rational LP scheme, and verifies candidate
//! payoffs three ways:
//!
//! - [`kohlberg`]: the classical balancedness criterion on excess-level
//!   collections (plus the nucleolus variant relative to singletons);
//! - [`modified`]: a span-pruned variant that only keeps coalitions whose
//!   characteristic vectors are new to the span;
//! - [`nguyen`]: a faithful replica of a published simplified procedure whose
//!   correctness is disputed, kept for counterexample search.
//!
//! Everything in a verdict path is exact rational arithmetic. Tolerances never
//! enter.
//!
//! ## Layout
//!
//! | module | contents |
//! |---|---|
//! | [`game`] | games, payoffs, coalitions, excesses, θ vectors, level sets |
//! | [`lp`] | exact rank/span routines and a Bland-rule simplex with certificates |
//! | [`balance`] | balanced / weakly balanced collections, Properties I and II |
//! | [`kohlberg`] | level-by-level verification and its traces |
//! | [`modified`] | span-pruned verification, containment-case bookkeeping |
//! | [`nguyen`] | the simplified verifier under dispute |
//! | [`oracle`] | ground-truth solver and improving directions |
//! | [`harness`] | file formats, random games, comparison sweeps, benchmark |
//!
//! Runnable walkthroughs live in `crates/core/examples/`, one per capability:
//!
//! ```bash
//! cargo run -p nucleolus --example excess_and_theta
//! cargo run -p nucleolus --example kohlberg_verify
//! cargo run -p nucleolus --example compare_methods
//! ```

pub mod balance;
pub mod error;
pub mod game;
pub mod harness;
pub mod kohlberg;
pub mod lp;
pub mod modified;
pub mod nguyen;
pub mod oracle;
pub mod rational;

pub use error::{Error, Result};
pub use game::{Coalition, CoalitionCollection, ExcessLevel, Payoff, ThetaVector, TuGame};
pub use kohlberg::{SingletonRule, VerificationTrace, Verdict};
pub use rational::Rational;
