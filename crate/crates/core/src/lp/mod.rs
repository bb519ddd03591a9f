//! Exact linear algebra and linear programming.

pub mod linalg;
pub mod simplex;

pub use linalg::{mask_in_span, mask_rank, solve_unique, RationalMatrix, SpanBasis};
pub use simplex::{solve, verify_farkas, verify_optimal, verify_ray, LpOutcome, LpProblem, LpStatus};
