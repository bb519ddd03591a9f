//! The exact simplex on three small problems, with each certificate checked
//! independently of the solver.
//!
//! ```bash
//! cargo run -p nucleolus --example exact_lp
//! ```

use nucleolus::lp::{solve, verify_farkas, verify_optimal, verify_ray, LpProblem};
use nucleolus::rational::int;
use nucleolus::Result;

fn show(v: &[nucleolus::Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn main() -> Result<()> {
    // maximize w0 + w1 subject to w0 + 2 w1 = 1, 2 w0 + w1 = 1, w >= 0
    let mut p = LpProblem::new(2);
    p.objective = vec![int(1), int(1)];
    p.add_row([(0, int(1)), (1, int(2))], int(1));
    p.add_row([(0, int(2)), (1, int(1))], int(1));
    let out = solve(&p)?;
    let (w, y) = (out.solution.unwrap(), out.duals.unwrap());
    println!("optimal: w = {}, value = {}, duals = {}", show(&w), out.objective_value.unwrap(), show(&y));
    println!("  certificate holds: {}", verify_optimal(&p, &w, &y));

    // w0 + w1 = -1 with w >= 0 has no solution
    let mut p = LpProblem::new(2);
    p.add_row([(0, int(1)), (1, int(1))], int(-1));
    let out = solve(&p)?;
    let y = out.farkas.unwrap();
    println!("infeasible: y = {}", show(&y));
    println!("  certificate holds: {}", verify_farkas(&p, &y));

    // maximize w0 subject to w0 - w1 = 0
    let mut p = LpProblem::new(2);
    p.objective = vec![int(1), int(0)];
    p.add_row([(0, int(1)), (1, int(-1))], int(0));
    let out = solve(&p)?;
    let (w, d) = (out.solution.unwrap(), out.ray.unwrap());
    println!("unbounded: from {} along {}", show(&w), show(&d));
    println!("  certificate holds: {}", verify_ray(&p, &w, &d));
    println!("pivots on the last problem: {}", out.pivots);
    Ok(())
}
