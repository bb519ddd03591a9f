//! Span-membership elimination steps against balancedness-LP pivots on a
//! batch of random six-player games at their pre-nucleoli.
//!
//! ```bash
//! cargo run --release -p nucleolus --example bench_span_vs_lp
//! ```

use nucleolus::harness::{bench_span_vs_lp, random_game, Dist};
use nucleolus::oracle::prenucleolus;
use nucleolus::Result;

fn main() -> Result<()> {
    let dist = Dist::UniformInt { lo: -10, hi: 10 };
    let games = (0..10).map(|s| random_game(6, s, dist)).collect::<Result<Vec<_>>>()?;
    let points = games.iter().map(|g| Ok(prenucleolus(g)?.0)).collect::<Result<Vec<_>>>()?;
    let table = bench_span_vs_lp(&games, &points)?;
    let t = &table.totals;
    println!("{} games", t.games);
    println!("balancedness LPs: {} levels, {} pivots, {} us", t.lp_levels, t.lp_pivots, t.lp_nanos / 1000);
    println!("span checks:      {} levels, {} steps, {} us", t.span_levels, t.span_steps, t.span_nanos / 1000);
    Ok(())
}
