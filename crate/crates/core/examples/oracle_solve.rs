//! The iterated-LP solver, round by round, on the first seeded random game
//! whose pre-nucleolus is not individually rational, so that the nucleolus
//! differs from it.
//!
//! ```bash
//! cargo run -p nucleolus --example oracle_solve
//! ```

use nucleolus::game::is_imputation;
use nucleolus::harness::{emit_game, emit_payoff, random_game, Dist};
use nucleolus::oracle::{nucleolus, prenucleolus};
use nucleolus::Result;

fn main() -> Result<()> {
    let dist = Dist::UniformInt { lo: -4, hi: 4 };
    for seed in 0.. {
        let game = random_game(3, seed, dist)?;
        if !game.has_imputations() {
            continue;
        }
        let pre = prenucleolus(&game)?;
        if is_imputation(&game, &pre.0) {
            continue;
        }
        print!("seed {seed}:\n{}", emit_game(&game));
        for (name, (x, trace)) in [("pre-nucleolus", pre), ("nucleolus", nucleolus(&game)?)] {
            print!("{name}: {}", emit_payoff(&x));
            for (r, round) in trace.rounds.iter().enumerate() {
                let bounds: Vec<usize> = round.fixed_bounds.iter().map(|i| i + 1).collect();
                println!(
                    "  round {r}: t*={} fixed {} lower bounds of players {bounds:?} dimension left {}",
                    round.value, round.fixed, round.remaining_dimension
                );
            }
        }
        break;
    }
    Ok(())
}
