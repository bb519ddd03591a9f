//! Excesses, the sorted excess vector θ and the lexicographic order on the
//! three-player majority game.
//!
//! ```bash
//! cargo run -p nucleolus --example excess_and_theta
//! ```

use nucleolus::game::{excess, level_collection, theta};
use nucleolus::rational::{int, ratio};
use nucleolus::{ExcessLevel, Payoff, Result, TuGame};

fn main() -> Result<()> {
    // v(S) = 1 when |S| >= 2
    let game = TuGame::from_fn(3, |s| if s.size() >= 2 { int(1) } else { int(0) })?;
    let split = Payoff::new(vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
    let corner = Payoff::new(vec![int(1), int(0), int(0)]);

    for (name, x) in [("equal split", &split), ("corner", &corner)] {
        println!("{name}:");
        for s in game.coalitions() {
            println!("  e({s}) = {}", excess(&game, s, x)?);
        }
        let t = theta(&game, x)?;
        let shown: Vec<String> = t.values.iter().map(|v| v.to_string()).collect();
        println!("  theta = ({})", shown.join(", "));
        let top = ExcessLevel(t.values[0].clone());
        println!("  top level {top}: {}", level_collection(&game, x, &top)?);
    }

    let order = theta(&game, &split)?.lex_cmp(&theta(&game, &corner)?)?;
    println!("theta(equal split) vs theta(corner): {order:?}");
    Ok(())
}
