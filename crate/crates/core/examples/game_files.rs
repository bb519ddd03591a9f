//! Reading and writing game and payoff documents.
//!
//! ```bash
//! cargo run -p nucleolus --example game_files
//! ```

use nucleolus::harness::format::{read_game, write_string};
use nucleolus::harness::{emit_game, emit_payoff, parse_payoff};
use nucleolus::kohlberg::verify_prenucleolus;
use nucleolus::Result;

const GAME: &str = "\
# glove market: player 1 holds a left glove, 2 and 3 hold right gloves
n 3
1 2 : 1
1 3 : 1
1 2 3 : 1
";

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("nucleolus-game-files-example");
    let path = dir.join("glove.game");
    write_string(&path, GAME)?;
    let game = read_game(&path)?;
    print!("canonical form:\n{}", emit_game(&game));

    let x = parse_payoff("n 3\n1 0 0\n")?;
    print!("candidate: {}", emit_payoff(&x));
    println!("verdict: {:?}", verify_prenucleolus(&game, &x)?.verdict);
    Ok(())
}
