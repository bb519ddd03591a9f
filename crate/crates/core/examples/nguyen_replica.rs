//! The simplified nucleolus procedure against the singleton-relative
//! criterion on a handful of random imputations.
//!
//! ```bash
//! cargo run -p nucleolus --example nguyen_replica
//! ```

use nucleolus::harness::random::{random_imputation, rng_from_seed};
use nucleolus::harness::{random_game, Dist};
use nucleolus::kohlberg::verify_nucleolus;
use nucleolus::nguyen::verify_nucleolus_nguyen;
use nucleolus::oracle::nucleolus;
use nucleolus::{Result, SingletonRule};

fn main() -> Result<()> {
    let dist = Dist::ZeroNormalized { lo: 0, hi: 3 };
    let mut rng = rng_from_seed(5);
    for seed in 0..8 {
        let game = random_game(4, seed, dist)?;
        let (nu, _) = nucleolus(&game)?;
        let mut points = vec![("nucleolus", nu)];
        if let Some(x) = random_imputation(&game, &mut rng) {
            points.push(("random", x));
        }
        for (label, x) in points {
            let reference = verify_nucleolus(&game, &x, SingletonRule::Tight)?;
            let replica = verify_nucleolus_nguyen(&game, &x)?;
            let mark = if reference.verdict == replica.verdict { "agree" } else { "DISAGREE" };
            println!(
                "game {seed} {label:>9}: criterion {:?}, replica {:?} in {} steps ({mark})",
                reference.verdict,
                replica.verdict,
                replica.steps.len()
            );
        }
    }
    Ok(())
}
