//! The span-pruned verifier next to the full one, showing which coalitions
//! are dropped as redundant and how each pruned collection relates to the
//! previous full level.
//!
//! ```bash
//! cargo run -p nucleolus --example modified_verify
//! ```

use nucleolus::kohlberg::verify_prenucleolus;
use nucleolus::modified::verify_prenucleolus_modified;
use nucleolus::rational::int;
use nucleolus::{Payoff, Result, TuGame};

fn main() -> Result<()> {
    let game = TuGame::from_fn(3, |s| match s.mask() {
        0b011 => int(6),
        0b100 => int(4),
        0b111 => int(6),
        _ => int(0),
    })?;
    let x = Payoff::new(vec![int(2), int(2), int(2)]);

    let full = verify_prenucleolus(&game, &x)?;
    println!("full walk: {:?} in {} levels", full.verdict, full.steps.len());

    let t = verify_prenucleolus_modified(&game, &x)?;
    println!("pruned walk: {:?}", t.verdict);
    for s in &t.steps {
        println!(
            "  step {} psi={} pruned={} added={} dropped={} case={:?} rank {} (full level rank {})",
            s.k, s.psi, s.d_hat, s.added, s.dropped, s.case, s.rank_d_hat, s.rank_level
        );
    }
    Ok(())
}
