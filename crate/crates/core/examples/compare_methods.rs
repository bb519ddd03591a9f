//! A small comparison sweep over random games. Counterexample files, if any,
//! go to a temporary directory and are replayed.
//!
//! ```bash
//! cargo run -p nucleolus --example compare_methods
//! ```

use nucleolus::harness::compare::replay_directory;
use nucleolus::harness::{compare_methods, CompareConfig, Dist, PointRule};
use nucleolus::Result;

fn main() -> Result<()> {
    let out = std::env::temp_dir().join("nucleolus-compare-example");
    for point_rule in [PointRule::Oracle, PointRule::OraclePerturbed, PointRule::RandomImputation] {
        let config = CompareConfig {
            n: 4,
            count: 40,
            seed: 2024,
            dist: Dist::ZeroNormalized { lo: 0, hi: 6 },
            point_rule,
        };
        let s = compare_methods(&config, Some(&out.join(point_rule.name())))?.summary;
        println!(
            "{point_rule}: {} rows, {} skipped, kohlberg {} accept / {} reject",
            s.rows, s.skipped, s.kohlberg_accepts, s.kohlberg_rejects
        );
        println!(
            "  modified disagrees {}, replica disagrees {} of {}, cases i/ii/iii = {}/{}/{}",
            s.modified_disagreements, s.nguyen_disagreements, s.nucleolus_rows, s.cases.i, s.cases.ii, s.cases.iii
        );
        let replays = replay_directory(&out.join(point_rule.name()))?;
        println!("  replayed {} counterexample files, all identical: {}", replays.len(), replays.iter().all(|r| r.identical));
    }
    Ok(())
}
