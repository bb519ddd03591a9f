//! Balanced, weakly balanced and unbalanced collections, with the weight
//! certificate or the separating vector for each.
//!
//! ```bash
//! cargo run -p nucleolus --example balanced_collections
//! ```

use nucleolus::balance::{check_balanced, property_i, property_ii};
use nucleolus::{Coalition, CoalitionCollection, Result};

fn collection(n: usize, sets: &[&[usize]]) -> Result<CoalitionCollection> {
    CoalitionCollection::new(n, sets.iter().map(|s| Coalition::from_players(s.iter().map(|p| p - 1))))
}

fn main() -> Result<()> {
    let cases = [
        ("pairs", collection(3, &[&[1, 2], &[1, 3], &[2, 3]])?),
        ("partition", collection(3, &[&[1], &[2, 3]])?),
        ("partition plus pair", collection(3, &[&[1], &[2, 3], &[1, 2]])?),
        ("lone pair", collection(3, &[&[2, 3]])?),
    ];
    for (name, c) in &cases {
        let v = check_balanced(c)?;
        println!("{name} {c}: {:?}", v.kind);
        if let Some(w) = &v.weights {
            for (s, wt) in w {
                println!("  w{s} = {wt}");
            }
        }
        if let Some(y) = &v.farkas_y {
            let shown: Vec<String> = y.iter().map(|r| r.to_string()).collect();
            println!("  separating y = ({})", shown.join(", "));
        }
        println!(
            "  property I holds: {}, property II holds: {}",
            property_i(c)?.holds,
            property_ii(c)?.holds
        );
    }
    Ok(())
}
