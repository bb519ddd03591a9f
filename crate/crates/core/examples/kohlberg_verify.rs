//! Level-by-level verification of the pre-nucleolus and the nucleolus, with
//! the improving direction built from a rejection.
//!
//! ```bash
//! cargo run -p nucleolus --example kohlberg_verify
//! ```

use nucleolus::kohlberg::{verify_nucleolus, verify_prenucleolus};
use nucleolus::oracle::improving_direction;
use nucleolus::rational::{int, ratio};
use nucleolus::{Payoff, Result, SingletonRule, TuGame, VerificationTrace};

fn print_trace(t: &VerificationTrace) {
    println!("{} -> {:?}", t.method, t.verdict);
    for s in &t.steps {
        println!("  level {} psi={} {} {:?} rank {}", s.k, s.psi, s.collection, s.balance.kind, s.rank);
    }
}

fn main() -> Result<()> {
    let game = TuGame::from_fn(3, |s| if s.size() >= 2 { int(1) } else { int(0) })?;
    let split = Payoff::new(vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
    let corner = Payoff::new(vec![int(1), int(0), int(0)]);

    print_trace(&verify_prenucleolus(&game, &split)?);
    let t = verify_prenucleolus(&game, &corner)?;
    print_trace(&t);

    if let Some(r) = &t.rejection {
        let y = r.farkas_y.as_ref().expect("rejections carry a certificate");
        let d = improving_direction(&game, &corner, &r.collection, y)?;
        let z: Vec<String> = d.improved.values().iter().map(|v| v.to_string()).collect();
        println!("step {} along the certificate reaches ({})", d.delta_star, z.join(", "));
    }

    print_trace(&verify_nucleolus(&game, &split, SingletonRule::Tight)?);
    Ok(())
}
