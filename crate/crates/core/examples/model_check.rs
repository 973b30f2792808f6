//! Exhaustive verification of small instances under global fairness.
//!
//! ```not_rust
//! cargo run --release --example model_check
//! ```

use cliqueid::graph::{generate, Digraph, GraphKind};
use cliqueid::modelcheck::{check_global_fairness, explore, DEFAULT_CAP};
use cliqueid::protocol::{Output, Protocol};
use cliqueid::protocols::{Cig, CiwN, CiwNk};

fn check<P: Protocol>(p: &P, g: &Digraph, name: &str) {
    let expected = if g.is_complete() { Output::Yes } else { Output::No };
    match explore(p, g, DEFAULT_CAP) {
        Ok(cg) => {
            let v = check_global_fairness(&cg, expected).labeled(name);
            println!(
                "{:<7} k={:<4} {:<36} expect {:<3} solves={:<5} reachable={:<6} stable={}",
                v.protocol,
                v.k.map_or("-".into(), |k| k.to_string()),
                format!("{name} (n={})", g.n()),
                format!("{expected:?}").to_lowercase(),
                v.solves,
                v.reachable_count,
                v.stable_count
            );
        }
        Err(e) => println!("{} on {name}: {e}", p.name()),
    }
}

fn main() {
    for n in [2, 3] {
        for kind in
            [GraphKind::Complete, GraphKind::DirectedRing, GraphKind::DirectedLine, GraphKind::NearCompleteMinusOneArc]
        {
            let g = generate(kind, n, 0).unwrap();
            if kind != GraphKind::Complete && g.is_complete() {
                // at n = 2 a ring is K_2
                continue;
            }
            check(&CiwN::new(n).unwrap(), &g, kind.name());
            for k in 1..=n {
                check(&CiwNk::new(n, k).unwrap(), &g, kind.name());
            }
            check(&Cig::new(), &g, kind.name());
        }
    }
}
