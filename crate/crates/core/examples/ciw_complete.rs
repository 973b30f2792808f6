//! Weak-fairness identification with known `n`.
//!
//! Runs `CiwN` on a complete graph until every agent outputs yes, then on a
//! directed ring where no agent ever does.
//!
//! ```not_rust
//! cargo run --release --example ciw_complete -- 12
//! ```

use cliqueid::engine::{run, RunLabel, RunOptions};
use cliqueid::graph::{generate, GraphKind};
use cliqueid::protocols::CiwN;
use cliqueid::scheduler::{Schedule, ScheduleKind};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(12);
    let p = CiwN::new(n).expect("n >= 2");

    for kind in [ScheduleKind::UniformRandom, ScheduleKind::RoundRobin, ScheduleKind::ShuffledRounds] {
        let g = generate(GraphKind::Complete, n, 0).unwrap();
        let mut s = Schedule::new(&g, kind, 1).with_seeded_order();
        let label = RunLabel { graph: "complete".into(), seed: 1, trial: 0 };
        let r = run(&p, &g, &mut s, RunOptions::positive(n).checked(), &label);
        println!(
            "K_{n:<3} {kind:<16} stabilized after {:>9} interactions, {:>5} rounds (bound for weakly fair: {})",
            r.interactions_to_stabilize.unwrap(),
            r.rounds_to_stabilize.unwrap(),
            2 * n + 3
        );
    }

    let ring = generate(GraphKind::DirectedRing, n, 0).unwrap();
    let mut s = Schedule::new(&ring, ScheduleKind::UniformRandom, 1);
    let label = RunLabel { graph: "directed_ring".into(), seed: 1, trial: 0 };
    let r = run(&p, &ring, &mut s, RunOptions::negative(n).checked(), &label);
    println!("ring   {} interactions, agents ever in phase 4: {}", r.steps_run, r.phase4_sightings);
}
