//! Plugging a new protocol into the engine and the model checker.
//!
//! The protocol is pairwise leader elimination: everyone starts as a
//! leader and a leader that initiates with another leader demotes it. The
//! model checker's configuration graph is used to confirm that every
//! output-stable configuration has exactly one leader.
//!
//! ```not_rust
//! cargo run --release --example custom_protocol
//! ```

use cliqueid::engine::{run, RunLabel, RunOptions};
use cliqueid::graph::{generate, GraphKind};
use cliqueid::modelcheck::{explore, output_stable, DEFAULT_CAP};
use cliqueid::protocol::{Output, Protocol, ProtocolParams};
use cliqueid::scheduler::{Schedule, ScheduleKind};

struct Elimination;

impl Protocol for Elimination {
    type State = bool;

    fn name(&self) -> &'static str {
        "elimination"
    }

    fn params(&self) -> ProtocolParams {
        ProtocolParams::default()
    }

    fn initial_state(&self) -> bool {
        true
    }

    fn transition(&self, a: &bool, b: &bool) -> (bool, bool) {
        (*a, *b && !*a)
    }

    fn output(&self, leader: &bool) -> Output {
        if *leader {
            Output::Yes
        } else {
            Output::No
        }
    }

    fn variables(&self, leader: &bool) -> Vec<(&'static str, u64)> {
        vec![("leader", *leader as u64)]
    }

    fn check_configuration(&self, config: &[bool]) -> Result<(), String> {
        if config.iter().any(|&l| l) {
            Ok(())
        } else {
            Err("no leader left".into())
        }
    }
}

fn main() {
    for kind in [GraphKind::Complete, GraphKind::StarBidir, GraphKind::DirectedRing, GraphKind::DirectedLine] {
        let g = generate(kind, 5, 0).unwrap();
        let cg = explore(&Elimination, &g, DEFAULT_CAP).unwrap();
        let stable = output_stable(&cg);
        let leaders: Vec<usize> =
            (0..cg.len()).filter(|&i| stable[i]).map(|i| cg.config(i).iter().filter(|&&l| l).count()).collect();
        println!(
            "{:<14} reachable {:>3}, stable {:>2}, leaders in stable configurations: {:?}",
            kind.name(),
            cg.len(),
            leaders.len(),
            leaders.iter().min().zip(leaders.iter().max())
        );
    }

    // the engine runs it like any other protocol, invariant checks included
    let g = generate(GraphKind::Complete, 50, 0).unwrap();
    let mut s = Schedule::new(&g, ScheduleKind::UniformRandom, 0);
    let label = RunLabel { graph: "complete".into(), seed: 0, trial: 0 };
    let r = run(&Elimination, &g, &mut s, RunOptions::negative(50).with_max_steps(20_000).checked(), &label);
    let left = r.final_outputs.iter().filter(|&&o| o == Output::Yes).count();
    println!("K_50 after {} interactions: {left} leader(s), {} violations", r.steps_run, r.invariant_violations.len());
}
