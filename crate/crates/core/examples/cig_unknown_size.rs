//! Identification without knowing `n`, under a uniformly random scheduler.
//!
//! Agents carry merging tokens whose sizes estimate the population; the
//! counting rules only run between agents that agree on the size.
//!
//! ```not_rust
//! cargo run --release --example cig_unknown_size
//! ```

use cliqueid::engine::{run_trials, RunOptions};
use cliqueid::graph::{generate, GraphKind};
use cliqueid::protocol::Output;
use cliqueid::protocols::Cig;
use cliqueid::scheduler::ScheduleKind;

fn main() {
    let p = Cig::new();
    for n in [4, 6, 8] {
        let g = generate(GraphKind::Complete, n, 0).unwrap();
        let records =
            run_trials(&p, &g, ScheduleKind::UniformRandom, 3, 10, RunOptions::positive(n).checked(), "complete");
        let mean =
            records.iter().filter_map(|r| r.interactions_to_stabilize).sum::<u64>() as f64 / records.len() as f64;
        println!("complete n={n}: all {} trials stabilized, mean {mean:.0} interactions", records.len());
    }
    for kind in [GraphKind::DirectedRing, GraphKind::StarBidir, GraphKind::RandomWeaklyConnected] {
        let n = 6;
        let g = generate(kind, n, 5).unwrap();
        let records =
            run_trials(&p, &g, ScheduleKind::UniformRandom, 3, 10, RunOptions::negative(n).checked(), kind.name());
        let yes = records.iter().filter(|r| r.final_outputs.contains(&Output::Yes)).count();
        let false_positives: u64 = records.iter().map(|r| r.phase4_sightings).sum();
        println!(
            "{kind} n={n}: {false_positives} steps with a certified agent, {yes} runs ending with some yes output"
        );
    }
}
