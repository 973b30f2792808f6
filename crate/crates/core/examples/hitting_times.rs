//! Maximum hitting time of the walk a token performs on the undirected
//! multigraph underlying an interaction graph.
//!
//! ```not_rust
//! cargo run --release --example hitting_times
//! ```

use cliqueid::graph::{generate, GraphKind};
use cliqueid::stats::hitting_times;

fn main() {
    for kind in [
        GraphKind::Complete,
        GraphKind::DirectedRing,
        GraphKind::DirectedLine,
        GraphKind::StarBidir,
        GraphKind::RandomWeaklyConnected,
    ] {
        let row: Vec<String> = [4, 8, 16, 32]
            .iter()
            .map(|&n| {
                let m = generate(kind, n, 1).unwrap().to_undirected_multigraph();
                format!("{:>9.1}", hitting_times(&m).unwrap().max_hitting)
            })
            .collect();
        println!("{:<26} n=4,8,16,32: {}", kind.name(), row.join(""));
    }
}
