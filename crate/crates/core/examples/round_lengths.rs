//! Round lengths of the uniformly random scheduler against the coupon
//! collector expectation `|E| * H_|E|`.
//!
//! ```not_rust
//! cargo run --release --example round_lengths
//! ```

use cliqueid::graph::{generate, GraphKind};
use cliqueid::scheduler::expected_round_length_check;
use cliqueid::stats::coupon_collector_expect;

fn main() {
    for n in 2..=6 {
        let g = generate(GraphKind::Complete, n, 0).unwrap();
        let m = g.arc_count();
        let empirical = expected_round_length_check(&g, 100_000, 11);
        let expected = coupon_collector_expect(m);
        println!(
            "K_{n} |E|={m:<3} empirical {empirical:>8.3}  expected {expected:>8.3}  ratio {:.4}",
            empirical / expected
        );
    }
}
