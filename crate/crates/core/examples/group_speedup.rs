//! Splitting the population into `k` counting groups.
//!
//! ```not_rust
//! cargo run --release --example group_speedup
//! ```

use cliqueid::engine::measure_scaling;
use cliqueid::protocols::CiwNk;
use cliqueid::scheduler::ScheduleKind;

fn main() {
    let n = 24;
    let mut base = None;
    for k in [1, 2, 3, 4, 6, 8, 12] {
        let rows = measure_scaling(|n| CiwNk::new(n, k).unwrap(), &[n], 20, 7, ScheduleKind::UniformRandom);
        let mean = rows[0].mean_steps;
        let base = *base.get_or_insert(mean);
        println!("n={n} k={k:<3} mean {mean:>10.0} ± {:>8.0}   relative to k=1: {:.2}", rows[0].std_steps, mean / base);
    }
}
