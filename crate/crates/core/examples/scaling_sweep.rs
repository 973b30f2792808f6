//! Stabilization time against `n` on complete graphs, written as CSV.
//!
//! ```not_rust
//! cargo run --release --example scaling_sweep > ciw.csv
//! ```

use cliqueid::engine::{measure_scaling, write_scaling_csv};
use cliqueid::protocols::CiwN;
use cliqueid::scheduler::ScheduleKind;
use cliqueid::stats::loglog_slope;

fn main() {
    let sizes = [8, 12, 16, 24, 32];
    let rows = measure_scaling(|n| CiwN::new(n).unwrap(), &sizes, 20, 42, ScheduleKind::UniformRandom);
    write_scaling_csv(&rows, std::io::stdout()).unwrap();
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.mean_steps)).collect();
    eprintln!("log-log slope: {:.3}", loglog_slope(&pts).unwrap());
}
