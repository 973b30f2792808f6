//! Why knowing `n` is not enough under weak fairness.
//!
//! The doubled graph `f(K_n)` has `2n` agents and is not complete, but a
//! weakly fair schedule that mirrors a run on `K_n` keeps both copies of
//! every node in the original node's state. Every agent ends up outputting
//! yes.
//!
//! ```not_rust
//! cargo run --release --example doubled_graph
//! ```

use cliqueid::graph::{generate, GraphKind};
use cliqueid::protocols::{CiwN, CiwNk};
use cliqueid::scheduler::{Schedule, ScheduleKind};
use cliqueid::transform::{f_transform, mirrored_run};

fn main() {
    let k2 = generate(GraphKind::Complete, 2, 0).unwrap();
    let f = f_transform(&k2);
    println!("f(K_2) has {} nodes and arcs {:?}", f.n(), f.arcs().iter().map(|a| a.to_string()).collect::<Vec<_>>());
    println!("complete: {}", f.is_complete());

    for n in [2, 3, 5] {
        let g = generate(GraphKind::Complete, n, 0).unwrap();
        let sched = Schedule::new(&g, ScheduleKind::ShuffledRounds, 1);
        let r = mirrored_run(&CiwN::new(n).unwrap(), &g, sched, 20_000).unwrap();
        println!(
            "ciw_n  n={n}: image has {} arcs (complete would be {}), mirror held {}, all image agents yes: {}",
            r.image_arcs,
            2 * n * (2 * n - 1),
            r.held,
            r.image_all_yes()
        );
        let sched = Schedule::new(&g, ScheduleKind::ShuffledRounds, 1);
        let r = mirrored_run(&CiwNk::new(n, n).unwrap(), &g, sched, 20_000).unwrap();
        println!("ciw_nk n={n} k={n}: mirror held {}, all image agents yes: {}", r.held, r.image_all_yes());
    }
}
