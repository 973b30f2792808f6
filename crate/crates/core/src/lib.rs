//! Population protocols that decide whether their communication graph is
//! complete.
//!
//! The crate provides three protocols ([`protocols::CiwN`],
//! [`protocols::CiwNk`], [`protocols::Cig`]), a simulation engine with
//! weakly fair and uniformly random schedulers, an exhaustive model checker
//! for global fairness on small instances, the doubled-graph construction
//! that defeats any weak-fairness protocol knowing only `n`, and numerical
//! helpers (random-walk hitting times, coupon-collector references).
//!
//! ```
//! use cliqueid::engine::{run, RunLabel, RunOptions};
//! use cliqueid::graph::{generate, GraphKind};
//! use cliqueid::protocols::CiwN;
//! use cliqueid::scheduler::{Schedule, ScheduleKind};
//!
//! let g = generate(GraphKind::Complete, 6, 0).unwrap();
//! let p = CiwN::new(6).unwrap();
//! let mut s = Schedule::new(&g, ScheduleKind::UniformRandom, 7);
//! let label = RunLabel { graph: "complete".into(), seed: 7, trial: 0 };
//! let record = run(&p, &g, &mut s, RunOptions::positive(6), &label);
//! assert!(record.stabilized());
//! ```

pub mod cli;
pub mod engine;
pub mod error;
pub mod graph;
pub mod modelcheck;
pub mod protocol;
pub mod protocols;
pub mod scheduler;
pub mod stats;
pub mod transform;

pub use graph::{Arc, Digraph, GraphKind};
pub use protocol::{Output, Protocol};
