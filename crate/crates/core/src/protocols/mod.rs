//! The three complete-graph identification protocols.
//!
//! * [`CiwN`]: weak fairness, exact knowledge of `n`, `16(n+1)` states.
//! * [`CiwNk`]: the same with the population split into `k` groups that
//!   count out-degrees in parallel.
//! * [`Cig`]: global fairness, no knowledge of `n`; estimates the size with
//!   merging tokens and runs the `CiwN` rules among agents of equal size.
//!
//! Rules are evaluated top to bottom and the first matching guard wins.

mod cig;
mod ciw;
mod ciwk;

use std::fmt;

use serde::{Serialize, Serializer};

pub use cig::{Cig, CigState, TokenMove};
pub use ciw::{ciw_step, CiwN, CiwState};
pub use ciwk::{CiwNk, CiwkState, MAX_GROUPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Role {
    #[serde(rename = "F")]
    Follower,
    #[serde(rename = "L")]
    Leader,
}

impl Role {
    pub fn is_leader(self) -> bool {
        self == Role::Leader
    }
}

/// Protocol phase. `OneAndHalf` is only used by [`CiwNk`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    One,
    OneAndHalf,
    Two,
    Three,
    Four,
}

impl Phase {
    /// Twice the phase number, so that 1.5 stays integral.
    pub fn doubled(self) -> u64 {
        match self {
            Phase::One => 2,
            Phase::OneAndHalf => 3,
            Phase::Two => 4,
            Phase::Three => 6,
            Phase::Four => 8,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.doubled() as f64 / 2.0
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}

/// Sum check shared by both CIW variants: the agents in phases 3 and 4 hold
/// exactly one unit of `cnt` each in total.
pub(crate) fn late_phase_sum<I>(states: I) -> Result<(), String>
where
    I: IntoIterator<Item = (Phase, u32)>,
{
    let (mut members, mut total) = (0u64, 0u64);
    for (phase, cnt) in states {
        if phase >= Phase::Three {
            members += 1;
            total += u64::from(cnt);
        }
    }
    if members == total {
        Ok(())
    } else {
        Err(format!("phase-3/4 cnt sum {total} differs from |V3 u V4| = {members}"))
    }
}

/// While every agent is in phase 1, `cnt` sums to `n`.
pub(crate) fn phase_one_sum<I>(states: I, n: usize) -> Result<(), String>
where
    I: IntoIterator<Item = (Phase, u32)>,
{
    let mut total = 0u64;
    for (phase, cnt) in states {
        if phase != Phase::One {
            return Ok(());
        }
        total += u64::from(cnt);
    }
    if total == n as u64 {
        Ok(())
    } else {
        Err(format!("phase-1 cnt sum {total} differs from n = {n}"))
    }
}
