use serde::Serialize;

use super::{late_phase_sum, phase_one_sum, Phase, Role};
use crate::error::ProtocolError;
use crate::protocol::{Output, Protocol, ProtocolParams, StepView};

/// `mode` is a bit vector stored in a `u64`.
pub const MAX_GROUPS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CiwkState {
    pub leader: Role,
    pub phase: Phase,
    /// Bit `g` is `mode[g]`.
    pub mode: u64,
    /// `k` is the null group.
    pub group: u16,
    pub cnt: u32,
}

impl CiwkState {
    pub const fn new(leader: Role, phase: Phase, mode: u64, group: u16, cnt: u32) -> Self {
        Self { leader, phase, mode, group, cnt }
    }

    pub fn mode_bit(&self, g: u16) -> u64 {
        (self.mode >> g) & 1
    }

    fn is_leader(&self) -> bool {
        self.leader.is_leader()
    }
}

/// Weak-fairness protocol with `k` groups counting out-degrees in parallel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CiwNk {
    n: usize,
    k: usize,
}

impl CiwNk {
    pub fn new(n: usize, k: usize) -> Result<Self, ProtocolError> {
        if n < 2 {
            return Err(ProtocolError::Population(n));
        }
        if k == 0 || k > n || k > MAX_GROUPS {
            return Err(ProtocolError::GroupCount { n, k });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn step(&self, a: &mut CiwkState, b: &mut CiwkState) {
        let n = self.n as u32;
        let k = self.k as u16;
        if a.is_leader() && b.is_leader() && a.phase == Phase::One && b.phase == Phase::One {
            // leader election; confined to phase 1 so that group leaders never merge
            a.cnt += b.cnt;
            b.leader = Role::Follower;
            b.cnt = 0;
            if a.cnt == n {
                a.phase = Phase::OneAndHalf;
            }
        } else if a.is_leader() && a.phase == Phase::OneAndHalf && b.group == k {
            // group assignment
            a.cnt -= 1;
            b.group = (a.cnt % u32::from(k)) as u16;
            if a.cnt < u32::from(k) {
                b.leader = Role::Leader;
                b.phase = Phase::Two;
            }
            if a.cnt == 1 {
                a.leader = Role::Leader;
                a.phase = Phase::Two;
                a.cnt = 0;
                a.group = 0;
            }
        } else if a.is_leader() && a.phase == Phase::Two && a.mode_bit(a.group) == b.mode_bit(a.group) {
            let bit = 1u64 << a.group;
            a.cnt += 1;
            b.mode ^= bit;
            if a.cnt + 1 == n {
                a.phase = Phase::Three;
                a.cnt = 1;
                a.mode ^= bit;
            }
        } else if a.is_leader() && a.phase == Phase::Three && b.phase == Phase::One && a.group == b.group {
            a.leader = Role::Follower;
            b.leader = Role::Leader;
            b.phase = Phase::Two;
        } else if a.phase == Phase::Three && b.phase == Phase::Three && a.cnt > 0 && b.cnt > 0 {
            a.cnt += b.cnt;
            b.cnt = 0;
            if a.cnt == n {
                a.phase = Phase::Four;
            }
        } else if a.phase == Phase::Four {
            b.phase = Phase::Four;
        }
    }
}

impl Protocol for CiwNk {
    type State = CiwkState;

    fn name(&self) -> &'static str {
        "ciw_nk"
    }

    fn params(&self) -> ProtocolParams {
        ProtocolParams { n: Some(self.n), k: Some(self.k) }
    }

    fn initial_state(&self) -> CiwkState {
        CiwkState::new(Role::Leader, Phase::One, 0, self.k as u16, 1)
    }

    #[inline]
    fn transition(&self, a: &CiwkState, b: &CiwkState) -> (CiwkState, CiwkState) {
        let (mut a, mut b) = (*a, *b);
        self.step(&mut a, &mut b);
        (a, b)
    }

    #[inline]
    fn output(&self, s: &CiwkState) -> Output {
        if s.phase == Phase::Four {
            Output::Yes
        } else {
            Output::No
        }
    }

    fn variables(&self, s: &CiwkState) -> Vec<(&'static str, u64)> {
        vec![
            ("leader", s.is_leader() as u64),
            ("phase_x2", s.phase.doubled()),
            ("mode", s.mode),
            ("group", u64::from(s.group)),
            ("cnt", u64::from(s.cnt)),
        ]
    }

    fn state_bound(&self) -> Option<u64> {
        let (n, k) = (self.n as u64, self.k as u64);
        Some(10 * (n + 1) * (k + 1) * (1u64 << k))
    }

    fn check_configuration(&self, config: &[CiwkState]) -> Result<(), String> {
        if let Some(s) = config.iter().find(|s| s.cnt as usize > self.n) {
            return Err(format!("cnt {} exceeds n = {}", s.cnt, self.n));
        }
        phase_one_sum(config.iter().map(|s| (s.phase, s.cnt)), self.n)?;
        late_phase_sum(config.iter().map(|s| (s.phase, s.cnt)))?;
        let k = self.k;
        if config.iter().any(|s| s.phase >= Phase::Two) {
            let mut leaders = vec![0usize; k];
            for s in config.iter().filter(|s| s.is_leader() && (s.group as usize) < k) {
                leaders[s.group as usize] += 1;
            }
            if let Some(g) = leaders.iter().position(|&c| c > 1) {
                return Err(format!("group {g} has {} leaders", leaders[g]));
            }
        }
        if config.iter().all(|s| (s.group as usize) < k) {
            let mut sizes = vec![0usize; k];
            for s in config {
                sizes[s.group as usize] += 1;
            }
            let n = config.len();
            let (lo, hi) = (n / k, n.div_ceil(k));
            if let Some(g) = sizes.iter().position(|&c| c < lo || c > hi) {
                return Err(format!("group {g} has {} members, expected {lo} or {hi}", sizes[g]));
            }
        }
        Ok(())
    }

    fn check_invariants(&self, view: &StepView<'_, CiwkState>) -> Result<(), String> {
        let (a, b) = view.after_pair();
        for (before, after) in [(view.before.0, a), (view.before.1, b)] {
            if before.phase == Phase::Four && after.phase != Phase::Four {
                return Err("agent left phase 4".into());
            }
        }
        Ok(())
    }
}
