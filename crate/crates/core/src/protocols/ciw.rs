use serde::Serialize;

use super::{late_phase_sum, phase_one_sum, Phase, Role};
use crate::error::ProtocolError;
use crate::protocol::{Output, Protocol, ProtocolParams, StepView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CiwState {
    pub leader: Role,
    pub phase: Phase,
    pub mode: u8,
    pub cnt: u32,
}

impl CiwState {
    pub const INITIAL: CiwState = CiwState { leader: Role::Leader, phase: Phase::One, mode: 0, cnt: 1 };

    pub const fn new(leader: Role, phase: Phase, mode: u8, cnt: u32) -> Self {
        Self { leader, phase, mode, cnt }
    }

    fn is_leader(&self) -> bool {
        self.leader.is_leader()
    }
}

/// One interaction of the weak-fairness protocol with population size `n`,
/// applied in place. Also used by [`Cig`](super::Cig) with `n` set to the
/// agents' common size estimate.
pub fn ciw_step(n: u32, a: &mut CiwState, b: &mut CiwState) {
    if a.is_leader() && b.is_leader() {
        // leader election
        a.cnt += b.cnt;
        b.leader = Role::Follower;
        b.cnt = 0;
        if a.cnt == n {
            a.phase = Phase::Two;
            a.cnt = 0;
        }
    } else if a.is_leader() && a.phase == Phase::Two && a.mode == b.mode {
        // out-degree counting
        a.cnt += 1;
        b.mode = 1 - b.mode;
        if a.cnt + 1 == n {
            a.phase = Phase::Three;
            a.cnt = 1;
            a.mode = 1 - a.mode;
        }
    } else if a.is_leader() && a.phase == Phase::Three && b.phase == Phase::One {
        // hand leadership to the next agent
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

/// Complete graph identification under weak fairness with exact `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CiwN {
    n: usize,
}

impl CiwN {
    pub fn new(n: usize) -> Result<Self, ProtocolError> {
        if n < 2 {
            return Err(ProtocolError::Population(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl Protocol for CiwN {
    type State = CiwState;

    fn name(&self) -> &'static str {
        "ciw_n"
    }

    fn params(&self) -> ProtocolParams {
        ProtocolParams { n: Some(self.n), k: None }
    }

    fn initial_state(&self) -> CiwState {
        CiwState::INITIAL
    }

    #[inline]
    fn transition(&self, a: &CiwState, b: &CiwState) -> (CiwState, CiwState) {
        let (mut a, mut b) = (*a, *b);
        ciw_step(self.n as u32, &mut a, &mut b);
        (a, b)
    }

    #[inline]
    fn output(&self, s: &CiwState) -> Output {
        if s.phase == Phase::Four {
            Output::Yes
        } else {
            Output::No
        }
    }

    fn variables(&self, s: &CiwState) -> Vec<(&'static str, u64)> {
        vec![
            ("leader", s.is_leader() as u64),
            ("phase", s.phase.doubled() / 2),
            ("mode", u64::from(s.mode)),
            ("cnt", u64::from(s.cnt)),
        ]
    }

    fn state_bound(&self) -> Option<u64> {
        Some(16 * (self.n as u64 + 1))
    }

    fn check_configuration(&self, config: &[CiwState]) -> Result<(), String> {
        if let Some(s) = config.iter().find(|s| s.cnt as usize > self.n) {
            return Err(format!("cnt {} exceeds n = {}", s.cnt, self.n));
        }
        phase_one_sum(config.iter().map(|s| (s.phase, s.cnt)), self.n)?;
        late_phase_sum(config.iter().map(|s| (s.phase, s.cnt)))?;
        if config.iter().any(|s| s.phase >= Phase::Two) {
            let leaders = config.iter().filter(|s| s.is_leader()).count();
            if leaders != 1 {
                return Err(format!("{leaders} leaders after leader election"));
            }
        }
        Ok(())
    }

    fn check_invariants(&self, view: &StepView<'_, CiwState>) -> Result<(), String> {
        let (a, b) = view.after_pair();
        for (before, after) in [(view.before.0, a), (view.before.1, b)] {
            if before.phase == Phase::Four && after.phase != Phase::Four {
                return Err("agent left phase 4".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Phase::*;
    use Role::{Follower as F, Leader as L};

    fn st(leader: Role, phase: Phase, mode: u8, cnt: u32) -> CiwState {
        CiwState::new(leader, phase, mode, cnt)
    }

    fn step(n: usize, a: CiwState, b: CiwState) -> (CiwState, CiwState) {
        CiwN::new(n).unwrap().transition(&a, &b)
    }

    #[test]
    fn two_initial_leaders_finish_election_at_n_2() {
        let init = CiwState::INITIAL;
        assert_eq!(step(2, init, init), (st(L, Two, 0, 0), st(F, One, 0, 0)));
    }

    #[test]
    fn mismatched_modes_fire_nothing() {
        let a = st(L, Two, 0, 0);
        let b = st(F, One, 1, 0);
        assert_eq!(step(3, a, b), (a, b));
    }

    #[test]
    fn election_reaching_n_moves_to_phase_two() {
        assert_eq!(step(3, st(L, One, 0, 2), st(L, One, 0, 1)), (st(L, Two, 0, 0), st(F, One, 0, 0)));
    }

    #[test]
    fn counting_reaches_n_minus_one() {
        assert_eq!(step(3, st(L, Two, 0, 1), st(F, One, 0, 0)), (st(L, Three, 1, 1), st(F, One, 1, 0)));
        // below n - 1 the leader stays in phase 2
        assert_eq!(step(4, st(L, Two, 0, 1), st(F, One, 0, 0)), (st(L, Two, 0, 2), st(F, One, 1, 0)));
    }

    #[test]
    fn phase_three_merge_detects_n() {
        assert_eq!(step(3, st(F, Three, 1, 2), st(F, Three, 1, 1)), (st(F, Four, 1, 3), st(F, Three, 1, 0)));
        assert_eq!(step(4, st(F, Three, 1, 2), st(F, Three, 1, 1)), (st(F, Three, 1, 3), st(F, Three, 1, 0)));
        // zero counts do not merge
        let (a, b) = (st(F, Three, 1, 0), st(F, Three, 1, 2));
        assert_eq!(step(3, a, b), (a, b));
    }

    #[test]
    fn leadership_transfer_and_epidemic() {
        assert_eq!(step(3, st(L, Three, 1, 1), st(F, One, 1, 0)), (st(F, Three, 1, 1), st(L, Two, 1, 0)));
        assert_eq!(step(3, st(F, Four, 0, 3), st(F, Three, 1, 0)), (st(F, Four, 0, 3), st(F, Four, 1, 0)));
        // phase 4 is only spread by the initiator
        let (a, b) = (st(F, Three, 1, 0), st(F, Four, 0, 3));
        assert_eq!(step(3, a, b), (a, b));
    }

    #[test]
    fn rejects_single_agent() {
        assert_eq!(CiwN::new(1), Err(ProtocolError::Population(1)));
    }

    #[test]
    fn outputs_follow_phase_four() {
        let p = CiwN::new(3).unwrap();
        assert_eq!(p.output(&CiwState::INITIAL), Output::No);
        assert_eq!(p.output(&st(F, Four, 0, 0)), Output::Yes);
        assert_eq!(p.output(&st(L, Three, 0, 1)), Output::No);
        assert_eq!(p.state_bound(), Some(64));
    }
}
