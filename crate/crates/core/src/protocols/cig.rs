use serde::Serialize;

use super::{ciw_step, CiwState, Phase};
use crate::protocol::{Output, Protocol, ProtocolParams, StepView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CigState {
    /// The `CiwN` variables; `cnt` is bounded by `size` rather than a known `n`.
    pub ciw: CiwState,
    pub token: bool,
    pub size: u32,
}

impl CigState {
    pub const INITIAL: CigState = CigState { ciw: CiwState::INITIAL, token: true, size: 1 };

    pub const fn new(ciw: CiwState, token: bool, size: u32) -> Self {
        Self { ciw, token, size }
    }

    fn reset(&mut self) {
        self.ciw = CiwState::INITIAL;
    }
}

/// What happens when the only token holder in an interaction has a size no
/// larger than its partner's.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TokenMove {
    /// The token moves only between agents of equal size. A holder whose
    /// size is strictly smaller keeps its token. Agent sizes never decrease
    /// and `cnt <= size` holds everywhere.
    #[default]
    EqualSizeOnly,
    /// Token and sizes are swapped whenever the holder's size is not larger,
    /// without resetting either agent. The partner's size can drop below its
    /// `cnt`.
    SwapSizes,
}

/// Complete graph identification under global fairness without knowledge
/// of `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Cig {
    token_move: TokenMove,
}

impl Cig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_token_move(token_move: TokenMove) -> Self {
        Self { token_move }
    }

    pub fn token_move(&self) -> TokenMove {
        self.token_move
    }

    fn step(&self, a: &mut CigState, b: &mut CigState) {
        if a.token && b.token {
            b.token = false;
            let merged = a.size + b.size;
            a.size = merged;
            b.size = merged;
            a.reset();
            b.reset();
        } else if (a.token && a.size <= b.size) || (b.token && b.size <= a.size) {
            if a.size == b.size || self.token_move == TokenMove::SwapSizes {
                std::mem::swap(&mut a.token, &mut b.token);
                std::mem::swap(&mut a.size, &mut b.size);
            }
        } else if a.size != b.size {
            let (x, y) = if a.size > b.size { (&mut *a, &mut *b) } else { (&mut *b, &mut *a) };
            std::mem::swap(&mut x.token, &mut y.token);
            y.size = x.size;
            y.reset();
        }
        // not an else-branch: runs after any of the token rules above
        if a.size == b.size {
            let size = a.size;
            ciw_step(size, &mut a.ciw, &mut b.ciw);
            a.ciw.cnt = a.ciw.cnt.min(size);
            b.ciw.cnt = b.ciw.cnt.min(size);
        }
    }
}

impl Protocol for Cig {
    type State = CigState;

    fn name(&self) -> &'static str {
        "cig"
    }

    fn params(&self) -> ProtocolParams {
        ProtocolParams::default()
    }

    fn initial_state(&self) -> CigState {
        CigState::INITIAL
    }

    #[inline]
    fn transition(&self, a: &CigState, b: &CigState) -> (CigState, CigState) {
        let (mut a, mut b) = (*a, *b);
        self.step(&mut a, &mut b);
        (a, b)
    }

    #[inline]
    fn output(&self, s: &CigState) -> Output {
        if s.ciw.phase == Phase::Four {
            Output::Yes
        } else {
            Output::No
        }
    }

    #[inline]
    fn certified(&self, s: &CigState, n: usize) -> bool {
        s.ciw.phase == Phase::Four && s.size as usize == n
    }

    #[inline]
    fn settled(&self, s: &CigState, n: usize) -> bool {
        s.size as usize == n
    }

    fn variables(&self, s: &CigState) -> Vec<(&'static str, u64)> {
        vec![
            ("leader", s.ciw.leader.is_leader() as u64),
            ("phase", s.ciw.phase.doubled() / 2),
            ("mode", u64::from(s.ciw.mode)),
            ("cnt", u64::from(s.ciw.cnt)),
            ("token", s.token as u64),
            ("size", u64::from(s.size)),
        ]
    }

    fn may_leave_yes(&self, before: &CigState, after: &CigState) -> bool {
        before.size != after.size
    }

    fn check_configuration(&self, config: &[CigState]) -> Result<(), String> {
        let n = config.len() as u64;
        let token_sum: u64 = config.iter().filter(|s| s.token).map(|s| u64::from(s.size)).sum();
        if token_sum != n {
            return Err(format!("token sizes sum to {token_sum}, expected n = {n}"));
        }
        for (i, s) in config.iter().enumerate() {
            if u64::from(s.size) > n {
                return Err(format!("agent {i} has size {} > n = {n}", s.size));
            }
            if s.ciw.cnt > s.size {
                return Err(format!("agent {i} has cnt {} > size {}", s.ciw.cnt, s.size));
            }
        }
        Ok(())
    }

    fn check_invariants(&self, view: &StepView<'_, CigState>) -> Result<(), String> {
        let (a, b) = view.after_pair();
        for (before, after) in [(view.before.0, a), (view.before.1, b)] {
            if after.size < before.size {
                return Err(format!("size decreased from {} to {}", before.size, after.size));
            }
            if before.ciw.phase == Phase::Four && after.ciw.phase != Phase::Four && before.size == after.size {
                return Err("agent left phase 4 without a size change".into());
            }
        }
        Ok(())
    }
}
