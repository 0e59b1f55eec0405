//! Decaying consensus-ratio trust.
//!
//! `T = (N_C + λ) / (N_total + λ) · exp(-γ t)`, where `t` is the member's
//! task clock. Agreement with consensus raises the ratio, every handled task
//! advances the clock, and a passed bait task wipes all three counters.

use serde::Serialize;

use crate::types::TrustState;

pub fn compute_trust(state: &TrustState) -> f64 {
    let ratio = (state.n_consensus as f64 + state.lambda) / (state.n_total as f64 + state.lambda);
    let decay = (-state.gamma * state.task_clock as f64).exp();
    (ratio * decay).clamp(0.0, 1.0)
}

pub fn record_outcome(state: TrustState, consensus_matched: bool) -> TrustState {
    TrustState {
        n_consensus: state.n_consensus + u64::from(consensus_matched),
        n_total: state.n_total + 1,
        task_clock: state.task_clock + 1,
        ..state
    }
}

pub fn reset_trust(state: TrustState) -> TrustState {
    TrustState { n_consensus: 0, n_total: 0, task_clock: 0, ..state }
}

pub fn needs_bait(state: &TrustState, zeta: f64) -> bool {
    compute_trust(state) < zeta
}

/// Counters that start a member at `initial` trust instead of 1.
///
/// With `N_C = 0` the ratio `λ / (N_total + λ)` equals `initial` when
/// `N_total = λ (1 - initial) / initial`.
pub fn preloaded(state: TrustState, initial: f64) -> TrustState {
    if initial >= 1.0 {
        return reset_trust(state);
    }
    let n_total = (state.lambda * (1.0 - initial) / initial).round() as u64;
    TrustState { n_consensus: 0, n_total, task_clock: 0, ..state }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShareOutcome {
    Shared,
    Blocked,
}

impl ShareOutcome {
    pub fn is_shared(self) -> bool {
        self == ShareOutcome::Shared
    }
}

/// One Bernoulli(recipient_trust) gate on a transmission.
pub fn attempt_info_sharing(recipient_trust: f64, rng_draw: f64) -> ShareOutcome {
    if rng_draw <= recipient_trust {
        ShareOutcome::Shared
    } else {
        ShareOutcome::Blocked
    }
}
