//! Shared-mental-model ledger.
//!
//! Every attempted transmission between team members is gated on the
//! recipient's trust and tallied here; SQI and SCI are ratios over the tally.

use rand::Rng;
use serde::Serialize;

use crate::trust::{attempt_info_sharing, compute_trust, ShareOutcome};
use crate::types::{Member, MemberId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InfoKind {
    SensedImage,
    UgvLocation,
    Status,
    QueueOrder,
    DetectionResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InfoEvent {
    pub sender: MemberId,
    pub recipient: MemberId,
    pub kind: InfoKind,
    pub outcome: ShareOutcome,
    /// `None` for blocked transmissions.
    pub correct: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SmmLedger {
    pub attempts: u64,
    pub shared: u64,
    pub correct: u64,
    #[serde(skip)]
    events: Option<Vec<InfoEvent>>,
}

impl SmmLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// A ledger that also keeps every individual event.
    pub fn retaining() -> Self {
        Self { events: Some(Vec::new()), ..Self::default() }
    }

    pub fn record(&mut self, event: InfoEvent) {
        self.attempts += 1;
        if event.outcome.is_shared() {
            self.shared += 1;
            if event.correct == Some(true) {
                self.correct += 1;
            }
        }
        if let Some(events) = &mut self.events {
            events.push(event);
        }
    }

    pub fn events(&self) -> &[InfoEvent] {
        self.events.as_deref().unwrap_or(&[])
    }

    pub fn is_empty(&self) -> bool {
        self.attempts == 0
    }

    pub fn merge(&mut self, other: &SmmLedger) {
        self.attempts += other.attempts;
        self.shared += other.shared;
        self.correct += other.correct;
        if let Some(events) = &mut self.events {
            events.extend_from_slice(other.events());
        }
    }
}

/// Gates one transmission on the recipient's trust and logs it.
///
/// Without trust updates nothing is ever withheld.
pub fn share<R: Rng + ?Sized>(
    ledger: &mut SmmLedger,
    sender: &Member,
    recipient: &Member,
    kind: InfoKind,
    content_correct: bool,
    trust_updates_enabled: bool,
    rng: &mut R,
) -> InfoEvent {
    let outcome = if trust_updates_enabled {
        attempt_info_sharing(compute_trust(&recipient.trust), rng.random::<f64>())
    } else {
        ShareOutcome::Shared
    };
    let event = InfoEvent {
        sender: sender.id,
        recipient: recipient.id,
        kind,
        outcome,
        correct: outcome.is_shared().then_some(content_correct),
    };
    ledger.record(event);
    event
}

pub fn sqi(ledger: &SmmLedger) -> f64 {
    if ledger.shared == 0 {
        0.0
    } else {
        ledger.correct as f64 / ledger.shared as f64
    }
}

pub fn sci(ledger: &SmmLedger) -> f64 {
    if ledger.attempts == 0 {
        0.0
    } else {
        ledger.shared as f64 / ledger.attempts as f64
    }
}

/// Stable sort of pending items by source trust, highest first.
pub fn queue_order<T: Clone>(pending: &[(T, f64)]) -> Vec<T> {
    let mut idx: Vec<usize> = (0..pending.len()).collect();
    idx.sort_by(|&a, &b| pending[b].1.total_cmp(&pending[a].1));
    idx.into_iter().map(|i| pending[i].0.clone()).collect()
}
