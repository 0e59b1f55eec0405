//! Insider-threat injection.
//!
//! Each attack opportunity is two Bernoulli stages: an attempt at
//! `attack_rate`, then success at the role's vulnerability. Compromise
//! persists until a defense sends the member to recovery.

use rand::Rng;
use serde::Serialize;

use crate::perception::other_class;
use crate::types::{Member, MemberStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct AttackOutcome {
    pub attempted: bool,
    pub succeeded: bool,
}

/// Rolls one attack opportunity against `member`.
///
/// Members that are already compromised or recovering, and the command
/// center, are left untouched and consume no randomness.
pub fn maybe_attack<R: Rng + ?Sized>(
    member: &mut Member,
    attack_rate: f64,
    vuln: f64,
    rng: &mut R,
) -> AttackOutcome {
    if member.status != MemberStatus::Active || !member.role.is_attackable() {
        return AttackOutcome::default();
    }
    if rng.random::<f64>() >= attack_rate {
        return AttackOutcome::default();
    }
    let succeeded = rng.random::<f64>() < vuln;
    if succeeded {
        member.status = MemberStatus::Compromised;
    }
    AttackOutcome { attempted: true, succeeded }
}

/// A UGV report after false-data injection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub reported: usize,
    pub falsified: bool,
}

impl Observation {
    pub fn honest(class: usize) -> Self {
        Self { reported: class, falsified: false }
    }
}

/// A compromised UGV swaps the observed class for a uniformly random wrong one
/// with probability `p_falsify`.
pub fn corrupt_ugv_observation<R: Rng + ?Sized>(
    true_class: usize,
    n_classes: usize,
    p_falsify: f64,
    rng: &mut R,
) -> Observation {
    if n_classes >= 2 && rng.random::<f64>() < p_falsify {
        Observation { reported: other_class(true_class, n_classes, rng), falsified: true }
    } else {
        Observation::honest(true_class)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{MemberId, Role, TrustState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fresh(role: Role) -> Member {
        Member::new(MemberId(0), role, TrustState::default())
    }

    #[test]
    fn zero_rate_never_attempts() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let mut m = fresh(Role::Ugv);
            assert_eq!(maybe_attack(&mut m, 0.0, 1.0, &mut rng), AttackOutcome::default());
            assert_eq!(m.status, MemberStatus::Active);
        }
    }

    #[test]
    fn certain_attack_compromises() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut m = fresh(Role::AiAgent);
        let out = maybe_attack(&mut m, 1.0, 1.0, &mut rng);
        assert!(out.attempted && out.succeeded);
        assert_eq!(m.status, MemberStatus::Compromised);
    }

    #[test]
    fn non_active_members_are_untouched() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut cc = fresh(Role::CommandCenter);
        assert!(!maybe_attack(&mut cc, 1.0, 1.0, &mut rng).attempted);
        assert_eq!(cc.status, MemberStatus::Active);

        let mut rec = fresh(Role::Ugv);
        rec.status = MemberStatus::Recovering { remaining_missions: 2 };
        assert!(!maybe_attack(&mut rec, 1.0, 1.0, &mut rng).attempted);
        assert_eq!(rec.status, MemberStatus::Recovering { remaining_missions: 2 });

        let mut comp = fresh(Role::Ugv);
        comp.status = MemberStatus::Compromised;
        assert!(!maybe_attack(&mut comp, 1.0, 1.0, &mut rng).attempted);
    }

    #[test]
    fn compromise_fraction_is_product_of_stages() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut attempts = 0;
        let mut hits = 0;
        for _ in 0..n {
            let mut m = fresh(Role::Ugv);
            let out = maybe_attack(&mut m, 0.4, 0.3, &mut rng);
            attempts += out.attempted as usize;
            hits += out.succeeded as usize;
        }
        let frac = hits as f64 / n as f64;
        assert!((frac - 0.12).abs() < 0.005, "{frac}");
        let attempt_frac = attempts as f64 / n as f64;
        assert!((attempt_frac - 0.4).abs() < 3.0 * (0.24f64 / n as f64).sqrt(), "{attempt_frac}");
    }

    #[test]
    fn falsification_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            assert_eq!(corrupt_ugv_observation(0, 2, 1.0, &mut rng), Observation { reported: 1, falsified: true });
            assert_eq!(corrupt_ugv_observation(3, 5, 0.0, &mut rng), Observation::honest(3));
        }
    }

    #[test]
    fn falsification_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 10_000;
        let wrong = (0..n).filter(|i| {
            let truth = i % 5;
            corrupt_ugv_observation(truth, 5, 0.8, &mut rng).reported != truth
        });
        let frac = wrong.count() as f64 / n as f64;
        assert!((frac - 0.8).abs() < 0.015, "{frac}");
    }
}
