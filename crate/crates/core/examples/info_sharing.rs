//! Trust-gated sharing, ledger ratios and the trust-ranked AI queue.

use dash_sim::smm::{queue_order, sci, share, sqi, InfoKind, SmmLedger};
use dash_sim::trust::preloaded;
use dash_sim::types::{Member, MemberId, MemberStatus, Role, TrustState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ledger = SmmLedger::new();
    let mut sender = Member::new(MemberId(0), Role::Ugv, TrustState::default());
    for recipient_trust in [1.0, 0.7, 0.3] {
        let recipient = Member::new(MemberId(1), Role::AiAgent, preloaded(TrustState::default(), recipient_trust));
        let mut one = SmmLedger::new();
        for _ in 0..1000 {
            share(&mut one, &sender, &recipient, InfoKind::SensedImage, true, true, &mut rng);
        }
        println!("recipient trust {recipient_trust}: SCI {:.3}", sci(&one));
        ledger.merge(&one);
    }

    sender.status = MemberStatus::Compromised;
    let recipient = Member::new(MemberId(1), Role::AiAgent, TrustState::default());
    for i in 0..1000 {
        share(&mut ledger, &sender, &recipient, InfoKind::UgvLocation, i % 5 == 0, true, &mut rng);
    }
    println!("overall: attempts {} shared {} correct {} -> SQI {:.3} SCI {:.3}", ledger.attempts, ledger.shared, ledger.correct, sqi(&ledger), sci(&ledger));

    let pending = [("ugv-a", 0.9), ("ugv-b", 0.5), ("ugv-c", 0.7)];
    println!("AI queue: {:?}", queue_order(&pending));
}
