//! AI opinions, the escalation test, and analyst base-rate fusion.

use dash_sim::perception::{ai_classify, classify, fuse, human_base_rate, needs_human, ClassifierModel, Stimulus};
use dash_sim::types::{MemberStatus, Opinion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dash_sim::Result<()> {
    let op = Opinion::with_uniform_prior(vec![0.2, 0.3, 0.1, 0.1, 0.05], 0.25)?;
    println!("hand-made opinion, u = {}: P = {:?}", op.vacuity(), fuse(&op, op.base_rate())?);

    let model = ClassifierModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tau_u = 0.25;
    let (mut escalated, mut rescued, n) = (0, 0, 10_000);
    for i in 0..n {
        let truth = i % 5;
        let op = ai_classify(Stimulus::plain(truth), 5, MemberStatus::Active, &model, &mut rng);
        if needs_human(&op, tau_u) {
            escalated += 1;
            let a = human_base_rate(truth, 5, MemberStatus::Active, &model, &mut rng);
            let fused = classify(&fuse(&op, &a)?);
            if op.top_class() != truth && fused == truth {
                rescued += 1;
            }
        }
    }
    println!("escalated {escalated}/{n} uncertain opinions; analyst prior fixed {rescued} AI mistakes");
    Ok(())
}
