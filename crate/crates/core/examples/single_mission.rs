//! Step through a few missions of one repetition with the event log on.

use dash_sim::engine::{run_mission, Event, World};
use dash_sim::{ScenarioParams, Scheme};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let params = ScenarioParams { attack_rate: 1.0, ..Default::default() };
    let mut world = World::new(&params, Scheme::DashDf).with_event_log();
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);

    for _ in 0..5 {
        let r = run_mission(&mut world, &mut rng);
        println!(
            "mission {}: success={} cycles={} detections={} baits={} defenses={} cost={:.2} SCI={:.2}",
            r.mission, r.success, r.cycles, r.detections, r.baits, r.defenses, r.costs.total(), r.sci()
        );
    }
    for e in world.events() {
        match e {
            Event::Attack { mission, member, role, succeeded: true } => println!("  m{mission}: {role} {member} compromised"),
            Event::Defense { mission, member, role, cause, substitute, .. } => {
                println!("  m{mission}: {role} {member} sent to recovery ({cause:?}), substitute {substitute:?}")
            }
            _ => {}
        }
    }
}
