//! Bait verification, defense, standby substitution and recovery timers.

use dash_sim::adtm::{run_bait, select_task, Roster};
use dash_sim::types::{MemberStatus, Role, ScenarioParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let params = ScenarioParams::default();
    for (trust, deception, defense) in [(0.9, true, true), (0.2, true, true), (0.2, false, true), (0.2, false, false)] {
        println!("trust {trust}, deception {deception}, defense {defense} -> {:?}", select_task(trust, params.zeta, deception, defense));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut roster = Roster::new(&params, false);
    let ai = roster.deployed_one(Role::AiAgent).unwrap();
    roster.member_mut(ai).status = MemberStatus::Compromised;

    let outcome = run_bait(roster.member_mut(ai), params.d_bait, params.fp_bait, &mut rng);
    println!("bait against compromised AI {ai}: {outcome:?}");
    let defense = roster.trigger_defense(ai, &params);
    println!(
        "defense: {ai} -> {:?}, substitute {:?}, recovery cost {}",
        roster.member(ai).status,
        defense.substitute,
        defense.cost
    );
    for mission in 1..=3 {
        let back = roster.tick_recovery();
        println!("after mission {mission}: {:?}, recovered {back:?}", roster.member(ai).status);
    }
    println!("AI census: {:?}", roster.census(Role::AiAgent));
}
