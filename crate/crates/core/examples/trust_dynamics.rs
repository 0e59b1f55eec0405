//! How the decaying consensus ratio reacts to agreement, disagreement and a
//! passed bait task.

use dash_sim::trust::{compute_trust, needs_bait, record_outcome, reset_trust};
use dash_sim::types::TrustState;

fn main() {
    let zeta = 0.3;
    let mut honest = TrustState::default();
    let mut deviant = TrustState::default();

    println!("{:>5} {:>8} {:>8}", "task", "honest", "deviant");
    for task in 1..=400u32 {
        // honest member agrees 90% of the time, the deviant 20%
        honest = record_outcome(honest, task % 10 != 0);
        deviant = record_outcome(deviant, task % 5 == 0);
        if task % 50 == 0 {
            println!("{task:>5} {:>8.3} {:>8.3}", compute_trust(&honest), compute_trust(&deviant));
        }
        if needs_bait(&deviant, zeta) {
            println!("  task {task}: deviant trust {:.3} < {zeta}, bait task issued", compute_trust(&deviant));
            // a clean member would pass and start over
            deviant = reset_trust(deviant);
            println!("  after a passed bait: {:.3}", compute_trust(&deviant));
        }
    }
}
