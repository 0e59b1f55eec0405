//! All four schemes on the same seeded workload.
//!
//! cargo run --release --example scheme_comparison -- [attack_rate] [n_sim]

use dash_sim::{run_scenario, AggregateReport, ScenarioParams, Scheme};

fn main() -> dash_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let attack_rate = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.4);
    let n_sim = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let params = ScenarioParams { attack_rate, n_sim, ..Default::default() };

    println!("attack_rate={attack_rate} reps={n_sim} missions={}", params.n_missions);
    println!("{:<8} {:>6} {:>6} {:>6} {:>7} {:>6} {:>6} {:>6} {:>7}", "scheme", "MSR", "SQI", "SCI", "OC", "R_ugv", "R_ai", "R_hum", "obj");
    for scheme in Scheme::ALL {
        let run = run_scenario(&params, scheme, params.rng_seed)?;
        let r = AggregateReport::from_repetitions(&run.repetitions, params.omega1, params.omega2)?;
        println!(
            "{:<8} {:>6.3} {:>6.3} {:>6.3} {:>7.3} {:>6.3} {:>6.3} {:>6.3} {:>7.3}",
            scheme.as_str(), r.msr, r.sqi_mean, r.sci_mean, r.oc_total, r.r_ugv, r.r_ai, r.r_human, r.objective
        );
    }
    Ok(())
}
