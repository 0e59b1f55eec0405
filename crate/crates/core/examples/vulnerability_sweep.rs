//! Sweep the five UGV:AI:HUMAN vulnerability triplets at a fixed attack rate.
//!
//! cargo run --release --example vulnerability_sweep -- [attack_rate] [n_sim]

use dash_sim::config::{ExperimentConfig, Sweep};
use dash_sim::experiment::evaluate;
use dash_sim::types::VULN_TRIPLETS;
use dash_sim::ScenarioParams;

fn main() -> dash_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let attack_rate = args.next().and_then(|a| a.parse().ok()).unwrap_or(0.4);
    let n_sim = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let config = ExperimentConfig {
        params: ScenarioParams { attack_rate, n_sim, ..Default::default() },
        sweep: Sweep::Vulnerability(VULN_TRIPLETS.to_vec()),
        ..Default::default()
    };
    for r in evaluate(&config, config.params.rng_seed, None)? {
        println!(
            "{:<8} {:<14} MSR {:.3}  OC {:>6.2}  R {:.3}/{:.3}/{:.3}",
            r.scheme.as_str(),
            r.point.vuln.to_string(),
            r.report.msr,
            r.report.oc_total,
            r.report.r_ugv,
            r.report.r_ai,
            r.report.r_human
        );
    }
    Ok(())
}
