//! Attack-rate sweep written to CSV.
//!
//! cargo run --release --example attack_sweep -- [out_dir] [n_sim]

use dash_sim::config::{parse_sweep, ExperimentConfig};
use dash_sim::experiment::{run_experiment, RunOptions};
use dash_sim::ScenarioParams;

fn main() -> dash_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "out/attack".into());
    let n_sim = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let config = ExperimentConfig {
        params: ScenarioParams { n_sim, ..Default::default() },
        sweep: parse_sweep("attack_rate: 0.0..1.0 step 0.1")?,
        ..Default::default()
    };
    let result = run_experiment(&config, &out, &RunOptions::default())?;
    println!("{:<8} {:>6} {:>6} {:>6} {:>6}", "scheme", "rate", "MSR", "SCI", "R_hum");
    for r in &result.results {
        println!("{:<8} {:>6.1} {:>6.3} {:>6.3} {:>6.3}", r.scheme.as_str(), r.point.attack_rate, r.report.msr, r.report.sci_mean, r.report.r_human);
    }
    println!("CSV in {}", result.summary_csv.parent().unwrap().display());
    Ok(())
}
