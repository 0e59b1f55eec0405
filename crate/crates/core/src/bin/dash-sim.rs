use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dash_sim::config::{load_config, ExperimentConfig, Sweep};
use dash_sim::experiment::{run_experiment, RunOptions};
use dash_sim::types::VULN_TRIPLETS;
use dash_sim::Scheme;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepArg {
    Attack,
    Vuln,
    None,
}

/// Run seeded scheme comparisons and write trend/summary CSVs.
#[derive(Debug, Parser)]
#[command(name = "dash-sim", version)]
struct Cli {
    /// TOML config; omitted keys keep their defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `rng_seed` from the config
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the config's sweep (attack: 0.0..1.0 step 0.1; vuln: the five standard triplets)
    #[arg(long, value_enum)]
    sweep: Option<SweepArg>,
    /// Comma-separated scheme list, e.g. DASH_DF,BASE
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<String>>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write events.ndjson (repetition 0 of every scheme and sweep point)
    #[arg(long)]
    event_log: bool,
}

fn run(cli: Cli) -> dash_sim::Result<()> {
    let mut config = match &cli.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(names) = &cli.schemes {
        config.schemes = names.iter().map(|n| n.parse::<Scheme>()).collect::<dash_sim::Result<_>>()?;
    }
    match cli.sweep {
        Some(SweepArg::Attack) => {
            config.sweep = Sweep::AttackRate((0..=10).map(|i| f64::from(i) / 10.0).collect());
        }
        Some(SweepArg::Vuln) => config.sweep = Sweep::Vulnerability(VULN_TRIPLETS.to_vec()),
        Some(SweepArg::None) => config.sweep = Sweep::None,
        None => {}
    }
    let opts = RunOptions { seed: cli.seed, jobs: cli.jobs, event_log: cli.event_log };
    let out = run_experiment(&config, &cli.out, &opts)?;
    println!("wrote {} and {}", out.trend_csv.display(), out.summary_csv.display());
    if let Some(log) = out.event_log {
        println!("wrote {}", log.display());
    }
    for r in &out.results {
        println!(
            "{:<8} attack={:<4} vuln={:<14} msr={:.3} sqi={:.3} sci={:.3} oc={:.3}",
            r.scheme.as_str(),
            r.point.attack_rate,
            r.point.vuln.to_string(),
            r.report.msr,
            r.report.sqi_mean,
            r.report.sci_mean,
            r.report.oc_total
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dash-sim: {e}");
            ExitCode::FAILURE
        }
    }
}
