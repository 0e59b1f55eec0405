//! Scheme × sweep-point orchestration and CSV output.
//!
//! `trend.csv` has one row per (scheme, point, mission index); `summary.csv`
//! one row per (scheme, point) holding the final trend row. Row order is
//! canonical (schemes in config order, points in sweep order), so output
//! bytes do not depend on the worker count.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, Sweep};
use crate::engine::{run_repetition, run_scenario, Event};
use crate::error::{Error, Result};
use crate::metrics::{trend, AggregateReport, TrendPoint};
use crate::types::{ScenarioParams, Scheme, VulnTriplet};

pub const TREND_HEADER: [&str; 15] = [
    "scheme",
    "attack_rate",
    "vuln_triplet",
    "mission_index",
    "msr_window",
    "sqi",
    "sci",
    "oc_ugv",
    "oc_ai",
    "oc_human",
    "oc_recovery",
    "oc_total",
    "r_ugv",
    "r_ai",
    "r_human",
];

pub const SUMMARY_HEADER: [&str; 14] = [
    "scheme",
    "attack_rate",
    "vuln_triplet",
    "msr_window",
    "sqi",
    "sci",
    "oc_ugv",
    "oc_ai",
    "oc_human",
    "oc_recovery",
    "oc_total",
    "r_ugv",
    "r_ai",
    "r_human",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub attack_rate: f64,
    pub vuln: VulnTriplet,
}

impl SweepPoint {
    pub fn apply(&self, base: &ScenarioParams) -> ScenarioParams {
        let mut p = base.clone();
        p.attack_rate = self.attack_rate;
        p.set_vulnerabilities(self.vuln);
        p
    }
}

pub fn sweep_points(params: &ScenarioParams, sweep: &Sweep) -> Vec<SweepPoint> {
    let vuln = params.vulnerabilities();
    match sweep {
        Sweep::None => vec![SweepPoint { attack_rate: params.attack_rate, vuln }],
        Sweep::AttackRate(rates) => rates.iter().map(|&attack_rate| SweepPoint { attack_rate, vuln }).collect(),
        Sweep::Vulnerability(ts) => {
            ts.iter().map(|&vuln| SweepPoint { attack_rate: params.attack_rate, vuln }).collect()
        }
    }
}

#[derive(Debug, Clone)]
pub struct PointResult {
    pub scheme: Scheme,
    pub point: SweepPoint,
    pub report: AggregateReport,
    pub trend: Vec<TrendPoint>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
    /// Also write `events.ndjson` holding repetition 0 of every (scheme, point).
    pub event_log: bool,
}

#[derive(Serialize)]
struct TrendRow<'a> {
    scheme: &'a str,
    attack_rate: f64,
    vuln_triplet: String,
    mission_index: usize,
    msr_window: f64,
    sqi: f64,
    sci: f64,
    oc_ugv: f64,
    oc_ai: f64,
    oc_human: f64,
    oc_recovery: f64,
    oc_total: f64,
    r_ugv: f64,
    r_ai: f64,
    r_human: f64,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    scheme: &'a str,
    attack_rate: f64,
    vuln_triplet: String,
    msr_window: f64,
    sqi: f64,
    sci: f64,
    oc_ugv: f64,
    oc_ai: f64,
    oc_human: f64,
    oc_recovery: f64,
    oc_total: f64,
    r_ugv: f64,
    r_ai: f64,
    r_human: f64,
}

impl<'a> TrendRow<'a> {
    fn new(r: &'a PointResult, t: &TrendPoint) -> Self {
        Self {
            scheme: r.scheme.as_str(),
            attack_rate: r.point.attack_rate,
            vuln_triplet: r.point.vuln.to_string(),
            mission_index: t.mission_index,
            msr_window: t.msr_window,
            sqi: t.sqi,
            sci: t.sci,
            oc_ugv: t.oc.ugv,
            oc_ai: t.oc.ai,
            oc_human: t.oc.human,
            oc_recovery: t.oc.recovery,
            oc_total: t.oc.total,
            r_ugv: t.r_ugv,
            r_ai: t.r_ai,
            r_human: t.r_human,
        }
    }

    fn summary(self) -> SummaryRow<'a> {
        SummaryRow {
            scheme: self.scheme,
            attack_rate: self.attack_rate,
            vuln_triplet: self.vuln_triplet,
            msr_window: self.msr_window,
            sqi: self.sqi,
            sci: self.sci,
            oc_ugv: self.oc_ugv,
            oc_ai: self.oc_ai,
            oc_human: self.oc_human,
            oc_recovery: self.oc_recovery,
            oc_total: self.oc_total,
            r_ugv: self.r_ugv,
            r_ai: self.r_ai,
            r_human: self.r_human,
        }
    }
}

#[derive(Serialize)]
struct LogLine<'a> {
    scheme: &'a str,
    attack_rate: f64,
    vuln_triplet: String,
    #[serde(flatten)]
    event: &'a Event,
}

/// Runs every (scheme, point) in memory.
pub fn evaluate(config: &ExperimentConfig, seed: u64, jobs: Option<usize>) -> Result<Vec<PointResult>> {
    config.params.validate()?;
    let points = sweep_points(&config.params, &config.sweep);
    let work = || -> Result<Vec<PointResult>> {
        let mut out = Vec::new();
        for &scheme in &config.schemes {
            for &point in &points {
                let params = point.apply(&config.params);
                let run = run_scenario(&params, scheme, seed)?;
                let report = AggregateReport::from_repetitions(&run.repetitions, params.omega1, params.omega2)?;
                let trend = trend(&run.repetitions, params.trend_window);
                out.push(PointResult { scheme, point, report, trend });
            }
        }
        Ok(out)
    };
    match jobs {
        None => work(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParams(vec![format!("worker pool: {e}")]))?
            .install(work),
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub trend_csv: PathBuf,
    pub summary_csv: PathBuf,
    pub event_log: Option<PathBuf>,
    pub results: Vec<PointResult>,
}

fn output_error(path: &Path, source: std::io::Error) -> Error {
    Error::Output { path: path.to_path_buf(), source }
}

/// Writes `trend.csv`, `summary.csv` and optionally `events.ndjson` into
/// `out_dir`. The directory is created and the files opened before any
/// simulation runs.
pub fn run_experiment(config: &ExperimentConfig, out_dir: impl AsRef<Path>, opts: &RunOptions) -> Result<ExperimentOutput> {
    let out_dir = out_dir.as_ref();
    config.params.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| output_error(out_dir, e))?;
    let trend_path = out_dir.join("trend.csv");
    let summary_path = out_dir.join("summary.csv");
    let open = |p: &Path| File::create(p).map_err(|e| output_error(p, e));
    let trend_file = open(&trend_path)?;
    let summary_file = open(&summary_path)?;
    let events_path = opts.event_log.then(|| out_dir.join("events.ndjson"));
    let events_file = events_path.as_deref().map(open).transpose()?;

    let seed = opts.seed.unwrap_or(config.params.rng_seed);
    let results = evaluate(config, seed, opts.jobs)?;

    let mut trend_w = csv::Writer::from_writer(trend_file);
    let mut summary_w = csv::Writer::from_writer(summary_file);
    for r in &results {
        for t in &r.trend {
            trend_w.serialize(TrendRow::new(r, t))?;
        }
        if let Some(last) = r.trend.last() {
            summary_w.serialize(TrendRow::new(r, last).summary())?;
        }
    }
    trend_w.flush().map_err(|e| output_error(&trend_path, e))?;
    summary_w.flush().map_err(|e| output_error(&summary_path, e))?;

    if let (Some(file), Some(path)) = (events_file, &events_path) {
        let points = sweep_points(&config.params, &config.sweep);
        let jobs: Vec<(Scheme, SweepPoint)> =
            config.schemes.iter().flat_map(|&s| points.iter().map(move |&p| (s, p))).collect();
        let logs: Vec<Vec<Event>> =
            jobs.par_iter().map(|(s, p)| run_repetition(&p.apply(&config.params), *s, seed, 0, true).events).collect();
        let mut w = BufWriter::new(file);
        for ((scheme, point), events) in jobs.iter().zip(&logs) {
            for event in events {
                let line =
                    LogLine { scheme: scheme.as_str(), attack_rate: point.attack_rate, vuln_triplet: point.vuln.to_string(), event };
                serde_json::to_writer(&mut w, &line)?;
                w.write_all(b"\n").map_err(|e| output_error(path, e))?;
            }
        }
        w.flush().map_err(|e| output_error(path, e))?;
    }

    Ok(ExperimentOutput { trend_csv: trend_path, summary_csv: summary_path, event_log: events_path, results })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            params: ScenarioParams { n_sim: 3, n_missions: 12, ..Default::default() },
            ..Default::default()
        }
    }

    #[test]
    fn points_follow_sweep() {
        let p = ScenarioParams::default();
        assert_eq!(sweep_points(&p, &Sweep::None).len(), 1);
        let s = crate::config::parse_sweep("attack_rate: 0.0..1.0 step 0.1").unwrap();
        let pts = sweep_points(&p, &s);
        assert_eq!(pts.len(), 11);
        assert!(pts.iter().all(|x| x.vuln == p.vulnerabilities()));
        let pts = sweep_points(&p, &Sweep::Vulnerability(crate::types::VULN_TRIPLETS.to_vec()));
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().all(|x| x.attack_rate == p.attack_rate));
    }

    #[test]
    fn writes_fixed_headers() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&tiny(), dir.path(), &RunOptions::default()).unwrap();
        let trend = fs::read_to_string(out.trend_csv).unwrap();
        let summary = fs::read_to_string(out.summary_csv).unwrap();
        assert_eq!(trend.lines().next().unwrap(), TREND_HEADER.join(","));
        assert_eq!(summary.lines().next().unwrap(), SUMMARY_HEADER.join(","));
        assert_eq!(trend.lines().count(), 1 + 4 * 12);
        assert_eq!(summary.lines().count(), 1 + 4);
    }

    #[test]
    fn unwritable_output_fails_fast() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let cfg = ExperimentConfig {
            params: ScenarioParams { n_sim: 100_000, ..Default::default() },
            ..Default::default()
        };
        let start = std::time::Instant::now();
        let err = run_experiment(&cfg, blocker.join("sub"), &RunOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Output { .. }), "{err}");
        assert!(start.elapsed().as_secs() < 5);
    }
}
