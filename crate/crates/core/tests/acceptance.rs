//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dash_sim::config::{parse_sweep, ExperimentConfig};
use dash_sim::engine::{audit_costs, run_repetition};
use dash_sim::experiment::{evaluate, run_experiment, PointResult, RunOptions};
use dash_sim::metrics::objective;
use dash_sim::perception::{ai_classify, fuse, ClassifierModel, Stimulus};
use dash_sim::trust::{attempt_info_sharing, compute_trust};
use dash_sim::types::{MemberStatus, Opinion, TrustState};
use dash_sim::{AggregateReport, ScenarioParams, Scheme};

const SEED: u64 = 42;

struct Gate {
    failures: usize,
}

impl Gate {
    fn check(&mut self, id: &str, ok: bool, detail: String) {
        println!("{id} {} — {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }
}

fn a1(g: &mut Gate) {
    let fresh = compute_trust(&TrustState::new(10.0, 0.001));
    let mid = compute_trust(&TrustState::new(10.0, 0.001).with_counts(5, 10, 100));
    let expected = 0.75 * (-0.1f64).exp();
    let ok = fresh == 1.0 && (mid - expected).abs() < 1e-12;
    g.check("A1", ok, format!("fresh={fresh} (5,10,100)={mid:.15} expected={expected:.15}"));
}

fn a2(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let n = 10_000;
    let shared = (0..n).filter(|_| attempt_info_sharing(0.7, rng.random::<f64>()).is_shared()).count();
    let frac = shared as f64 / n as f64;
    g.check("A2", (frac - 0.7).abs() <= 0.02, format!("shared fraction {frac:.4} (target 0.70 ± 0.02)"));
}

fn a3(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let model = ClassifierModel { p_ambiguous: 0.5, ..ClassifierModel::default() };
    let mut worst = 0.0f64;
    let mut exact = true;
    for i in 0..10_000 {
        let n = rng.random_range(2..=8);
        let class = rng.random_range(0..n);
        let status = if i % 3 == 0 { MemberStatus::Compromised } else { MemberStatus::Active };
        let stimulus = Stimulus { class, mission_target: Some(0), corrupted: i % 5 == 0 };
        let op = ai_classify(stimulus, n, status, &model, &mut rng);
        let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-9).collect();
        let total: f64 = raw.iter().sum();
        let a: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let p = fuse(&op, &a).expect("dimensions match");
        worst = worst.max((p.iter().sum::<f64>() - 1.0).abs());

        // vacuity-free opinion: fusion must return b untouched
        let mut b = op.belief().to_vec();
        let top = op.top_class();
        b[top] += op.vacuity();
        let certain = Opinion::new(b.clone(), 0.0, a.clone()).expect("valid opinion");
        exact &= fuse(&certain, &a).expect("dimensions match") == b;
    }
    g.check("A3", worst <= 1e-9 && exact, format!("max |ΣP−1| = {worst:.2e}; u=0 ⇒ P=b exactly: {exact}"));
}

type Table = BTreeMap<(Scheme, u64), AggregateReport>;

fn key(rate: f64) -> u64 {
    (rate * 10.0).round() as u64
}

fn sweep_table() -> (Table, Vec<u64>) {
    let config = ExperimentConfig {
        params: ScenarioParams::default(),
        schemes: Scheme::ALL.to_vec(),
        sweep: parse_sweep("attack_rate: 0.0..1.0 step 0.1").expect("valid sweep"),
    };
    let results: Vec<PointResult> = evaluate(&config, SEED, None).expect("valid experiment");
    let mut rates: Vec<u64> = results.iter().map(|r| key(r.point.attack_rate)).collect();
    rates.sort_unstable();
    rates.dedup();
    let table = results.into_iter().map(|r| ((r.scheme, key(r.point.attack_rate)), r.report)).collect();
    (table, rates)
}

fn a4(g: &mut Gate, t: &Table) {
    let m = |s| t[&(s, 4)].msr;
    let (d, s, f, b) = (m(Scheme::DashDf), m(Scheme::SmmDf), m(Scheme::DfOnly), m(Scheme::Base));
    let ok = d > s && s > f && f > b && d - b >= 0.25;
    g.check(
        "A4",
        ok,
        format!("MSR@0.4 DASH_DF={d:.3} SMM_DF={s:.3} DF_ONLY={f:.3} BASE={b:.3} (gap {:.3})", d - b),
    );
}

fn a5(g: &mut Gate, t: &Table) {
    let d = t[&(Scheme::DashDf, 10)].msr;
    let b = t[&(Scheme::Base, 10)].msr;
    g.check("A5", d >= 0.5 && b <= 0.15, format!("MSR@1.0 DASH_DF={d:.3} (≥0.50) BASE={b:.3} (≤0.15)"));
}

fn a6(g: &mut Gate, t: &Table, rates: &[u64]) {
    let mut zeros = true;
    let mut min_sci = f64::INFINITY;
    for &r in rates {
        for s in [Scheme::DfOnly, Scheme::Base] {
            let rep = &t[&(s, r)];
            zeros &= rep.sqi_mean == 0.0 && rep.sci_mean == 0.0;
        }
        min_sci = min_sci.min(t[&(Scheme::DashDf, r)].sci_mean);
    }
    g.check(
        "A6",
        zeros && min_sci >= 0.8,
        format!("DF_ONLY/BASE SQI=SCI=0 at all {} rates: {zeros}; min DASH_DF SCI={min_sci:.3} (≥0.8)", rates.len()),
    );
}

fn a7(g: &mut Gate, t: &Table, rates: &[u64]) {
    let max_dash = rates.iter().map(|r| t[&(Scheme::DashDf, *r)].r_human).fold(0.0, f64::max);
    let base = t[&(Scheme::Base, 10)].r_human;
    g.check(
        "A7",
        max_dash < 0.1 && base >= 0.5,
        format!("max DASH_DF R_human={max_dash:.3} (<0.1); BASE R_human@1.0={base:.3} (≥0.5)"),
    );
}

fn a8(g: &mut Gate, t: &Table) {
    let dash = &t[&(Scheme::DashDf, 4)];
    let smm = &t[&(Scheme::SmmDf, 4)];
    let mut lowest = true;
    let mut detail = Vec::new();
    for role in dash_sim::Role::TEAM {
        let others = [Scheme::SmmDf, Scheme::DfOnly, Scheme::Base].map(|s| t[&(s, 4)].compromised(role));
        let ours = dash.compromised(role);
        lowest &= others.iter().all(|o| ours < *o);
        detail.push(format!("{role}={ours:.3} vs min other {:.3}", others.iter().copied().fold(f64::INFINITY, f64::min)));
    }
    g.check(
        "A8",
        dash.oc_total > smm.oc_total && lowest,
        format!("OC@0.4 DASH_DF={:.3} > SMM_DF={:.3}; compromise {}", dash.oc_total, smm.oc_total, detail.join(", ")),
    );
}

fn a9(g: &mut Gate) {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = ExperimentConfig {
        params: ScenarioParams { n_sim: 12, n_missions: 40, ..Default::default() },
        schemes: Scheme::ALL.to_vec(),
        sweep: parse_sweep("attack_rate: 0.0..1.0 step 0.5").expect("valid sweep"),
    };
    let serial = dir.path().join("serial");
    let parallel = dir.path().join("parallel");
    run_experiment(&config, &serial, &RunOptions { jobs: Some(1), ..Default::default() }).expect("serial run");
    run_experiment(&config, &parallel, &RunOptions { jobs: Some(4), ..Default::default() }).expect("parallel run");
    let same = ["trend.csv", "summary.csv"].iter().all(|f| {
        fs::read(serial.join(f)).expect("serial csv") == fs::read(parallel.join(f)).expect("parallel csv")
    });

    // double-entry audit on every repetition of the reference scenario
    let params = ScenarioParams::default();
    let mut runs = 0;
    let mut balanced = true;
    for scheme in Scheme::ALL {
        for rep in 0..params.n_sim {
            let out = run_repetition(&params, scheme, SEED, rep, true);
            let audit = audit_costs(&out.events);
            balanced &= audit.len() == out.records.len()
                && audit.iter().zip(&out.records).all(|((m, c), r)| {
                    *m == r.mission
                        && (c.ugv - r.costs.ugv).abs() < 1e-9
                        && (c.ai - r.costs.ai).abs() < 1e-9
                        && (c.human - r.costs.human).abs() < 1e-9
                        && (c.recovery - r.costs.recovery).abs() < 1e-9
                });
            runs += 1;
        }
    }
    g.check(
        "A9",
        same && balanced,
        format!("serial vs 4-thread CSVs byte-identical: {same}; cost audit balanced on {runs} runs: {balanced}"),
    );
}

fn a10(g: &mut Gate) {
    let ai = objective(0.67, 0.3, 0.7, 0.3);
    let human = objective(1.0, 3.0, 0.7, 0.3);
    g.check(
        "A10",
        (ai - 0.38).abs() <= 1e-2 && (human + 0.2).abs() <= 1e-12,
        format!("objective(0.67,0.3)={ai:.4} (≈0.38); objective(1.0,3.0)={human:.15} (=−0.2)"),
    );
}

fn main() -> ExitCode {
    let mut g = Gate { failures: 0 };
    a1(&mut g);
    a2(&mut g);
    a3(&mut g);
    let (table, rates) = sweep_table();
    a4(&mut g, &table);
    a5(&mut g, &table);
    a6(&mut g, &table, &rates);
    a7(&mut g, &table, &rates);
    a8(&mut g, &table);
    a9(&mut g);
    a10(&mut g);
    if g.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", g.failures);
        ExitCode::FAILURE
    }
}
