use std::collections::HashMap;

use sha2::{Digest, Sha256};

use dash_sim::adtm::BaitOutcome;
use dash_sim::engine::{audit_costs, run_repetition, DefenseCause, Event};
use dash_sim::types::{AttackGranularity, MemberId};
use dash_sim::{run_scenario, ScenarioParams, Scheme};

fn params() -> ScenarioParams {
    ScenarioParams { n_missions: 60, attack_rate: 0.6, ..Default::default() }
}

fn count(events: &[Event], pred: impl Fn(&Event) -> bool) -> usize {
    events.iter().filter(|e| pred(e)).count()
}

#[test]
fn base_never_updates_trust_defends_or_shares() {
    for seed in 0..3 {
        let ev = run_repetition(&params(), Scheme::Base, seed, 0, true).events;
        assert_eq!(count(&ev, |e| matches!(e, Event::TrustUpdate { .. })), 0);
        assert_eq!(count(&ev, |e| matches!(e, Event::Defense { .. })), 0);
        assert_eq!(count(&ev, |e| matches!(e, Event::BaitTask { .. })), 0);
        assert_eq!(count(&ev, |e| matches!(e, Event::Share { .. })), 0);
        assert!(count(&ev, |e| matches!(e, Event::Consult { .. })) > 0, "BASE still asks the analyst");
    }
}

#[test]
fn df_only_never_shares_or_consults() {
    let ev = run_repetition(&params(), Scheme::DfOnly, 1, 0, true).events;
    assert_eq!(count(&ev, |e| matches!(e, Event::Share { .. })), 0);
    assert_eq!(count(&ev, |e| matches!(e, Event::Consult { .. })), 0);
    assert_eq!(count(&ev, |e| matches!(e, Event::BaitTask { .. })), 0);
    assert!(count(&ev, |e| matches!(e, Event::TrustUpdate { .. })) > 0);
}

#[test]
fn smm_df_defends_without_bait() {
    let ev = run_repetition(&params(), Scheme::SmmDf, 2, 0, true).events;
    assert_eq!(count(&ev, |e| matches!(e, Event::BaitTask { .. })), 0);
    assert!(ev.iter().all(|e| !matches!(e, Event::Defense { cause: DefenseCause::FailedBait, .. })));
}

#[test]
fn dash_defense_always_follows_failed_bait() {
    for seed in 0..3 {
        let ev = run_repetition(&params(), Scheme::DashDf, seed, 0, true).events;
        let mut last_bait: HashMap<MemberId, BaitOutcome> = HashMap::new();
        let mut defenses = 0;
        for e in &ev {
            match e {
                Event::BaitTask { member, outcome, task, .. } => {
                    assert_eq!(task.cost_charged, params().detect_cost(task.target_role));
                    last_bait.insert(*member, *outcome);
                }
                Event::Defense { member, cause, .. } => {
                    assert_eq!(*cause, DefenseCause::FailedBait);
                    assert_eq!(last_bait.remove(member), Some(BaitOutcome::Failed));
                    defenses += 1;
                }
                _ => {}
            }
        }
        assert!(defenses > 0);
    }
}

#[test]
fn clean_members_never_fail_bait() {
    let p = ScenarioParams { n_missions: 40, attack_rate: 0.0, ..Default::default() };
    let ev = run_repetition(&p, Scheme::DashDf, 7, 0, true).events;
    assert!(count(&ev, |e| matches!(e, Event::BaitTask { .. })) > 0);
    assert!(ev.iter().all(|e| !matches!(e, Event::BaitTask { outcome: BaitOutcome::Failed, .. })));
    assert_eq!(count(&ev, |e| matches!(e, Event::Defense { .. })), 0);
}

#[test]
fn cost_audit_balances_under_both_granularities() {
    for granularity in [AttackGranularity::PerMission, AttackGranularity::PerCycle] {
        let p = ScenarioParams { attack_granularity: granularity, bait_consumes_cycle: true, ..params() };
        for scheme in Scheme::ALL {
            let out = run_repetition(&p, scheme, 3, 1, true);
            let audit = audit_costs(&out.events);
            for ((m, c), r) in audit.iter().zip(&out.records) {
                assert_eq!(*m, r.mission);
                assert!((c.total() - r.costs.total()).abs() < 1e-9, "{scheme} {granularity:?} mission {m}");
            }
        }
    }
}

#[test]
fn cycle_budget_and_smm_zeros_hold() {
    for scheme in Scheme::ALL {
        let p = ScenarioParams { n_sim: 5, n_missions: 50, attack_rate: 0.8, ..Default::default() };
        let run = run_scenario(&p, scheme, 9).unwrap();
        for r in run.records() {
            assert!(r.cycles <= p.t_max_cycles);
            assert!(r.smm_correct <= r.smm_shared && r.smm_shared <= r.smm_attempts);
            if !scheme.config().smm_enabled {
                assert_eq!((r.sqi(), r.sci()), (0.0, 0.0));
            }
        }
    }
}

#[test]
fn zero_attack_rate_never_compromises() {
    let p = ScenarioParams { n_sim: 4, n_missions: 50, attack_rate: 0.0, ..Default::default() };
    for scheme in Scheme::ALL {
        let run = run_scenario(&p, scheme, 4).unwrap();
        assert!(run.records().all(|r| r.r_ugv == 0.0 && r.r_ai == 0.0 && r.r_human == 0.0));
    }
}

fn log_digest(scheme: Scheme, seed: u64) -> Vec<u8> {
    let ev = run_repetition(&params(), scheme, seed, 2, true).events;
    let mut h = Sha256::new();
    for e in &ev {
        h.update(serde_json::to_vec(e).unwrap());
        h.update(b"\n");
    }
    h.finalize().to_vec()
}

#[test]
fn equal_seeds_give_equal_event_logs() {
    for scheme in Scheme::ALL {
        assert_eq!(log_digest(scheme, 77), log_digest(scheme, 77));
    }
    assert_ne!(log_digest(Scheme::DashDf, 77), log_digest(Scheme::DashDf, 78));
}

#[test]
fn unattacked_base_is_bounded_by_classifier_noise() {
    // With no attacks the only failure source is classifier noise; the
    // default model needs about 22 of the 50 budgeted cycles.
    let p = ScenarioParams { n_sim: 10, n_missions: 100, attack_rate: 0.0, ..Default::default() };
    let run = run_scenario(&p, Scheme::Base, 5).unwrap();
    let msr = dash_sim::metrics::msr_over(&run.repetitions).unwrap();
    assert!(msr > 0.99, "{msr}");
}
