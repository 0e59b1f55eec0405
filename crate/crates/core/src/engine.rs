//! Detection cycles, missions and repetitions.
//!
//! A cycle runs dispatch → sensing (optionally multi-UGV) → AI classification
//! → optional analyst fusion → trust feedback. A mission repeats cycles,
//! interleaved with bait and defense decisions, until the detection quota or
//! the cycle budget is reached.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::adtm::{run_bait, select_task_for, BaitOutcome, Roster, TaskDecision};
use crate::attacks::{corrupt_ugv_observation, maybe_attack, Observation};
use crate::error::Result;
use crate::perception::{ai_classify, classify, fuse, human_base_rate, needs_human, other_class, Stimulus};
use crate::rng::repetition_rng;
use crate::smm::{queue_order, share, InfoEvent, InfoKind, SmmLedger};
use crate::trust::record_outcome;
use crate::types::{
    argmax, AttackGranularity, MemberId, Role, ScenarioParams, Scheme, SchemeConfig, Task, TaskId,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub ugv: f64,
    pub ai: f64,
    pub human: f64,
    pub recovery: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.ugv + self.ai + self.human + self.recovery
    }

    pub fn charge(&mut self, role: Role, amount: f64) {
        match role {
            Role::Ugv => self.ugv += amount,
            Role::AiAgent => self.ai += amount,
            Role::HumanAnalyst => self.human += amount,
            Role::CommandCenter => {}
        }
    }

    pub fn add(&mut self, other: &CostBreakdown) {
        self.ugv += other.ugv;
        self.ai += other.ai;
        self.human += other.human;
        self.recovery += other.recovery;
    }

    pub fn scaled(&self, k: f64) -> CostBreakdown {
        CostBreakdown { ugv: self.ugv * k, ai: self.ai * k, human: self.human * k, recovery: self.recovery * k }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DefenseCause {
    FailedBait,
    LowTrust,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CycleKind {
    Detection,
    Bait,
    /// No UGV or no AI available; the cycle still burns budget.
    Aborted,
}

/// One entry of the audit log. Every cost-bearing event carries its charge so
/// the log can be re-summed independently of the mission records.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    MissionStart { mission: usize, target: usize },
    Attack { mission: usize, member: MemberId, role: Role, succeeded: bool },
    Sense { mission: usize, member: MemberId, reported: usize, falsified: bool, cost: f64 },
    Classify { mission: usize, member: MemberId, vacuity: f64, top: usize, cost: f64 },
    Consult { mission: usize, member: MemberId, cost: f64 },
    TrustUpdate { mission: usize, member: MemberId, matched: bool },
    BaitTask { mission: usize, task: Task, member: MemberId, outcome: BaitOutcome },
    Defense { mission: usize, member: MemberId, role: Role, cause: DefenseCause, substitute: Option<MemberId>, cost: f64 },
    Share { mission: usize, info: InfoEvent },
    Cycle { mission: usize, index: usize, kind: CycleKind, true_class: Option<usize>, confirmed: Option<usize>, detected: bool },
    MissionEnd { mission: usize, success: bool, cycles: usize, detections: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleResult {
    pub kind: CycleKind,
    pub true_class: Option<usize>,
    pub confirmed: Option<usize>,
    pub target_detected: bool,
    pub consulted_analyst: bool,
    pub costs: CostBreakdown,
}

impl CycleResult {
    fn aborted() -> Self {
        Self {
            kind: CycleKind::Aborted,
            true_class: None,
            confirmed: None,
            target_detected: false,
            consulted_analyst: false,
            costs: CostBreakdown::default(),
        }
    }
}

/// Per-mission metric snapshot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub repetition: usize,
    pub mission: usize,
    /// `C_i`: the detection quota was met within the cycle budget.
    pub success: bool,
    /// `T_i`: cycles consumed, bait cycles and aborted cycles included.
    pub cycles: usize,
    pub detections: usize,
    pub costs: CostBreakdown,
    pub smm_attempts: u64,
    pub smm_shared: u64,
    pub smm_correct: u64,
    /// Fraction of deployed UGVs compromised at mission end.
    pub r_ugv: f64,
    pub r_ai: f64,
    pub r_human: f64,
    pub baits: u32,
    pub defenses: u32,
    pub consultations: u32,
}

impl RunRecord {
    pub fn sqi(&self) -> f64 {
        if self.smm_shared == 0 {
            0.0
        } else {
            self.smm_correct as f64 / self.smm_shared as f64
        }
    }

    pub fn sci(&self) -> f64 {
        if self.smm_attempts == 0 {
            0.0
        } else {
            self.smm_shared as f64 / self.smm_attempts as f64
        }
    }

    pub fn compromised(&self, role: Role) -> f64 {
        match role {
            Role::Ugv => self.r_ugv,
            Role::AiAgent => self.r_ai,
            Role::HumanAnalyst => self.r_human,
            Role::CommandCenter => 0.0,
        }
    }
}

/// Reports of the sensing UGVs mapped to per-UGV consensus flags against the
/// confirmed class. When nobody matches, everybody loses.
pub fn multi_ugv_feedback(reports: &[(MemberId, usize)], confirmed: usize) -> Vec<(MemberId, bool)> {
    reports.iter().map(|&(id, class)| (id, class == confirmed)).collect()
}

/// Mutable simulation state for one repetition.
#[derive(Debug, Clone)]
pub struct World {
    pub params: ScenarioParams,
    pub scheme: SchemeConfig,
    pub roster: Roster,
    pub mission_index: usize,
    pub repetition: usize,
    cycle_counter: usize,
    next_task: u64,
    ledger: SmmLedger,
    log: Option<Vec<Event>>,
}

#[derive(Default)]
struct MissionTally {
    costs: CostBreakdown,
    baits: u32,
    defenses: u32,
    consultations: u32,
}

impl World {
    pub fn new(params: &ScenarioParams, scheme: impl Into<SchemeConfig>) -> Self {
        let scheme = scheme.into();
        Self {
            roster: Roster::new(params, scheme.smm_enabled),
            params: params.clone(),
            scheme,
            mission_index: 0,
            repetition: 0,
            cycle_counter: 0,
            next_task: 0,
            ledger: SmmLedger::new(),
            log: None,
        }
    }

    pub fn with_event_log(mut self) -> Self {
        self.log = Some(Vec::new());
        self
    }

    pub fn events(&self) -> &[Event] {
        self.log.as_deref().unwrap_or(&[])
    }

    pub fn take_events(&mut self) -> Vec<Event> {
        self.log.as_mut().map(std::mem::take).unwrap_or_default()
    }

    fn emit(&mut self, event: impl FnOnce() -> Event) {
        if let Some(log) = &mut self.log {
            log.push(event());
        }
    }

    pub fn mission_target(&self) -> usize {
        self.mission_index % self.params.n_classes
    }

    fn attack<R: Rng + ?Sized>(&mut self, id: MemberId, rng: &mut R) {
        let rate = self.params.attack_rate;
        let role = self.roster.member(id).role;
        let vuln = self.params.vulnerabilities().for_role(role);
        let out = maybe_attack(self.roster.member_mut(id), rate, vuln, rng);
        if out.attempted {
            let mission = self.mission_index;
            self.emit(|| Event::Attack { mission, member: id, role, succeeded: out.succeeded });
        }
    }

    fn per_cycle_attacks(&self) -> bool {
        self.params.attack_granularity == AttackGranularity::PerCycle
    }

    fn update_trust(&mut self, id: MemberId, matched: bool) {
        if !self.scheme.trust_updates_enabled {
            return;
        }
        let m = self.roster.member_mut(id);
        m.trust = record_outcome(m.trust, matched);
        let mission = self.mission_index;
        self.emit(|| Event::TrustUpdate { mission, member: id, matched });
    }

    fn share<R: Rng + ?Sized>(&mut self, from: MemberId, to: MemberId, kind: InfoKind, correct: bool, rng: &mut R) {
        let trust_updates = self.scheme.trust_updates_enabled;
        let info = share(
            &mut self.ledger,
            self.roster.member(from),
            self.roster.member(to),
            kind,
            correct,
            trust_updates,
            rng,
        );
        let mission = self.mission_index;
        self.emit(|| Event::Share { mission, info });
    }

    /// Status and location chatter: honest unless a compromised sender's
    /// falsification roll fires.
    fn chatter_correct<R: Rng + ?Sized>(&self, sender: MemberId, rng: &mut R) -> bool {
        !(self.roster.member(sender).status.is_compromised() && rng.random::<f64>() < self.params.p_falsify)
    }

    fn defend(&mut self, id: MemberId, cause: DefenseCause, tally: &mut MissionTally) {
        let out = self.roster.trigger_defense(id, &self.params);
        tally.costs.recovery += out.cost;
        tally.defenses += 1;
        let mission = self.mission_index;
        self.emit(|| Event::Defense {
            mission,
            member: id,
            role: out.role,
            cause,
            substitute: out.substitute,
            cost: out.cost,
        });
    }

    fn team(&self) -> Vec<MemberId> {
        let mut ids = self.roster.deployed(Role::Ugv);
        ids.extend(self.roster.deployed_one(Role::AiAgent));
        ids.extend(self.roster.deployed_one(Role::HumanAnalyst));
        ids
    }
}

/// Runs one regular detection cycle for the current mission target.
pub fn run_cycle<R: Rng + ?Sized>(world: &mut World, rng: &mut R) -> CycleResult {
    let p = world.params.clone();
    let scheme = world.scheme;
    let mission = world.mission_index;
    let target = world.mission_target();

    let ugvs = world.roster.deployed(Role::Ugv);
    let Some(ai) = world.roster.deployed_one(Role::AiAgent) else {
        return CycleResult::aborted();
    };
    if ugvs.is_empty() {
        return CycleResult::aborted();
    }
    let analyst = world.roster.deployed_one(Role::HumanAnalyst);

    let primary_pos = world.cycle_counter % ugvs.len();
    world.cycle_counter += 1;
    let mut sensors = vec![ugvs[primary_pos]];
    if scheme.smm_enabled {
        let extra = p.k_verify.min(ugvs.len() - 1);
        sensors.extend((1..=extra).map(|k| ugvs[(primary_pos + k) % ugvs.len()]));
    }
    let primary = sensors[0];

    if world.per_cycle_attacks() {
        for &id in sensors.iter().chain(std::iter::once(&ai)) {
            world.attack(id, rng);
        }
    }

    let true_class = if rng.random::<f64>() < p.p_target { target } else { other_class(target, p.n_classes, rng) };

    let mut costs = CostBreakdown::default();
    let mut reports: Vec<(MemberId, Observation)> = Vec::with_capacity(sensors.len());
    for &id in &sensors {
        let obs = if world.roster.member(id).status.is_compromised() {
            corrupt_ugv_observation(true_class, p.n_classes, p.p_falsify, rng)
        } else {
            Observation::honest(true_class)
        };
        costs.ugv += p.cost_ugv_sense;
        world.emit(|| Event::Sense {
            mission,
            member: id,
            reported: obs.reported,
            falsified: obs.falsified,
            cost: p.cost_ugv_sense,
        });
        reports.push((id, obs));
    }

    // The AI works through uploads in trust order; the plurality report
    // becomes the evidence, ties going to the most trusted source.
    let queue: Vec<(MemberId, Observation)> = if scheme.smm_enabled {
        let pending: Vec<_> = reports.iter().map(|r| (*r, world.roster.trust_of(r.0))).collect();
        queue_order(&pending)
    } else {
        reports.clone()
    };
    let count = |class: usize| queue.iter().filter(|(_, o)| o.reported == class).count();
    let best = queue.iter().map(|(_, o)| count(o.reported)).max().unwrap_or(0);
    let evidence = *queue.iter().find(|(_, o)| count(o.reported) == best).map(|(_, o)| o).expect("at least one report");

    let stimulus = Stimulus { class: evidence.reported, mission_target: Some(target), corrupted: evidence.falsified };
    let ai_status = world.roster.member(ai).status;
    let opinion = ai_classify(stimulus, p.n_classes, ai_status, &p.classifier, rng);
    costs.ai += p.cost_ai_detect;
    world.emit(|| Event::Classify {
        mission,
        member: ai,
        vacuity: opinion.vacuity(),
        top: opinion.top_class(),
        cost: p.cost_ai_detect,
    });

    let mut consulted = None;
    let confirmed = match analyst {
        Some(h) if scheme.consults_analyst() && needs_human(&opinion, p.tau_u) => {
            if world.per_cycle_attacks() {
                world.attack(h, rng);
            }
            let status = world.roster.member(h).status;
            let prior = human_base_rate(evidence.reported, p.n_classes, status, &p.classifier, rng);
            costs.human += p.cost_human_detect;
            world.emit(|| Event::Consult { mission, member: h, cost: p.cost_human_detect });
            let fused = fuse(&opinion, &prior).expect("prior matches opinion dimension");
            consulted = Some((h, argmax(&prior)));
            classify(&fused)
        }
        _ => opinion.top_class(),
    };

    // Chain consensus: AI vs analyst when both spoke, AI vs sensed evidence otherwise.
    let chain_matched = match consulted {
        Some((_, human_top)) => opinion.top_class() == human_top,
        None => confirmed == evidence.reported,
    };
    world.update_trust(ai, chain_matched);
    if let Some((h, _)) = consulted {
        world.update_trust(h, chain_matched);
    }
    if scheme.smm_enabled {
        let plain: Vec<(MemberId, usize)> = reports.iter().map(|(id, o)| (*id, o.reported)).collect();
        for (id, matched) in multi_ugv_feedback(&plain, confirmed) {
            world.update_trust(id, matched);
        }
    } else {
        world.update_trust(primary, chain_matched);
    }

    if scheme.smm_enabled {
        for &from in &ugvs {
            for &to in &ugvs {
                if from != to {
                    let ok = world.chatter_correct(from, rng);
                    world.share(from, to, InfoKind::UgvLocation, ok, rng);
                    let ok = world.chatter_correct(from, rng);
                    world.share(from, to, InfoKind::Status, ok, rng);
                }
            }
        }
        for (id, obs) in &reports {
            world.share(*id, ai, InfoKind::SensedImage, !obs.falsified, rng);
        }
        if queue.len() > 1 {
            for (id, _) in &queue {
                let ok = world.chatter_correct(ai, rng);
                world.share(ai, *id, InfoKind::QueueOrder, ok, rng);
            }
        }
        let result_ok = confirmed == true_class;
        world.share(ai, primary, InfoKind::DetectionResult, result_ok, rng);
        if let Some((h, _)) = consulted {
            world.share(ai, h, InfoKind::DetectionResult, result_ok, rng);
        }
    }

    CycleResult {
        kind: CycleKind::Detection,
        true_class: Some(true_class),
        confirmed: Some(confirmed),
        target_detected: confirmed == target && true_class == target,
        consulted_analyst: consulted.is_some(),
        costs,
    }
}

fn run_bait_cycle<R: Rng + ?Sized>(world: &mut World, pending: &[MemberId], tally: &mut MissionTally, rng: &mut R) {
    let p = world.params.clone();
    let mission = world.mission_index;
    for &id in pending {
        let role = world.roster.member(id).role;
        let cost = p.detect_cost(role);
        let task = Task::bait(TaskId(world.next_task), role, rng.random_range(0..p.n_classes), cost);
        world.next_task += 1;
        tally.costs.charge(role, cost);
        tally.baits += 1;
        let outcome = run_bait(world.roster.member_mut(id), p.d_bait, p.fp_bait, rng);
        world.emit(|| Event::BaitTask { mission, task, member: id, outcome });
        if outcome == BaitOutcome::Failed {
            world.defend(id, DefenseCause::FailedBait, tally);
        }
    }
}

/// Runs one mission and advances recovery timers afterwards.
pub fn run_mission<R: Rng + ?Sized>(world: &mut World, rng: &mut R) -> RunRecord {
    let p = world.params.clone();
    let scheme = world.scheme;
    let mission = world.mission_index;
    let target = world.mission_target();
    world.ledger = SmmLedger::new();
    world.emit(|| Event::MissionStart { mission, target });

    if !world.per_cycle_attacks() {
        for id in world.team() {
            world.attack(id, rng);
        }
    }

    let mut tally = MissionTally::default();
    let mut cycles = 0;
    let mut detections = 0;
    while cycles < p.t_max_cycles && detections < p.detections_required {
        let mut pending = Vec::new();
        for id in world.team() {
            let decision =
                select_task_for(world.roster.member(id), p.zeta, scheme.deception_enabled, scheme.defense_enabled);
            match decision {
                TaskDecision::Bait => pending.push(id),
                TaskDecision::ImmediateDefense => world.defend(id, DefenseCause::LowTrust, &mut tally),
                TaskDecision::Regular => {
                    if scheme.deception_enabled && rng.random::<f64>() < p.bait_probe_rate {
                        pending.push(id);
                    }
                }
            }
        }

        let index = cycles;
        cycles += 1;
        if !pending.is_empty() {
            run_bait_cycle(world, &pending, &mut tally, rng);
            if p.bait_consumes_cycle {
                world.emit(|| Event::Cycle {
                    mission,
                    index,
                    kind: CycleKind::Bait,
                    true_class: None,
                    confirmed: None,
                    detected: false,
                });
                continue;
            }
        }

        let result = run_cycle(world, rng);
        tally.costs.add(&result.costs);
        tally.consultations += u32::from(result.consulted_analyst);
        detections += usize::from(result.target_detected);
        world.emit(|| Event::Cycle {
            mission,
            index,
            kind: result.kind,
            true_class: result.true_class,
            confirmed: result.confirmed,
            detected: result.target_detected,
        });
    }

    let success = detections >= p.detections_required;
    let ugvs = world.roster.deployed(Role::Ugv);
    let r_ugv = if ugvs.is_empty() {
        0.0
    } else {
        ugvs.iter().filter(|id| world.roster.member(**id).status.is_compromised()).count() as f64 / ugvs.len() as f64
    };
    let flag = |role: Role| {
        world
            .roster
            .deployed_one(role)
            .map_or(0.0, |id| f64::from(u8::from(world.roster.member(id).status.is_compromised())))
    };
    let record = RunRecord {
        repetition: world.repetition,
        mission,
        success,
        cycles,
        detections,
        costs: tally.costs,
        smm_attempts: world.ledger.attempts,
        smm_shared: world.ledger.shared,
        smm_correct: world.ledger.correct,
        r_ugv,
        r_ai: flag(Role::AiAgent),
        r_human: flag(Role::HumanAnalyst),
        baits: tally.baits,
        defenses: tally.defenses,
        consultations: tally.consultations,
    };
    world.emit(|| Event::MissionEnd { mission, success, cycles, detections });

    world.roster.tick_recovery();
    world.mission_index += 1;
    record
}

#[derive(Debug, Clone)]
pub struct RepetitionOutput {
    pub records: Vec<RunRecord>,
    pub events: Vec<Event>,
}

/// One repetition: fresh world, `n_missions` missions, its own RNG stream.
pub fn run_repetition(params: &ScenarioParams, scheme: Scheme, seed: u64, repetition: usize, log: bool) -> RepetitionOutput {
    let mut rng: ChaCha8Rng = repetition_rng(seed, repetition);
    let mut world = World::new(params, scheme);
    world.repetition = repetition;
    if log {
        world = world.with_event_log();
    }
    let records = (0..params.n_missions).map(|_| run_mission(&mut world, &mut rng)).collect();
    RepetitionOutput { records, events: world.take_events() }
}

/// All repetitions of one scheme, in repetition order.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub scheme: Scheme,
    pub repetitions: Vec<Vec<RunRecord>>,
}

impl ScenarioRun {
    pub fn records(&self) -> impl Iterator<Item = &RunRecord> {
        self.repetitions.iter().flatten()
    }
}

/// Runs `n_sim` repetitions in parallel; output is independent of thread count.
pub fn run_scenario(params: &ScenarioParams, scheme: Scheme, seed: u64) -> Result<ScenarioRun> {
    params.validate()?;
    let repetitions = (0..params.n_sim)
        .into_par_iter()
        .map(|rep| run_repetition(params, scheme, seed, rep, false).records)
        .collect();
    Ok(ScenarioRun { scheme, repetitions })
}

/// Re-sums every charge in an event log, per mission.
pub fn audit_costs(events: &[Event]) -> Vec<(usize, CostBreakdown)> {
    let mut out: Vec<(usize, CostBreakdown)> = Vec::new();
    for e in events {
        let (mission, role, cost) = match e {
            Event::MissionStart { mission, .. } => {
                out.push((*mission, CostBreakdown::default()));
                continue;
            }
            Event::Sense { mission, cost, .. } => (*mission, Role::Ugv, *cost),
            Event::Classify { mission, cost, .. } => (*mission, Role::AiAgent, *cost),
            Event::Consult { mission, cost, .. } => (*mission, Role::HumanAnalyst, *cost),
            Event::BaitTask { mission, task, .. } => (*mission, task.target_role, task.cost_charged),
            Event::Defense { mission, cost, .. } => (*mission, Role::CommandCenter, *cost),
            _ => continue,
        };
        let entry = out.last_mut().filter(|(m, _)| *m == mission).expect("charge inside a mission");
        if role == Role::CommandCenter {
            entry.1.recovery += cost;
        } else {
            entry.1.charge(role, cost);
        }
    }
    out
}
