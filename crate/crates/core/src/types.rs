//! Domain records shared by every simulator module.
//!
//! Nothing here has behaviour beyond construction and invariant checks; the
//! mutable pieces (`TrustState`, `MemberStatus`) are only touched by the
//! engine's single-threaded run loop.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perception::ClassifierModel;

/// Tolerance used for every simplex / mass-conservation check.
pub const MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Role {
    Ugv,
    AiAgent,
    HumanAnalyst,
    /// Runs inside a trusted execution environment: never attacked, never scored.
    CommandCenter,
}

impl Role {
    pub const TEAM: [Role; 3] = [Role::Ugv, Role::AiAgent, Role::HumanAnalyst];

    pub fn is_attackable(self) -> bool {
        !matches!(self, Role::CommandCenter)
    }

    pub fn is_trust_scored(self) -> bool {
        !matches!(self, Role::CommandCenter)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Ugv => "UGV",
            Role::AiAgent => "AI_AGENT",
            Role::HumanAnalyst => "HUMAN_ANALYST",
            Role::CommandCenter => "COMMAND_CENTER",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MemberId(pub u32);

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// Subjective-logic opinion over `C` mutually exclusive classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Opinion {
    belief: Vec<f64>,
    vacuity: f64,
    base_rate: Vec<f64>,
}

impl Opinion {
    pub fn new(belief: Vec<f64>, vacuity: f64, base_rate: Vec<f64>) -> Result<Self> {
        if belief.len() != base_rate.len() {
            return Err(Error::DimensionMismatch {
                expected: belief.len(),
                got: base_rate.len(),
            });
        }
        if belief.is_empty() {
            return Err(Error::InvalidOpinion("no classes".into()));
        }
        if !(0.0..=1.0).contains(&vacuity) {
            return Err(Error::InvalidOpinion(format!("vacuity {vacuity} outside [0,1]")));
        }
        if let Some(b) = belief.iter().find(|b| !(0.0..=1.0).contains(*b)) {
            return Err(Error::InvalidOpinion(format!("belief {b} outside [0,1]")));
        }
        let mass: f64 = belief.iter().sum::<f64>() + vacuity;
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidOpinion(format!("sum(b) + u = {mass}, expected 1")));
        }
        validate_base_rate(&base_rate)?;
        Ok(Self { belief, vacuity, base_rate })
    }

    /// Opinion with a uniform base rate.
    pub fn with_uniform_prior(belief: Vec<f64>, vacuity: f64) -> Result<Self> {
        let n = belief.len().max(1);
        Self::new(belief, vacuity, vec![1.0 / n as f64; n])
    }

    pub fn belief(&self) -> &[f64] {
        &self.belief
    }

    pub fn vacuity(&self) -> f64 {
        self.vacuity
    }

    pub fn base_rate(&self) -> &[f64] {
        &self.base_rate
    }

    pub fn n_classes(&self) -> usize {
        self.belief.len()
    }

    /// Index of the largest belief mass; ties resolve to the lowest index.
    pub fn top_class(&self) -> usize {
        argmax(&self.belief)
    }
}

pub(crate) fn validate_base_rate(a: &[f64]) -> Result<()> {
    if a.iter().any(|x| *x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidOpinion("negative base rate entry".into()));
    }
    let total: f64 = a.iter().sum();
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::InvalidOpinion(format!("sum(a) = {total}, expected 1")));
    }
    Ok(())
}

/// First index of the maximum value.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Consensus counters and task clock behind the decaying trust score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrustState {
    pub n_consensus: u64,
    pub n_total: u64,
    pub task_clock: u64,
    pub lambda: f64,
    pub gamma: f64,
}

impl TrustState {
    pub fn new(lambda: f64, gamma: f64) -> Self {
        Self { n_consensus: 0, n_total: 0, task_clock: 0, lambda, gamma }
    }

    pub fn with_counts(self, n_consensus: u64, n_total: u64, task_clock: u64) -> Self {
        Self { n_consensus, n_total, task_clock, ..self }
    }

    pub fn is_valid(&self) -> bool {
        self.n_consensus <= self.n_total && self.lambda > 0.0 && self.gamma >= 0.0
    }
}

impl Default for TrustState {
    fn default() -> Self {
        Self::new(10.0, 0.001)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MemberStatus {
    Active,
    Compromised,
    Recovering { remaining_missions: u32 },
}

impl MemberStatus {
    pub fn is_operational(self) -> bool {
        !matches!(self, MemberStatus::Recovering { .. })
    }

    pub fn is_compromised(self) -> bool {
        matches!(self, MemberStatus::Compromised)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Member {
    pub id: MemberId,
    pub role: Role,
    pub status: MemberStatus,
    pub trust: TrustState,
    pub standby: bool,
}

impl Member {
    pub fn new(id: MemberId, role: Role, trust: TrustState) -> Self {
        Self { id, role, status: MemberStatus::Active, trust, standby: false }
    }

    pub fn standby(mut self) -> Self {
        self.standby = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TaskKind {
    Regular,
    Bait,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TaskId(pub u64);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Task {
    pub id: TaskId,
    pub kind: TaskKind,
    pub target_role: Role,
    /// Class the command center knows to be correct. Always set for bait tasks.
    pub ground_truth: usize,
    pub cost_charged: f64,
}

impl Task {
    pub fn bait(id: TaskId, target_role: Role, ground_truth: usize, cost: f64) -> Self {
        Self { id, kind: TaskKind::Bait, target_role, ground_truth, cost_charged: cost }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "DASH_DF")]
    DashDf,
    #[serde(rename = "SMM_DF")]
    SmmDf,
    #[serde(rename = "DF_ONLY")]
    DfOnly,
    #[serde(rename = "BASE")]
    Base,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::DashDf, Scheme::SmmDf, Scheme::DfOnly, Scheme::Base];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::DashDf => "DASH_DF",
            Scheme::SmmDf => "SMM_DF",
            Scheme::DfOnly => "DF_ONLY",
            Scheme::Base => "BASE",
        }
    }

    pub fn config(self) -> SchemeConfig {
        SchemeConfig::from(self)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "DASH_DF" | "DASH" => Ok(Scheme::DashDf),
            "SMM_DF" => Ok(Scheme::SmmDf),
            "DF_ONLY" => Ok(Scheme::DfOnly),
            "BASE" => Ok(Scheme::Base),
            _ => Err(Error::UnknownScheme(s.to_string())),
        }
    }
}

/// Feature flags that distinguish the four compared schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub smm_enabled: bool,
    pub deception_enabled: bool,
    pub defense_enabled: bool,
    pub trust_updates_enabled: bool,
}

impl SchemeConfig {
    /// DF-only has the AI decide alone; every other scheme escalates to the analyst.
    pub fn consults_analyst(&self) -> bool {
        self.scheme != Scheme::DfOnly
    }
}

impl From<Scheme> for SchemeConfig {
    fn from(scheme: Scheme) -> Self {
        let (smm, deception, defense, trust) = match scheme {
            Scheme::DashDf => (true, true, true, true),
            Scheme::SmmDf => (true, false, true, true),
            Scheme::DfOnly => (false, false, true, true),
            Scheme::Base => (false, false, false, false),
        };
        Self {
            scheme,
            smm_enabled: smm,
            deception_enabled: deception,
            defense_enabled: defense,
            trust_updates_enabled: trust,
        }
    }
}

/// When attack attempts are rolled against deployed members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackGranularity {
    /// One attempt per deployed member at each mission dispatch.
    PerMission,
    /// One attempt per member per detection cycle in which it handles a task.
    PerCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VulnTriplet {
    pub ugv: f64,
    pub ai: f64,
    pub human: f64,
}

impl VulnTriplet {
    pub const fn new(ugv: f64, ai: f64, human: f64) -> Self {
        Self { ugv, ai, human }
    }

    pub fn for_role(&self, role: Role) -> f64 {
        match role {
            Role::Ugv => self.ugv,
            Role::AiAgent => self.ai,
            Role::HumanAnalyst => self.human,
            Role::CommandCenter => 0.0,
        }
    }
}

impl fmt::Display for VulnTriplet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.ugv, self.ai, self.human)
    }
}

impl FromStr for VulnTriplet {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.trim().trim_matches(|c| c == '{' || c == '}').split(':').collect();
        if parts.len() != 3 {
            return Err(format!("`{s}` is not a UGV:AI:HUMAN triplet"));
        }
        let mut v = [0.0; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"))?;
        }
        Ok(Self::new(v[0], v[1], v[2]))
    }
}

/// The vulnerability triplets of the sensitivity study, UGV:AI:HUMAN.
pub const VULN_TRIPLETS: [VulnTriplet; 5] = [
    VulnTriplet::new(0.2, 0.05, 0.02),
    VulnTriplet::new(0.3, 0.1, 0.05),
    VulnTriplet::new(0.4, 0.2, 0.1),
    VulnTriplet::new(0.5, 0.3, 0.15),
    VulnTriplet::new(0.6, 0.4, 0.2),
];

/// Every tunable of a scenario. `Default` reproduces the reference parameter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioParams {
    pub n_sim: usize,
    pub n_missions: usize,
    pub attack_rate: f64,
    pub attack_granularity: AttackGranularity,
    pub vuln_ugv: f64,
    pub vuln_ai: f64,
    pub vuln_human: f64,
    pub zeta: f64,
    pub tau_u: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub cost_ai_detect: f64,
    pub cost_human_detect: f64,
    pub cost_ugv_sense: f64,
    pub cost_recover_ugv: f64,
    pub cost_recover_ai: f64,
    pub cost_recover_human: f64,
    pub dt_ugv: u32,
    pub dt_ai: u32,
    pub dt_human: u32,
    pub n_field_ugv: usize,
    pub n_standby_ugv: usize,
    pub n_standby_ai: usize,
    pub n_classes: usize,
    pub detections_required: usize,
    pub t_max_cycles: usize,
    pub k_verify: usize,
    /// Probability a captured object belongs to the mission's target class.
    pub p_target: f64,
    pub p_falsify: f64,
    pub d_bait: f64,
    pub fp_bait: f64,
    /// Per-cycle chance that ADTM interleaves a routine bait probe for a member.
    pub bait_probe_rate: f64,
    /// A cycle with pending bait tasks is spent on them instead of regular work.
    pub bait_consumes_cycle: bool,
    pub ugv_initial_trust: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub trend_window: usize,
    pub rng_seed: u64,
    pub classifier: ClassifierModel,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            n_sim: 100,
            n_missions: 200,
            attack_rate: 0.4,
            attack_granularity: AttackGranularity::PerMission,
            vuln_ugv: 0.3,
            vuln_ai: 0.1,
            vuln_human: 0.05,
            zeta: 0.3,
            tau_u: 0.25,
            lambda: 10.0,
            gamma: 0.001,
            cost_ai_detect: 0.1,
            cost_human_detect: 1.0,
            cost_ugv_sense: 0.05,
            cost_recover_ugv: 0.5,
            cost_recover_ai: 1.0,
            cost_recover_human: 2.0,
            dt_ugv: 2,
            dt_ai: 3,
            dt_human: 5,
            n_field_ugv: 3,
            n_standby_ugv: 5,
            n_standby_ai: 3,
            n_classes: 5,
            detections_required: 10,
            t_max_cycles: 50,
            k_verify: 2,
            p_target: 0.5,
            p_falsify: 0.8,
            d_bait: 1.0,
            fp_bait: 0.0,
            bait_probe_rate: 0.25,
            bait_consumes_cycle: false,
            ugv_initial_trust: 1.0,
            omega1: 0.7,
            omega2: 0.3,
            trend_window: 10,
            rng_seed: 42,
            classifier: ClassifierModel::default(),
        }
    }
}

impl ScenarioParams {
    pub fn vulnerabilities(&self) -> VulnTriplet {
        VulnTriplet::new(self.vuln_ugv, self.vuln_ai, self.vuln_human)
    }

    pub fn set_vulnerabilities(&mut self, v: VulnTriplet) {
        self.vuln_ugv = v.ugv;
        self.vuln_ai = v.ai;
        self.vuln_human = v.human;
    }

    pub fn fresh_trust(&self) -> TrustState {
        TrustState::new(self.lambda, self.gamma)
    }

    pub fn detect_cost(&self, role: Role) -> f64 {
        match role {
            Role::Ugv => self.cost_ugv_sense,
            Role::AiAgent => self.cost_ai_detect,
            Role::HumanAnalyst => self.cost_human_detect,
            Role::CommandCenter => 0.0,
        }
    }

    pub fn recovery_cost(&self, role: Role) -> f64 {
        match role {
            Role::Ugv => self.cost_recover_ugv,
            Role::AiAgent => self.cost_recover_ai,
            Role::HumanAnalyst => self.cost_recover_human,
            Role::CommandCenter => 0.0,
        }
    }

    pub fn downtime(&self, role: Role) -> u32 {
        match role {
            Role::Ugv => self.dt_ugv,
            Role::AiAgent => self.dt_ai,
            Role::HumanAnalyst => self.dt_human,
            Role::CommandCenter => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let violations = validate_params(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(violations))
        }
    }
}

/// Lists every violated invariant; empty means the parameter set is usable.
pub fn validate_params(p: &ScenarioParams) -> Vec<String> {
    let mut out = Vec::new();

    if (p.omega1 + p.omega2 - 1.0).abs() > MASS_TOLERANCE {
        out.push(format!("weights must sum to 1 (omega1 + omega2 = {})", p.omega1 + p.omega2));
    }
    if p.omega1 <= 0.0 || p.omega2 <= 0.0 {
        out.push("weights omega1 and omega2 must both be > 0".to_string());
    }

    let probabilities = [
        ("attack_rate", p.attack_rate),
        ("vuln_ugv", p.vuln_ugv),
        ("vuln_ai", p.vuln_ai),
        ("vuln_human", p.vuln_human),
        ("zeta", p.zeta),
        ("tau_u", p.tau_u),
        ("p_target", p.p_target),
        ("p_falsify", p.p_falsify),
        ("d_bait", p.d_bait),
        ("fp_bait", p.fp_bait),
        ("bait_probe_rate", p.bait_probe_rate),
        ("ugv_initial_trust", p.ugv_initial_trust),
    ];
    for (name, v) in probabilities.into_iter().chain(p.classifier.probabilities()) {
        if !(0.0..=1.0).contains(&v) {
            out.push(format!("{name} = {v} must lie in [0, 1]"));
        }
    }
    if p.ugv_initial_trust <= 0.0 {
        out.push("ugv_initial_trust must be > 0".to_string());
    }

    let counts = [
        ("n_sim", p.n_sim),
        ("n_missions", p.n_missions),
        ("detections_required", p.detections_required),
        ("t_max_cycles", p.t_max_cycles),
        ("n_field_ugv", p.n_field_ugv),
        ("trend_window", p.trend_window),
        ("dt_ugv", p.dt_ugv as usize),
        ("dt_ai", p.dt_ai as usize),
        ("dt_human", p.dt_human as usize),
    ];
    for (name, v) in counts {
        if v < 1 {
            out.push(format!("{name} must be >= 1"));
        }
    }
    if p.n_classes < 2 {
        out.push(format!("n_classes = {} must be >= 2", p.n_classes));
    }

    if !(p.lambda > 0.0) {
        out.push(format!("lambda = {} must be > 0", p.lambda));
    }
    if !(p.gamma >= 0.0) {
        out.push(format!("gamma = {} must be >= 0", p.gamma));
    }

    let costs = [
        ("cost_ai_detect", p.cost_ai_detect),
        ("cost_human_detect", p.cost_human_detect),
        ("cost_ugv_sense", p.cost_ugv_sense),
        ("cost_recover_ugv", p.cost_recover_ugv),
        ("cost_recover_ai", p.cost_recover_ai),
        ("cost_recover_human", p.cost_recover_human),
    ];
    for (name, v) in costs {
        if !(v >= 0.0 && v.is_finite()) {
            out.push(format!("{name} = {v} must be a finite non-negative cost"));
        }
    }

    out
}

/// Where each notation symbol lives in this crate.
pub const SYMBOL_REGISTRY: &[(&str, &str)] = &[
    ("C_i", "RunRecord::success"),
    ("MSR", "AggregateReport::msr"),
    ("C_total", "AggregateReport::oc_total"),
    ("T_i", "RunRecord::cycles"),
    ("T_max", "ScenarioParams::t_max_cycles"),
    ("omega_1", "ScenarioParams::omega1"),
    ("omega_2", "ScenarioParams::omega2"),
    ("T_X(t)", "trust::compute_trust"),
    ("N_C", "TrustState::n_consensus"),
    ("N_total", "TrustState::n_total"),
    ("gamma", "TrustState::gamma"),
    ("t", "TrustState::task_clock"),
    ("lambda", "TrustState::lambda"),
    ("zeta", "ScenarioParams::zeta"),
    ("tau_u", "ScenarioParams::tau_u"),
    ("R_X", "AggregateReport::r_ugv/r_ai/r_human"),
    ("SQI", "AggregateReport::sqi_mean"),
    ("SCI", "AggregateReport::sci_mean"),
    ("I_correct", "SmmLedger::correct"),
    ("I_shared", "SmmLedger::shared"),
    ("I_max", "SmmLedger::attempts"),
    ("u", "Opinion::vacuity"),
    ("b", "Opinion::belief"),
    ("a", "Opinion::base_rate"),
    ("P_x", "perception::fuse"),
    ("N_sim", "ScenarioParams::n_sim"),
    ("N_m", "ScenarioParams::n_missions"),
    ("DT_UGV", "ScenarioParams::dt_ugv"),
    ("DT_AI", "ScenarioParams::dt_ai"),
    ("DT_human", "ScenarioParams::dt_human"),
    ("C^A_detect", "ScenarioParams::cost_ai_detect"),
    ("C^H_detect", "ScenarioParams::cost_human_detect"),
];
