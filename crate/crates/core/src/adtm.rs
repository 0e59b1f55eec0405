//! Adaptive deceptive task management.
//!
//! Decides between regular work, bait verification and immediate defense for
//! each member, scores bait tasks against the command center's known answers,
//! and runs the recovery pipeline: field slots, standby pools and downtime
//! timers per role.

use std::collections::VecDeque;

use rand::Rng;
use serde::Serialize;

use crate::trust::{compute_trust, preloaded, reset_trust};
use crate::types::{Member, MemberId, MemberStatus, Role, ScenarioParams, TrustState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TaskDecision {
    Regular,
    Bait,
    ImmediateDefense,
}

pub fn select_task(trust: f64, zeta: f64, deception_enabled: bool, defense_enabled: bool) -> TaskDecision {
    if trust >= zeta {
        TaskDecision::Regular
    } else if deception_enabled {
        TaskDecision::Bait
    } else if defense_enabled {
        TaskDecision::ImmediateDefense
    } else {
        TaskDecision::Regular
    }
}

pub fn select_task_for(member: &Member, zeta: f64, deception_enabled: bool, defense_enabled: bool) -> TaskDecision {
    select_task(compute_trust(&member.trust), zeta, deception_enabled, defense_enabled)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaitOutcome {
    Passed,
    Failed,
}

/// Scores a bait task. A pass wipes the member's trust counters; a failure
/// is left to the caller, which must trigger the role's defense.
///
/// `d_bait` is the detection probability for compromised members and
/// `fp_bait` the false-alarm probability for clean ones.
pub fn run_bait<R: Rng + ?Sized>(member: &mut Member, d_bait: f64, fp_bait: f64, rng: &mut R) -> BaitOutcome {
    let fail_prob = if member.status.is_compromised() { d_bait } else { fp_bait };
    if rng.random::<f64>() < fail_prob {
        BaitOutcome::Failed
    } else {
        member.trust = reset_trust(member.trust);
        BaitOutcome::Passed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefenseOutcome {
    pub member: MemberId,
    pub role: Role,
    pub substitute: Option<MemberId>,
    pub cost: f64,
}

impl DefenseOutcome {
    pub fn left_vacancy(&self) -> bool {
        self.substitute.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Census {
    pub deployed: usize,
    pub standby: usize,
    pub recovering: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.deployed + self.standby + self.recovering
    }
}

fn role_index(role: Role) -> usize {
    match role {
        Role::Ugv => 0,
        Role::AiAgent => 1,
        Role::HumanAnalyst => 2,
        Role::CommandCenter => panic!("the command center has no roster slot"),
    }
}

/// Registry of every team member, which field slot each one occupies, and the
/// standby pools behind them.
#[derive(Debug, Clone)]
pub struct Roster {
    members: Vec<Member>,
    slots: [Vec<Option<MemberId>>; 3],
    pools: [VecDeque<MemberId>; 3],
    /// Analysts are replaced from an unbounded personnel pool.
    unbounded_analysts: bool,
    base_trust: TrustState,
    ugv_trust: TrustState,
}

impl Roster {
    /// Field team of `n_field_ugv` UGVs, one AI and one analyst, plus standby
    /// pools. `multi_ugv` selects the moderate-trust UGV start when
    /// `ugv_initial_trust < 1`.
    pub fn new(params: &ScenarioParams, multi_ugv: bool) -> Self {
        let base_trust = params.fresh_trust();
        let ugv_trust = if multi_ugv { preloaded(base_trust, params.ugv_initial_trust) } else { base_trust };
        let mut roster = Self {
            members: Vec::new(),
            slots: [Vec::new(), Vec::new(), Vec::new()],
            pools: [VecDeque::new(), VecDeque::new(), VecDeque::new()],
            unbounded_analysts: true,
            base_trust,
            ugv_trust,
        };
        for _ in 0..params.n_field_ugv {
            let id = roster.spawn(Role::Ugv, false);
            roster.slots[0].push(Some(id));
        }
        let ai = roster.spawn(Role::AiAgent, false);
        roster.slots[1].push(Some(ai));
        let analyst = roster.spawn(Role::HumanAnalyst, false);
        roster.slots[2].push(Some(analyst));
        for _ in 0..params.n_standby_ugv {
            let id = roster.spawn(Role::Ugv, true);
            roster.pools[0].push_back(id);
        }
        for _ in 0..params.n_standby_ai {
            let id = roster.spawn(Role::AiAgent, true);
            roster.pools[1].push_back(id);
        }
        roster
    }

    fn initial_trust(&self, role: Role) -> TrustState {
        if role == Role::Ugv {
            self.ugv_trust
        } else {
            self.base_trust
        }
    }

    fn spawn(&mut self, role: Role, standby: bool) -> MemberId {
        let id = MemberId(self.members.len() as u32);
        let mut m = Member::new(id, role, self.initial_trust(role));
        m.standby = standby;
        self.members.push(m);
        id
    }

    pub fn member(&self, id: MemberId) -> &Member {
        &self.members[id.0 as usize]
    }

    pub fn member_mut(&mut self, id: MemberId) -> &mut Member {
        &mut self.members[id.0 as usize]
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn trust_of(&self, id: MemberId) -> f64 {
        compute_trust(&self.member(id).trust)
    }

    /// Members currently occupying field slots of `role`, in slot order.
    pub fn deployed(&self, role: Role) -> Vec<MemberId> {
        self.slots[role_index(role)].iter().flatten().copied().collect()
    }

    pub fn deployed_one(&self, role: Role) -> Option<MemberId> {
        self.slots[role_index(role)].iter().flatten().next().copied()
    }

    pub fn vacancies(&self, role: Role) -> usize {
        self.slots[role_index(role)].iter().filter(|s| s.is_none()).count()
    }

    pub fn standby_remaining(&self, role: Role) -> usize {
        self.pools[role_index(role)].len()
    }

    pub fn census(&self, role: Role) -> Census {
        let deployed = self.deployed(role).len();
        let standby = self.standby_remaining(role);
        let recovering = self
            .members
            .iter()
            .filter(|m| m.role == role && matches!(m.status, MemberStatus::Recovering { .. }))
            .count();
        Census { deployed, standby, recovering }
    }

    fn take_standby(&mut self, role: Role) -> Option<MemberId> {
        let idx = role_index(role);
        if let Some(id) = self.pools[idx].pop_front() {
            return Some(id);
        }
        if role == Role::HumanAnalyst && self.unbounded_analysts {
            return Some(self.spawn(role, true));
        }
        None
    }

    /// Sends `id` into recovery and fills its field slot from standby.
    ///
    /// With an empty pool the slot is left vacant until some member of the
    /// role finishes recovery.
    pub fn trigger_defense(&mut self, id: MemberId, params: &ScenarioParams) -> DefenseOutcome {
        let role = self.member(id).role;
        let fresh = self.initial_trust(role);
        {
            let m = self.member_mut(id);
            m.status = MemberStatus::Recovering { remaining_missions: params.downtime(role) };
            m.trust = fresh;
            m.standby = false;
        }
        let idx = role_index(role);
        let slot = self.slots[idx].iter().position(|s| *s == Some(id));
        let substitute = match slot {
            Some(pos) => {
                let sub = self.take_standby(role);
                if let Some(sub_id) = sub {
                    self.member_mut(sub_id).standby = false;
                }
                self.slots[idx][pos] = sub;
                sub
            }
            None => None,
        };
        DefenseOutcome { member: id, role, substitute, cost: params.recovery_cost(role) }
    }

    /// Advances every downtime timer by one mission. Members whose timer
    /// expires come back clean with fresh trust, refilling a vacant slot if
    /// there is one and otherwise rejoining the standby pool.
    pub fn tick_recovery(&mut self) -> Vec<MemberId> {
        let mut recovered = Vec::new();
        for i in 0..self.members.len() {
            let fresh = self.initial_trust(self.members[i].role);
            let m = &mut self.members[i];
            if let MemberStatus::Recovering { remaining_missions } = m.status {
                if remaining_missions <= 1 {
                    m.status = MemberStatus::Active;
                    m.trust = fresh;
                    recovered.push(m.id);
                } else {
                    m.status = MemberStatus::Recovering { remaining_missions: remaining_missions - 1 };
                }
            }
        }
        for &id in &recovered {
            let role = self.member(id).role;
            let idx = role_index(role);
            if let Some(pos) = self.slots[idx].iter().position(|s| s.is_none()) {
                self.slots[idx][pos] = Some(id);
                self.member_mut(id).standby = false;
            } else {
                self.member_mut(id).standby = true;
                self.pools[idx].push_back(id);
            }
        }
        recovered
    }
}
