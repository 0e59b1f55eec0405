//! Aggregation of mission records into success, cost, compromise and
//! information-sharing metrics.

use serde::Serialize;

use crate::engine::{CostBreakdown, RunRecord};
use crate::error::{Error, Result};
use crate::types::Role;

/// Fraction of missions in `records` that met their quota.
pub fn msr(records: &[RunRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyInput("mission records"));
    }
    Ok(records.iter().filter(|r| r.success).count() as f64 / records.len() as f64)
}

/// Per-repetition success rate, averaged over repetitions.
pub fn msr_over(repetitions: &[Vec<RunRecord>]) -> Result<f64> {
    if repetitions.is_empty() {
        return Err(Error::EmptyInput("repetitions"));
    }
    let per_rep = repetitions.iter().map(|r| msr(r)).collect::<Result<Vec<_>>>()?;
    Ok(mean(per_rep.into_iter()))
}

pub fn compromised_ratio(records: &[RunRecord], role: Role) -> f64 {
    mean(records.iter().map(|r| r.compromised(role)))
}

pub fn objective(msr_value: f64, total_cost: f64, omega1: f64, omega2: f64) -> f64 {
    omega1 * msr_value - omega2 * total_cost
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CostReport {
    pub ugv: f64,
    pub ai: f64,
    pub human: f64,
    pub recovery: f64,
    pub total: f64,
}

impl From<CostBreakdown> for CostReport {
    fn from(c: CostBreakdown) -> Self {
        Self { ugv: c.ugv, ai: c.ai, human: c.human, recovery: c.recovery, total: c.total() }
    }
}

/// Mean cost per mission, by component.
pub fn operational_cost(records: &[RunRecord]) -> CostReport {
    if records.is_empty() {
        return CostReport::default();
    }
    let mut sum = CostBreakdown::default();
    for r in records {
        sum.add(&r.costs);
    }
    sum.scaled(1.0 / records.len() as f64).into()
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AggregateReport {
    pub msr: f64,
    pub oc_ugv: f64,
    pub oc_ai: f64,
    pub oc_human: f64,
    pub oc_recovery: f64,
    pub oc_total: f64,
    pub r_ugv: f64,
    pub r_ai: f64,
    pub r_human: f64,
    pub sqi_mean: f64,
    pub sci_mean: f64,
    pub objective: f64,
}

impl AggregateReport {
    pub fn from_repetitions(repetitions: &[Vec<RunRecord>], omega1: f64, omega2: f64) -> Result<Self> {
        let msr = msr_over(repetitions)?;
        let all: Vec<RunRecord> = repetitions.iter().flatten().cloned().collect();
        let oc = operational_cost(&all);
        Ok(Self {
            msr,
            oc_ugv: oc.ugv,
            oc_ai: oc.ai,
            oc_human: oc.human,
            oc_recovery: oc.recovery,
            oc_total: oc.total,
            r_ugv: compromised_ratio(&all, Role::Ugv),
            r_ai: compromised_ratio(&all, Role::AiAgent),
            r_human: compromised_ratio(&all, Role::HumanAnalyst),
            sqi_mean: mean(all.iter().map(RunRecord::sqi)),
            sci_mean: mean(all.iter().map(RunRecord::sci)),
            objective: objective(msr, oc.total, omega1, omega2),
        })
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

/// Cross-repetition means at one mission index, smoothed over a trailing window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendPoint {
    /// 1-based.
    pub mission_index: usize,
    pub msr_window: f64,
    pub sqi: f64,
    pub sci: f64,
    pub oc: CostReport,
    pub r_ugv: f64,
    pub r_ai: f64,
    pub r_human: f64,
}

const TREND_COLUMNS: usize = 10;

fn per_mission(rows: &[&RunRecord]) -> [f64; TREND_COLUMNS] {
    let m = |f: &dyn Fn(&RunRecord) -> f64| mean(rows.iter().map(|r| f(r)));
    [
        m(&|r| f64::from(u8::from(r.success))),
        m(&RunRecord::sqi),
        m(&RunRecord::sci),
        m(&|r| r.costs.ugv),
        m(&|r| r.costs.ai),
        m(&|r| r.costs.human),
        m(&|r| r.costs.recovery),
        m(&|r| r.r_ugv),
        m(&|r| r.r_ai),
        m(&|r| r.r_human),
    ]
}

/// Mission-indexed trend series. Repetitions shorter than the longest one
/// simply drop out of later indices.
pub fn trend(repetitions: &[Vec<RunRecord>], window: usize) -> Vec<TrendPoint> {
    let window = window.max(1);
    let n = repetitions.iter().map(Vec::len).max().unwrap_or(0);
    let raw: Vec<[f64; TREND_COLUMNS]> = (0..n)
        .map(|m| {
            let rows: Vec<&RunRecord> = repetitions.iter().filter_map(|r| r.get(m)).collect();
            per_mission(&rows)
        })
        .collect();
    (0..n)
        .map(|m| {
            let lo = (m + 1).saturating_sub(window);
            let span = &raw[lo..=m];
            let col = |c: usize| span.iter().map(|row| row[c]).sum::<f64>() / span.len() as f64;
            let oc = CostBreakdown { ugv: col(3), ai: col(4), human: col(5), recovery: col(6) };
            TrendPoint {
                mission_index: m + 1,
                msr_window: col(0),
                sqi: col(1),
                sci: col(2),
                oc: oc.into(),
                r_ugv: col(7),
                r_ai: col(8),
                r_human: col(9),
            }
        })
        .collect()
}
