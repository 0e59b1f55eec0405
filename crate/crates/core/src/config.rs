//! TOML experiment configuration.
//!
//! Top-level keys are the `ScenarioParams` field names (the classifier model
//! lives under `[classifier]`), plus three experiment keys:
//!
//! ```toml
//! attack_rate = 0.4
//! schemes = ["DASH_DF", "BASE"]
//! sweep = "attack_rate: 0.0..1.0 step 0.1"   # or "vuln", or "none"
//! vuln_triplets = ["0.2:0.05:0.02", "0.6:0.4:0.2"]
//!
//! [classifier]
//! p_correct_clean = 0.9
//! ```
//!
//! Missing keys keep their defaults; unknown keys, bad types and out-of-range
//! values are rejected with the offending line.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::{validate_params, ScenarioParams, Scheme, VulnTriplet, VULN_TRIPLETS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Sweep {
    None,
    AttackRate(Vec<f64>),
    Vulnerability(Vec<VulnTriplet>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: ScenarioParams,
    pub schemes: Vec<Scheme>,
    pub sweep: Sweep,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { params: ScenarioParams::default(), schemes: Scheme::ALL.to_vec(), sweep: Sweep::None }
    }
}

const EXPERIMENT_KEYS: [&str; 3] = ["schemes", "sweep", "vuln_triplets"];

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| config_error(path, e.to_string()))?;
    parse_config(&text, path)
}

/// Parses configuration text; `origin` only labels diagnostics.
pub fn parse_config(text: &str, origin: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let origin = origin.as_ref();
    let err = |line: Option<usize>, msg: String| config_error(origin, with_line(line, msg));

    let mut table: toml::Table = toml::from_str(text).map_err(|e| config_error(origin, e.to_string()))?;

    let schemes = match table.remove("schemes") {
        None => Scheme::ALL.to_vec(),
        Some(v) => {
            let line = key_line(text, "schemes");
            let names = string_list(&v).ok_or_else(|| err(line, "`schemes` must be an array of strings".into()))?;
            let schemes = names.iter().map(|n| n.parse::<Scheme>()).collect::<Result<Vec<_>>>();
            let schemes = schemes.map_err(|e| err(line, e.to_string()))?;
            if schemes.is_empty() {
                return Err(err(line, "`schemes` must name at least one scheme".into()));
            }
            schemes
        }
    };

    let triplets = match table.remove("vuln_triplets") {
        None => None,
        Some(v) => {
            let line = key_line(text, "vuln_triplets");
            let items = string_list(&v)
                .ok_or_else(|| err(line, "`vuln_triplets` must be an array of \"u:a:h\" strings".into()))?;
            let parsed = items.iter().map(|s| s.parse::<VulnTriplet>()).collect::<std::result::Result<Vec<_>, _>>();
            Some(parsed.map_err(|e| err(line, e))?)
        }
    };

    let sweep = match table.remove("sweep") {
        None => Sweep::None,
        Some(toml::Value::String(s)) => {
            let line = key_line(text, "sweep");
            match parse_sweep(&s).map_err(|e| err(line, e.to_string()))? {
                Sweep::Vulnerability(_) if triplets.is_some() => Sweep::Vulnerability(triplets.clone().unwrap()),
                other => other,
            }
        }
        Some(_) => return Err(err(key_line(text, "sweep"), "`sweep` must be a string".into())),
    };

    let params: ScenarioParams = match toml::Value::Table(table.clone()).try_into() {
        Ok(p) => p,
        Err(e) => {
            // pin the failure to a key: unknown fields are named in the
            // message; type errors are found by checking keys one at a time
            let msg = e.to_string();
            let culprit = unknown_field(&msg).or_else(|| {
                table.iter().find_map(|(k, v)| {
                    let mut single = toml::Table::new();
                    single.insert(k.clone(), v.clone());
                    toml::Value::Table(single).try_into::<ScenarioParams>().err().map(|_| k.clone())
                })
            });
            let line = culprit.as_deref().and_then(|k| key_line(text, k));
            let msg = match culprit {
                Some(k) if !msg.contains(&k) => format!("key `{k}`: {}", msg.trim()),
                _ => msg.trim().to_string(),
            };
            return Err(err(line, msg));
        }
    };

    let violations = validate_params(&params);
    if let Some(first) = violations.first() {
        let line = known_keys().into_iter().find(|k| first.contains(k.as_str())).and_then(|k| key_line(text, &k));
        let msg = if violations.len() == 1 {
            first.clone()
        } else {
            format!("{} (and {} more: {})", first, violations.len() - 1, violations[1..].join("; "))
        };
        return Err(err(line, msg));
    }

    Ok(ExperimentConfig { params, schemes, sweep })
}

/// Parses `"attack_rate: A..B step S"`, `"vuln"` (optionally followed by
/// `: u:a:h, ...`) or `"none"`.
pub fn parse_sweep(spec: &str) -> Result<Sweep> {
    let bad = |message: &str| Error::Sweep { spec: spec.to_string(), message: message.to_string() };
    let trimmed = spec.trim();
    if trimmed.is_empty() || trimmed.eq_ignore_ascii_case("none") {
        return Ok(Sweep::None);
    }
    let (name, rest) = match trimmed.split_once(':') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => (trimmed, ""),
    };
    match name.to_ascii_lowercase().as_str() {
        "attack_rate" | "attack" => {
            let (range, step) = rest.split_once("step").ok_or_else(|| bad("expected `A..B step S`"))?;
            let (lo, hi) = range.split_once("..").ok_or_else(|| bad("expected `A..B step S`"))?;
            let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("`{}` is not a number", s.trim())));
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if !(step > 0.0) || hi < lo {
                return Err(bad("need A <= B and S > 0"));
            }
            if lo < 0.0 || hi > 1.0 {
                return Err(bad("attack rates must lie in [0, 1]"));
            }
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            let points = (0..=n).map(|i| round9(lo + i as f64 * step)).collect();
            Ok(Sweep::AttackRate(points))
        }
        "vuln" | "vulnerability" | "vuln_triplets" => {
            if rest.is_empty() {
                return Ok(Sweep::Vulnerability(VULN_TRIPLETS.to_vec()));
            }
            let triplets = rest
                .split([',', ' '])
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<VulnTriplet>().map_err(|e| bad(&e)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Sweep::Vulnerability(triplets))
        }
        other => Err(bad(&format!("unknown sweep dimension `{other}`"))),
    }
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn config_error(path: &Path, message: String) -> Error {
    Error::Config { path: PathBuf::from(path), message }
}

fn with_line(line: Option<usize>, msg: String) -> String {
    match line {
        Some(n) => format!("line {n}: {msg}"),
        None => msg,
    }
}

fn string_list(v: &toml::Value) -> Option<Vec<String>> {
    v.as_array()?.iter().map(|x| x.as_str().map(str::to_string)).collect()
}

fn unknown_field(msg: &str) -> Option<String> {
    let rest = msg.split("unknown field `").nth(1)?;
    Some(rest.split('`').next()?.to_string())
}

/// 1-based line of the first `key = ...` assignment, including inside tables.
fn key_line(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key).is_some_and(|r| r.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

fn known_keys() -> Vec<String> {
    let mut keys: Vec<String> = match serde_json::to_value(ScenarioParams::default()) {
        Ok(serde_json::Value::Object(map)) => {
            let mut k: Vec<String> = map.keys().cloned().collect();
            if let Some(serde_json::Value::Object(c)) = map.get("classifier") {
                k.extend(c.keys().cloned());
            }
            k
        }
        _ => Vec::new(),
    };
    keys.extend(EXPERIMENT_KEYS.iter().map(|s| s.to_string()));
    // longest first so `vuln_ugv` wins over a hypothetical `vuln`
    keys.sort_by_key(|k| std::cmp::Reverse(k.len()));
    keys
}
