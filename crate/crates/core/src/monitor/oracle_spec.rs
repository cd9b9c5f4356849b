//! Oracle specification files and the verdict stream they produce.
//!
//! ```json
//! {"version":1,"tick_period_ms":100,"monitors":[
//!   {"id":"R1.8","formula":"H (grasp => near)",
//!    "vars":[{"name":"grasp","type":"bool"},{"name":"near","type":"bool"}],
//!    "channel":"verdict/R1.8"}]}
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::expr::VarKind;
use crate::requirement::Requirement;
use crate::semantics::{to_past_ltl, ModeModel, SemanticsError, TemporalFormula, TickConfig};

use super::incremental::{IncrementalMonitor, MonitorState};
use super::program::PropTable;
use super::trace::TraceEvent;
use super::{MonitorError, Verdict};

pub const ORACLE_SPEC_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: VarKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonitorEntry {
    pub id: String,
    pub formula: String,
    pub vars: Vec<VarDecl>,
    pub channel: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub version: u32,
    pub tick_period_ms: u64,
    pub monitors: Vec<MonitorEntry>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("requirement {id}: {source}")]
pub struct ExportError {
    pub id: String,
    #[source]
    pub source: SemanticsError,
}

/// Channel on which the verdicts of requirement `id` are published.
pub fn verdict_channel(id: &str) -> String {
    format!("verdict/{id}")
}

/// One entry per requirement, sorted by id.
pub fn export_oracle_spec(
    reqs: &[Requirement],
    mm: &ModeModel,
    ticks: &TickConfig,
) -> Result<OracleSpec, ExportError> {
    let mut sorted: Vec<&Requirement> = reqs.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let monitors = sorted
        .into_iter()
        .map(|r| {
            let f = to_past_ltl(r, mm).map_err(|source| ExportError {
                id: r.id.clone(),
                source,
            })?;
            Ok(MonitorEntry {
                id: r.id.clone(),
                formula: f.to_string(),
                vars: PropTable::of(&f)
                    .variables()
                    .into_iter()
                    .map(|(name, kind)| VarDecl { name, kind })
                    .collect(),
                channel: verdict_channel(&r.id),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(OracleSpec {
        version: ORACLE_SPEC_VERSION,
        tick_period_ms: ticks.tick_period_ms,
        monitors,
    })
}

impl OracleSpec {
    pub fn from_json(text: &str) -> Result<Self, MonitorError> {
        let spec: OracleSpec = serde_json::from_str(text).map_err(|e| MonitorError::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes") + "\n"
    }

    /// Ids are unique and every variable a formula reads is declared.
    pub fn validate(&self) -> Result<(), MonitorError> {
        if self.version != ORACLE_SPEC_VERSION {
            return Err(MonitorError::Spec(format!("unsupported version {}", self.version)));
        }
        let mut seen = BTreeSet::new();
        for m in &self.monitors {
            if !seen.insert(&m.id) {
                return Err(MonitorError::Spec(format!("duplicate id `{}`", m.id)));
            }
            let f = parse_entry(m)?;
            let declared: BTreeSet<&str> = m.vars.iter().map(|v| v.name.as_str()).collect();
            if let Some(v) = PropTable::of(&f).variables().keys().find(|v| !declared.contains(v.as_str())) {
                return Err(MonitorError::Spec(format!("`{}` reads undeclared variable `{v}`", m.id)));
            }
        }
        Ok(())
    }
}

fn parse_entry(m: &MonitorEntry) -> Result<TemporalFormula, MonitorError> {
    m.formula
        .parse()
        .map_err(|e| MonitorError::Spec(format!("`{}`: {e}", m.id)))
}

/// One line of the verdict stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub tick: u64,
    pub id: String,
    pub verdict: Verdict,
}

/// Every monitor of a spec, stepped together.
pub struct SpecMonitor {
    monitors: Vec<(String, IncrementalMonitor, MonitorState)>,
    last_tick: u64,
}

impl SpecMonitor {
    pub fn new(spec: &OracleSpec) -> Result<Self, MonitorError> {
        spec.validate()?;
        let mut monitors = spec
            .monitors
            .iter()
            .map(|m| {
                let mon = IncrementalMonitor::new(&parse_entry(m)?)?;
                let st = mon.initial_state();
                Ok((m.id.clone(), mon, st))
            })
            .collect::<Result<Vec<_>, MonitorError>>()?;
        monitors.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(SpecMonitor { monitors, last_tick: 0 })
    }

    /// Steps every monitor; records are in id order. END is reported at the
    /// tick of the last event.
    pub fn step(&mut self, e: &TraceEvent) -> Result<Vec<VerdictRecord>, MonitorError> {
        if let Some(t) = e.tick() {
            self.last_tick = t;
        }
        let tick = self.last_tick;
        self.monitors
            .iter_mut()
            .map(|(id, mon, st)| {
                let verdict = mon.step(st, e)?;
                Ok(VerdictRecord {
                    tick,
                    id: id.clone(),
                    verdict,
                })
            })
            .collect()
    }

    pub fn verdicts(&self) -> Vec<VerdictRecord> {
        self.monitors
            .iter()
            .map(|(id, _, st)| VerdictRecord {
                tick: self.last_tick,
                id: id.clone(),
                verdict: st.verdict,
            })
            .collect()
    }

    pub fn all_true(&self) -> bool {
        self.monitors.iter().all(|(_, _, st)| st.verdict == Verdict::True)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reqs(items: &[(&str, &str)]) -> Vec<Requirement> {
        items.iter().map(|(id, t)| Requirement::parse(*id, t).unwrap()).collect()
    }

    #[test]
    fn exported_entries() {
        let rs = reqs(&[
            ("R1.8", "SV shall always (grasp => near)"),
            ("R2.2", "SV shall always !(x = 0 | y = 0 | z = 0)"),
        ]);
        let spec = export_oracle_spec(&rs, &ModeModel::default(), &TickConfig::default()).unwrap();
        assert_eq!(spec.monitors.len(), 2);
        let names = |i: usize| spec.monitors[i].vars.iter().map(|v| v.name.clone()).collect::<Vec<_>>();
        assert_eq!(names(0), ["grasp", "near"]);
        assert_eq!(names(1), ["x", "y", "z"]);
        assert_eq!(spec.monitors[1].vars[0].kind, VarKind::Number);
        let back = OracleSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        let empty = export_oracle_spec(&[], &ModeModel::default(), &TickConfig::default()).unwrap();
        assert!(OracleSpec::from_json(&empty.to_json()).unwrap().monitors.is_empty());
    }

    #[test]
    fn unsupported_requirement_is_named() {
        let rs = reqs(&[("A", "C shall always p"), ("B", "C shall within 3 ticks p")]);
        let err = export_oracle_spec(&rs, &ModeModel::default(), &TickConfig::default()).unwrap_err();
        assert_eq!(err.id, "B");
    }

    #[test]
    fn invalid_specs_rejected() {
        let dup = r#"{"version":1,"tick_period_ms":100,"monitors":[
            {"id":"a","formula":"H p","vars":[{"name":"p","type":"bool"}],"channel":"c"},
            {"id":"a","formula":"H p","vars":[{"name":"p","type":"bool"}],"channel":"c"}]}"#;
        assert!(OracleSpec::from_json(dup).is_err());
        let undeclared = r#"{"version":1,"tick_period_ms":100,"monitors":[
            {"id":"a","formula":"H (p & q)","vars":[{"name":"p","type":"bool"}],"channel":"c"}]}"#;
        assert!(OracleSpec::from_json(undeclared).is_err());
    }
}
