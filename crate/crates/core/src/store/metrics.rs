use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::semantics::{template_key, ConditionOption, ScopeOption, TimingOption};

use super::RequirementSet;

/// Template option counts over a requirement set. Every option appears in
/// each map, zero or not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub total: usize,
    pub child_count: usize,
    pub scope: BTreeMap<ScopeOption, usize>,
    pub condition: BTreeMap<ConditionOption, usize>,
    pub timing: BTreeMap<TimingOption, usize>,
}

pub fn metrics(set: &RequirementSet) -> MetricsReport {
    let mut report = MetricsReport {
        total: 0,
        child_count: 0,
        scope: ScopeOption::ALL.iter().map(|o| (*o, 0)).collect(),
        condition: ConditionOption::ALL.iter().map(|o| (*o, 0)).collect(),
        timing: TimingOption::ALL.iter().map(|o| (*o, 0)).collect(),
    };
    for r in set.iter() {
        let key = template_key(r);
        report.total += 1;
        *report.scope.entry(key.scope).or_default() += 1;
        *report.condition.entry(key.condition).or_default() += 1;
        *report.timing.entry(key.timing).or_default() += 1;
        if r.parent_id.is_some() {
            report.child_count += 1;
        }
    }
    report
}

/// The one JSON rendering of a report, shared by every front end.
pub fn metrics_json(report: &MetricsReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

impl MetricsReport {
    /// Rows of `(metric, option, count)`, skipping zero counts.
    pub fn rows(&self) -> Vec<(&'static str, String, usize)> {
        let mut rows = Vec::new();
        let nonzero = |n: &&usize| **n > 0;
        for (o, n) in self.scope.iter().filter(|(_, n)| nonzero(n)) {
            rows.push(("scope-option", o.as_str().to_string(), *n));
        }
        for (o, n) in self.condition.iter().filter(|(_, n)| nonzero(n)) {
            rows.push(("condition-option", o.as_str().to_string(), *n));
        }
        for (o, n) in self.timing.iter().filter(|(_, n)| nonzero(n)) {
            rows.push(("timing-option", o.as_str().to_string(), *n));
        }
        rows.push(("parent-child", "children".to_string(), self.child_count));
        rows.push(("total", String::new(), self.total));
        rows
    }

    /// Fixed-width ASCII table.
    pub fn to_table(&self) -> String {
        let rows = self.rows();
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max("metric".len());
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max("option".len());
        let mut out = String::new();
        let _ = writeln!(out, "{:<w0$}  {:<w1$}  count", "metric", "option");
        for (m, o, n) in rows {
            let _ = writeln!(out, "{m:<w0$}  {o:<w1$}  {n:>5}");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,option,count\n");
        for (m, o, n) in self.rows() {
            let _ = writeln!(out, "{m},{o},{n}");
        }
        out
    }
}
