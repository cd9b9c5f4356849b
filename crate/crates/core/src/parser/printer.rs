use crate::requirement::{ConditionSpec, Requirement, ScopeSpec, SourceText, TimingSpec};

pub fn scope_text(scope: &ScopeSpec) -> Option<String> {
    Some(match scope {
        ScopeSpec::Null => return None,
        ScopeSpec::In(m) => format!("in {m}"),
        ScopeSpec::NotIn(m) => format!("not in {m}"),
        ScopeSpec::OnlyIn(m) => format!("only in {m}"),
        ScopeSpec::Before(m) => format!("before {m}"),
        ScopeSpec::After(m) => format!("after {m}"),
        ScopeSpec::OnlyBefore(m) => format!("only before {m}"),
        ScopeSpec::OnlyAfter(m) => format!("only after {m}"),
        ScopeSpec::While(e) => format!("while {e}"),
    })
}

pub fn condition_text(condition: &ConditionSpec) -> Option<String> {
    match condition {
        ConditionSpec::Null => None,
        ConditionSpec::Trigger { expr, keyword } => Some(format!("{} {expr}", keyword.as_str())),
        ConditionSpec::Continual { expr } => Some(format!("whenever {expr}")),
    }
}

/// Timing phrase; `None` for the default `eventually`.
pub fn timing_text(timing: &TimingSpec) -> Option<String> {
    Some(match timing {
        TimingSpec::Eventually => return None,
        TimingSpec::Always => "always".into(),
        TimingSpec::Never => "never".into(),
        TimingSpec::Immediately => "immediately".into(),
        TimingSpec::NextTimepoint => "at the next timepoint".into(),
        TimingSpec::Until(e) => format!("until ({e})"),
        TimingSpec::Before(e) => format!("before ({e})"),
        TimingSpec::After(d) => format!("after {d}"),
        TimingSpec::For(d) => format!("for {d}"),
        TimingSpec::Within(d) => format!("within {d}"),
    })
}

/// Canonical sentence for `req`. Omitted optional fields stay omitted.
pub fn pretty_print(req: &Requirement) -> SourceText {
    let mut parts = Vec::with_capacity(6);
    parts.extend(scope_text(&req.scope));
    parts.extend(condition_text(&req.condition));
    parts.push(req.component.clone());
    parts.push("shall".into());
    parts.extend(timing_text(&req.timing));
    let response = req.response.to_string();
    // a leading minus would continue a preceding `until (...)` as arithmetic
    if response.starts_with('-') {
        parts.push(format!("({response})"));
    } else {
        parts.push(response);
    }
    SourceText::new(parts.join(" "))
}
