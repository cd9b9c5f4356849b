//! Structured requirements: the five FRETISH fields plus identity metadata.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::expr::BoolExpr;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    pub file: Option<String>,
    pub line: Option<usize>,
}

/// Raw requirement text, optionally tagged with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceText {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Origin>,
}

impl SourceText {
    pub fn new(text: impl Into<String>) -> Self {
        SourceText {
            text: text.into(),
            origin: None,
        }
    }

    pub fn at(text: impl Into<String>, file: Option<String>, line: usize) -> Self {
        SourceText {
            text: text.into(),
            origin: Some(Origin {
                file,
                line: Some(line),
            }),
        }
    }
}

impl From<&str> for SourceText {
    fn from(s: &str) -> Self {
        SourceText::new(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "arg", rename_all = "camelCase")]
pub enum ScopeSpec {
    Null,
    In(String),
    NotIn(String),
    OnlyIn(String),
    Before(String),
    After(String),
    OnlyBefore(String),
    OnlyAfter(String),
    While(BoolExpr),
}

impl ScopeSpec {
    pub fn mode(&self) -> Option<&str> {
        match self {
            ScopeSpec::In(m)
            | ScopeSpec::NotIn(m)
            | ScopeSpec::OnlyIn(m)
            | ScopeSpec::Before(m)
            | ScopeSpec::After(m)
            | ScopeSpec::OnlyBefore(m)
            | ScopeSpec::OnlyAfter(m) => Some(m),
            ScopeSpec::Null | ScopeSpec::While(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriggerKeyword {
    When,
    If,
    Upon,
}

impl TriggerKeyword {
    pub fn as_str(self) -> &'static str {
        match self {
            TriggerKeyword::When => "when",
            TriggerKeyword::If => "if",
            TriggerKeyword::Upon => "upon",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConditionSpec {
    Null,
    Trigger { expr: BoolExpr, keyword: TriggerKeyword },
    Continual { expr: BoolExpr },
}

impl ConditionSpec {
    pub fn expr(&self) -> Option<&BoolExpr> {
        match self {
            ConditionSpec::Null => None,
            ConditionSpec::Trigger { expr, .. } | ConditionSpec::Continual { expr } => Some(expr),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    Tick,
    Second,
    Minute,
    Hour,
}

impl TimeUnit {
    /// Milliseconds per unit; `None` for ticks.
    pub fn millis(self) -> Option<u64> {
        match self {
            TimeUnit::Tick => None,
            TimeUnit::Second => Some(1_000),
            TimeUnit::Minute => Some(60_000),
            TimeUnit::Hour => Some(3_600_000),
        }
    }

    pub fn name(self, plural: bool) -> &'static str {
        match (self, plural) {
            (TimeUnit::Tick, false) => "tick",
            (TimeUnit::Tick, true) => "ticks",
            (TimeUnit::Second, false) => "second",
            (TimeUnit::Second, true) => "seconds",
            (TimeUnit::Minute, false) => "minute",
            (TimeUnit::Minute, true) => "minutes",
            (TimeUnit::Hour, false) => "hour",
            (TimeUnit::Hour, true) => "hours",
        }
    }
}

/// A strictly positive span of time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Duration {
    pub magnitude: u64,
    pub unit: TimeUnit,
}

impl Duration {
    pub fn new(magnitude: u64, unit: TimeUnit) -> Self {
        debug_assert!(magnitude > 0, "durations are strictly positive");
        Duration { magnitude, unit }
    }

    pub fn ticks(magnitude: u64) -> Self {
        Duration::new(magnitude, TimeUnit::Tick)
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.magnitude, self.unit.name(self.magnitude != 1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "arg", rename_all = "lowercase")]
pub enum TimingSpec {
    Eventually,
    Always,
    Never,
    Immediately,
    NextTimepoint,
    Until(BoolExpr),
    Before(BoolExpr),
    After(Duration),
    For(Duration),
    Within(Duration),
}

/// One structured requirement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Requirement {
    pub id: String,
    pub parent_id: Option<String>,
    pub project: String,
    pub scope: ScopeSpec,
    pub condition: ConditionSpec,
    pub component: String,
    pub timing: TimingSpec,
    pub response: BoolExpr,
    pub rationale: Option<String>,
    pub source: Option<SourceText>,
}

impl Requirement {
    /// A requirement with every optional field at its default.
    pub fn new(id: impl Into<String>, component: impl Into<String>, response: BoolExpr) -> Self {
        Requirement {
            id: id.into(),
            parent_id: None,
            project: String::new(),
            scope: ScopeSpec::Null,
            condition: ConditionSpec::Null,
            component: component.into(),
            timing: TimingSpec::Eventually,
            response,
            rationale: None,
            source: None,
        }
    }

    /// Parses `text` and assigns `id`.
    pub fn parse(id: impl Into<String>, text: &str) -> Result<Requirement, crate::parser::ParseError> {
        let (mut req, _) = crate::parser::parse_requirement(&SourceText::new(text))?;
        req.id = id.into();
        Ok(req)
    }

    pub fn with_parent(mut self, parent: impl Into<String>) -> Self {
        self.parent_id = Some(parent.into());
        self
    }

    pub fn with_project(mut self, project: impl Into<String>) -> Self {
        self.project = project.into();
        self
    }

    pub fn with_scope(mut self, scope: ScopeSpec) -> Self {
        self.scope = scope;
        self
    }

    pub fn with_condition(mut self, condition: ConditionSpec) -> Self {
        self.condition = condition;
        self
    }

    pub fn with_timing(mut self, timing: TimingSpec) -> Self {
        self.timing = timing;
        self
    }

    /// The FRETISH sentence for this requirement.
    pub fn text(&self) -> String {
        crate::parser::pretty_print(self).text
    }

    /// Equality of the five FRETISH fields, ignoring identity and provenance.
    pub fn same_fields(&self, other: &Requirement) -> bool {
        self.scope == other.scope
            && self.condition == other.condition
            && self.component == other.component
            && self.timing == other.timing
            && self.response == other.response
    }
}
