use std::fmt;

use serde::{Deserialize, Serialize};

use crate::requirement::{ConditionSpec, Requirement, ScopeSpec, TimingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ScopeOption {
    Null,
    In,
    Notin,
    OnlyIn,
    Before,
    After,
    OnlyBefore,
    OnlyAfter,
    While,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ConditionOption {
    Null,
    Trigger,
    Continual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TimingOption {
    Eventually,
    Always,
    Never,
    Immediately,
    Next,
    Until,
    Before,
    After,
    For,
    Within,
}

impl ScopeOption {
    pub const ALL: [ScopeOption; 9] = [
        ScopeOption::Null,
        ScopeOption::In,
        ScopeOption::Notin,
        ScopeOption::OnlyIn,
        ScopeOption::Before,
        ScopeOption::After,
        ScopeOption::OnlyBefore,
        ScopeOption::OnlyAfter,
        ScopeOption::While,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScopeOption::Null => "null",
            ScopeOption::In => "in",
            ScopeOption::Notin => "notin",
            ScopeOption::OnlyIn => "onlyIn",
            ScopeOption::Before => "before",
            ScopeOption::After => "after",
            ScopeOption::OnlyBefore => "onlyBefore",
            ScopeOption::OnlyAfter => "onlyAfter",
            ScopeOption::While => "while",
        }
    }
}

impl ConditionOption {
    pub const ALL: [ConditionOption; 3] = [
        ConditionOption::Null,
        ConditionOption::Trigger,
        ConditionOption::Continual,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionOption::Null => "null",
            ConditionOption::Trigger => "trigger",
            ConditionOption::Continual => "continual",
        }
    }
}

impl TimingOption {
    pub const ALL: [TimingOption; 10] = [
        TimingOption::Eventually,
        TimingOption::Always,
        TimingOption::Never,
        TimingOption::Immediately,
        TimingOption::Next,
        TimingOption::Until,
        TimingOption::Before,
        TimingOption::After,
        TimingOption::For,
        TimingOption::Within,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TimingOption::Eventually => "eventually",
            TimingOption::Always => "always",
            TimingOption::Never => "never",
            TimingOption::Immediately => "immediately",
            TimingOption::Next => "next",
            TimingOption::Until => "until",
            TimingOption::Before => "before",
            TimingOption::After => "after",
            TimingOption::For => "for",
            TimingOption::Within => "within",
        }
    }
}

macro_rules! display_as_str {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    )*};
}

display_as_str!(ScopeOption, ConditionOption, TimingOption);

/// The (scope, condition, timing) classification of a requirement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TemplateKey {
    pub scope: ScopeOption,
    pub condition: ConditionOption,
    pub timing: TimingOption,
}

impl TemplateKey {
    pub fn new(scope: ScopeOption, condition: ConditionOption, timing: TimingOption) -> Self {
        TemplateKey {
            scope,
            condition,
            timing,
        }
    }
}

impl fmt::Display for TemplateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.scope, self.condition, self.timing)
    }
}

pub fn scope_option(scope: &ScopeSpec) -> ScopeOption {
    match scope {
        ScopeSpec::Null => ScopeOption::Null,
        ScopeSpec::In(_) => ScopeOption::In,
        ScopeSpec::NotIn(_) => ScopeOption::Notin,
        ScopeSpec::OnlyIn(_) => ScopeOption::OnlyIn,
        ScopeSpec::Before(_) => ScopeOption::Before,
        ScopeSpec::After(_) => ScopeOption::After,
        ScopeSpec::OnlyBefore(_) => ScopeOption::OnlyBefore,
        ScopeSpec::OnlyAfter(_) => ScopeOption::OnlyAfter,
        ScopeSpec::While(_) => ScopeOption::While,
    }
}

pub fn condition_option(condition: &ConditionSpec) -> ConditionOption {
    match condition {
        ConditionSpec::Null => ConditionOption::Null,
        ConditionSpec::Trigger { .. } => ConditionOption::Trigger,
        ConditionSpec::Continual { .. } => ConditionOption::Continual,
    }
}

pub fn timing_option(timing: &TimingSpec) -> TimingOption {
    match timing {
        TimingSpec::Eventually => TimingOption::Eventually,
        TimingSpec::Always => TimingOption::Always,
        TimingSpec::Never => TimingOption::Never,
        TimingSpec::Immediately => TimingOption::Immediately,
        TimingSpec::NextTimepoint => TimingOption::Next,
        TimingSpec::Until(_) => TimingOption::Until,
        TimingSpec::Before(_) => TimingOption::Before,
        TimingSpec::After(_) => TimingOption::After,
        TimingSpec::For(_) => TimingOption::For,
        TimingSpec::Within(_) => TimingOption::Within,
    }
}

pub fn template_key(req: &Requirement) -> TemplateKey {
    TemplateKey::new(
        scope_option(&req.scope),
        condition_option(&req.condition),
        timing_option(&req.timing),
    )
}
