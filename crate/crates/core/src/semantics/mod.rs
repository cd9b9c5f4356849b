//! Template classification and compilation to temporal logic.

mod diagram;
mod formula;
mod future;
mod modes;
mod past;
mod quant;
mod template;
mod ticks;

use thiserror::Error;

use crate::expr::BoolExpr;
use crate::requirement::{Requirement, ScopeSpec, TimingSpec};

pub use diagram::{diagram_data, diagram_data_with, Marker, Segment, SegmentKind, TimelineDiagram};
pub use formula::{normalize_bool, Bound, Direction, TemporalFormula};
pub use future::{to_future_ltl, to_future_ltl_with};
pub use modes::{ModeModel, DEFAULT_MODE_VARIABLE};
pub use past::to_past_ltl;
pub use quant::{expand_quantifiers, QuantDomain};
pub use template::{
    condition_option, scope_option, template_key, timing_option, ConditionOption, ScopeOption,
    TemplateKey, TimingOption,
};
pub use ticks::{duration_to_ticks, TickConfig, DEFAULT_TICK_PERIOD_MS};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("template {0} is not supported by this translation")]
    UnsupportedTemplate(TemplateKey),
    #[error("rewrite applies only to `never` timing, found `{0}`")]
    NotApplicable(TimingOption),
    #[error("no domain declared for quantified variable `{0}`")]
    UnknownDomain(String),
    #[error("invalid domain for `{var}`: {reason}")]
    InvalidDomain { var: String, reason: String },
    #[error("quantifier must be expanded first: `{0}`")]
    UnexpandedQuantifier(String),
    #[error("duration `{0}` overflows the tick counter")]
    Overflow(String),
    #[error("tick period must be positive")]
    InvalidTickPeriod,
}

/// `never r` as `always !r`; everything else unchanged.
pub fn rewrite_never(req: &Requirement) -> Result<Requirement, SemanticsError> {
    if req.timing != TimingSpec::Never {
        return Err(SemanticsError::NotApplicable(timing_option(&req.timing)));
    }
    let mut out = req.clone();
    out.timing = TimingSpec::Always;
    out.response = BoolExpr::not(req.response.clone());
    Ok(out)
}

fn effective_timing(req: &Requirement) -> (TimingSpec, BoolExpr) {
    match rewrite_never(req) {
        Ok(r) => (r.timing, r.response),
        Err(_) => (req.timing.clone(), req.response.clone()),
    }
}

fn ensure_expanded(req: &Requirement) -> Result<(), SemanticsError> {
    let mut exprs: Vec<&BoolExpr> = vec![&req.response];
    exprs.extend(req.condition.expr());
    if let ScopeSpec::While(e) = &req.scope {
        exprs.push(e);
    }
    if let TimingSpec::Until(e) | TimingSpec::Before(e) = &req.timing {
        exprs.push(e);
    }
    match exprs.into_iter().find(|e| e.has_quantifier()) {
        Some(e) => Err(SemanticsError::UnexpandedQuantifier(e.to_string())),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn never_rewrite() {
        let r = Requirement::parse("R", "C shall never x = 0").unwrap();
        let w = rewrite_never(&r).unwrap();
        assert_eq!(w.timing, TimingSpec::Always);
        assert_eq!(w.response.to_string(), "!(x = 0)");
        let r = Requirement::parse("R", "C shall never !p").unwrap();
        assert_eq!(rewrite_never(&r).unwrap().response.to_string(), "!!p");
        let r = Requirement::parse("R", "C shall always p").unwrap();
        assert_eq!(rewrite_never(&r), Err(SemanticsError::NotApplicable(TimingOption::Always)));
    }

    #[test]
    fn quantifiers_must_be_expanded() {
        let r = Requirement::parse("R", "C shall forall s: ok(s)").unwrap();
        assert!(matches!(
            to_future_ltl(&r, &ModeModel::default()),
            Err(SemanticsError::UnexpandedQuantifier(_))
        ));
    }
}
