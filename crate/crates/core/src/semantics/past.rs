//! Requirement to past-time formula, read at the last position of a trace.

use crate::requirement::{ConditionSpec, Requirement, ScopeSpec, TimingSpec};

use super::formula::TemporalFormula as F;
use super::modes::ModeModel;
use super::template::template_key;
use super::{effective_timing, ensure_expanded, SemanticsError};

pub fn to_past_ltl(req: &Requirement, mm: &ModeModel) -> Result<F, SemanticsError> {
    ensure_expanded(req)?;
    let unsupported = || SemanticsError::UnsupportedTemplate(template_key(req));
    let scope = match &req.scope {
        ScopeSpec::Null => None,
        ScopeSpec::In(m) => Some(F::atom(mm.in_mode(m))),
        ScopeSpec::While(e) => Some(F::atom(e.clone())),
        _ => return Err(unsupported()),
    };
    let cond = match &req.condition {
        ConditionSpec::Null => None,
        ConditionSpec::Trigger { expr, .. } => Some(F::atom(expr.clone())),
        ConditionSpec::Continual { .. } => return Err(unsupported()),
    };
    let (timing, response) = effective_timing(req);
    let r = F::atom(response);

    // active: inside a segment and the condition holds
    let active = match (&scope, &cond) {
        (None, None) => None,
        (Some(s), None) => Some(s.clone()),
        (None, Some(c)) => Some(c.clone()),
        (Some(s), Some(c)) => Some(F::and(s.clone(), c.clone())),
    };
    // trigger: active now but not at the previous position
    let trigger = match &active {
        None => F::not(F::yesterday(F::truth(true))),
        Some(k) => F::and(k.clone(), F::not(F::yesterday(k.clone()))),
    };
    let in_scope = |f: F| match &scope {
        None => f,
        Some(s) => F::and(s.clone(), f),
    };

    Ok(match timing {
        TimingSpec::Always => match (&scope, &cond) {
            (None, None) => F::historically(r),
            (None, Some(c)) => F::historically(F::implies(F::once(c.clone()), r)),
            (Some(s), None) => F::historically(F::implies(s.clone(), r)),
            (Some(s), Some(_)) => F::historically(F::implies(
                F::since(s.clone(), active.clone().unwrap()),
                r,
            )),
        },
        TimingSpec::Eventually => {
            if scope.is_none() && cond.is_none() {
                F::once(r)
            } else {
                // an armed trigger still waiting for the response
                let open = F::since(
                    in_scope(F::not(r.clone())),
                    F::and(trigger, F::not(r)),
                );
                match &scope {
                    None => F::not(open),
                    Some(s) => F::and(
                        F::historically(F::not(F::and(F::yesterday(open.clone()), F::not(s.clone())))),
                        F::not(open),
                    ),
                }
            }
        }
        TimingSpec::Immediately => F::historically(F::implies(trigger, r)),
        TimingSpec::NextTimepoint => F::and(
            F::historically(F::implies(F::yesterday(trigger.clone()), in_scope(r))),
            F::not(trigger),
        ),
        _ => return Err(unsupported()),
    })
}
