//! Requirement to future-time formula.
//!
//! Every scope is a set of segments of the trace. Inside a segment the
//! condition picks trigger positions and the timing constrains the response
//! from each trigger to the segment's last position. `E` below is a formula
//! that holds exactly at a segment's last position.

use crate::requirement::{ConditionSpec, Requirement, ScopeSpec, TimingSpec};

use super::formula::TemporalFormula as F;
use super::modes::ModeModel;
use super::template::{template_key, ScopeOption, TimingOption};
use super::ticks::{duration_to_ticks, TickConfig};
use super::{effective_timing, ensure_expanded, SemanticsError};

/// Where segments stop.
enum SegEnd {
    /// Segments run to the end of the trace.
    Trace,
    Formula(F),
}

impl SegEnd {
    fn formula(&self) -> F {
        match self {
            SegEnd::Trace => F::End,
            SegEnd::Formula(e) => e.clone(),
        }
    }
}

pub fn to_future_ltl(req: &Requirement, mm: &ModeModel) -> Result<F, SemanticsError> {
    to_future_ltl_with(req, mm, &TickConfig::default())
}

pub fn to_future_ltl_with(
    req: &Requirement,
    mm: &ModeModel,
    ticks: &TickConfig,
) -> Result<F, SemanticsError> {
    ensure_expanded(req)?;
    let key = template_key(req);
    if matches!(key.scope, ScopeOption::OnlyBefore | ScopeOption::OnlyAfter)
        && matches!(key.timing, TimingOption::For | TimingOption::Within)
    {
        return Err(SemanticsError::UnsupportedTemplate(key));
    }
    let (timing, response) = effective_timing(req);
    let c = Compiler {
        timing: &timing,
        response: F::atom(response),
        condition: &req.condition,
        ticks,
    };
    let mode = |m: &str| F::atom(mm.in_mode(m));
    Ok(match &req.scope {
        ScopeSpec::Null => c.conditioned(&SegEnd::Trace, false)?,
        ScopeSpec::In(m) => c.state_scope(mode(m), false)?,
        ScopeSpec::NotIn(m) => c.state_scope(F::not(mode(m)), false)?,
        ScopeSpec::While(e) => c.state_scope(F::atom(e.clone()), false)?,
        ScopeSpec::OnlyIn(m) => c.state_scope(F::not(mode(m)), true)?,
        ScopeSpec::Before(m) => {
            let end = SegEnd::Formula(F::or(F::End, F::next(mode(m))));
            F::implies(F::not(mode(m)), c.conditioned(&end, false)?)
        }
        ScopeSpec::After(m) => {
            let inner = weak_until(mode(m), F::and(F::not(mode(m)), c.conditioned(&SegEnd::Trace, false)?));
            weak_until(F::not(mode(m)), F::and(mode(m), inner))
        }
        ScopeSpec::OnlyBefore(m) => weak_until(
            F::not(mode(m)),
            F::and(mode(m), c.conditioned(&SegEnd::Trace, true)?),
        ),
        ScopeSpec::OnlyAfter(m) => {
            let end = SegEnd::Formula(F::or(F::End, F::and(mode(m), F::next(F::not(mode(m))))));
            c.conditioned(&end, true)?
        }
    })
}

/// `a` holds until `b`, or to the end of the trace.
fn weak_until(a: F, b: F) -> F {
    F::until(a.clone(), F::or(b, F::and(a, F::End)))
}

/// `phi` at every position up to and including the segment's last one.
fn throughout(phi: F, end: &SegEnd) -> F {
    match end {
        SegEnd::Trace => F::globally(phi),
        SegEnd::Formula(e) => F::until(phi.clone(), F::and(phi, e.clone())),
    }
}

struct Compiler<'a> {
    timing: &'a TimingSpec,
    response: F,
    condition: &'a ConditionSpec,
    ticks: &'a TickConfig,
}

impl Compiler<'_> {
    /// Segments are the maximal runs of `s`.
    fn state_scope(&self, s: F, negate: bool) -> Result<F, SemanticsError> {
        let end = SegEnd::Formula(F::or(F::End, F::next(F::not(s.clone()))));
        let body = self.conditioned(&end, negate)?;
        let entry = F::and(F::not(s.clone()), F::next(s.clone()));
        Ok(F::and(
            F::implies(s, body.clone()),
            F::globally(F::implies(entry, F::next(body))),
        ))
    }

    /// The condition applied at a segment's first position.
    fn conditioned(&self, end: &SegEnd, negate: bool) -> Result<F, SemanticsError> {
        let psi = self.timed(end)?;
        let psi = if negate { F::not(psi) } else { psi };
        Ok(match self.condition {
            ConditionSpec::Null => psi,
            ConditionSpec::Trigger { expr, .. } => {
                let c = F::atom(expr.clone());
                let rising = match end {
                    SegEnd::Trace => F::and(F::not(c.clone()), F::next(c.clone())),
                    SegEnd::Formula(e) => F::and(
                        F::and(F::not(c.clone()), F::not(e.clone())),
                        F::next(c.clone()),
                    ),
                };
                F::and(
                    F::implies(c, psi.clone()),
                    throughout(F::implies(rising, F::next(psi)), end),
                )
            }
            ConditionSpec::Continual { expr } => {
                throughout(F::implies(F::atom(expr.clone()), psi), end)
            }
        })
    }

    /// The timing applied at a trigger position.
    fn timed(&self, end: &SegEnd) -> Result<F, SemanticsError> {
        let r = self.response.clone();
        let e = end.formula();
        let clean = matches!(end, SegEnd::Trace);
        let ticks = |d| duration_to_ticks(d, self.ticks);
        Ok(match self.timing {
            TimingSpec::Eventually if clean => F::finally(r),
            TimingSpec::Eventually => F::until(F::not(e), r),
            TimingSpec::Always if clean => F::globally(r),
            TimingSpec::Always => F::until(r.clone(), F::and(r, e)),
            TimingSpec::Never => unreachable!("rewritten before compilation"),
            TimingSpec::Immediately => r,
            TimingSpec::NextTimepoint if clean => F::next(r),
            TimingSpec::NextTimepoint => F::and(F::not(e), F::next(r)),
            TimingSpec::Until(u) => F::until(r.clone(), F::or(F::atom(u.clone()), F::and(r, e))),
            TimingSpec::Before(u) if clean => F::not(F::until(F::not(r), F::atom(u.clone()))),
            TimingSpec::Before(u) => F::not(F::until(
                F::and(F::not(r), F::not(e)),
                F::atom(u.clone()),
            )),
            TimingSpec::After(d) => {
                let n = ticks(*d)?;
                let at = F::globally_within(n, n, r);
                if clean {
                    at
                } else {
                    F::implies(F::globally_within(0, n - 1, F::not(e)), at)
                }
            }
            TimingSpec::For(d) => {
                let n = ticks(*d)?;
                let hold = F::globally_within(0, n, r.clone());
                if clean {
                    hold
                } else {
                    F::or(
                        hold,
                        F::and(F::finally_within(0, n, e.clone()), F::until(r.clone(), F::and(r, e))),
                    )
                }
            }
            TimingSpec::Within(d) => {
                let n = ticks(*d)?;
                let hit = F::finally_within(0, n, r.clone());
                if clean {
                    hit
                } else {
                    F::and(F::until(F::not(e), r), hit)
                }
            }
        })
    }
}
