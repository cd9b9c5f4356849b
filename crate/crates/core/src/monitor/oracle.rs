//! Direct evaluation by definition over a whole trace.
//!
//! Nothing here is incremental: each subformula gets a table of its values
//! at every position, computed from the quantified definitions of the
//! operators. The register program is checked against these tables.

use crate::expr::BoolExpr;
use crate::lane::{Judged, Lane};
use crate::semantics::TemporalFormula as F;

use super::program::PropTable;
use super::trace::Trace;
use super::{MonitorError, Verdict};

fn leaf_index(table: &PropTable, e: &BoolExpr) -> Result<usize, MonitorError> {
    table
        .index(e)
        .ok_or_else(|| MonitorError::UnknownProposition(e.to_string()))
}

fn judge_state<L: Lane>(e: &BoolExpr, table: &PropTable, props: &[L]) -> Result<Judged<L>, MonitorError> {
    let sub = |e: &BoolExpr| judge_state(e, table, props);
    Ok(match e {
        BoolExpr::Const(b) => Judged::constant(*b),
        BoolExpr::Atom(_) | BoolExpr::Comparison(..) | BoolExpr::FnApp(..) => {
            Judged::open(props[leaf_index(table, e)?])
        }
        BoolExpr::Not(a) => sub(a)?.not(),
        BoolExpr::And(a, b) => sub(a)?.and(sub(b)?),
        BoolExpr::Or(a, b) => sub(a)?.or(sub(b)?),
        BoolExpr::Implies(a, b) => sub(a)?.implies(sub(b)?),
        BoolExpr::Iff(a, b) => sub(a)?.iff(sub(b)?),
        BoolExpr::IfThenElse(c, t, f) => Judged::ite(sub(c)?, sub(t)?, sub(f)?),
        BoolExpr::Quant(..) => return Err(MonitorError::UnexpandedQuantifier(e.to_string())),
    })
}

fn all<L: Lane>(it: impl Iterator<Item = L>) -> L {
    it.fold(L::all(), |a, b| a & b)
}

fn any<L: Lane>(it: impl Iterator<Item = L>) -> L {
    it.fold(L::none(), |a, b| a | b)
}

/// Judged values of a past formula on every prefix of `trace`.
///
/// `trace[i][k]` is proposition `k` of `table` at position `i`. Entry 0 of
/// the result is the empty prefix, entry `i + 1` is position `i`.
pub fn judge_prefixes<L: Lane>(
    f: &F,
    table: &PropTable,
    trace: &[Vec<L>],
) -> Result<Vec<Judged<L>>, MonitorError> {
    let n = trace.len();
    let none = vec![L::none(); table.len()];
    let open = |v: bool| Judged::open(L::splat(v));
    let mut out = Vec::with_capacity(n + 1);
    match f {
        F::Atom(e) => {
            out.push(judge_state(e, table, &none)?);
            for props in trace {
                out.push(judge_state(e, table, props)?);
            }
        }
        F::Not(a) => out = judge_prefixes(a, table, trace)?.into_iter().map(Judged::not).collect(),
        F::And(a, b) | F::Or(a, b) | F::Implies(a, b) | F::Iff(a, b) => {
            let (a, b) = (judge_prefixes(a, table, trace)?, judge_prefixes(b, table, trace)?);
            for (x, y) in a.into_iter().zip(b) {
                out.push(match f {
                    F::And(..) => x.and(y),
                    F::Or(..) => x.or(y),
                    F::Implies(..) => x.implies(y),
                    _ => x.iff(y),
                });
            }
        }
        F::Yesterday(a) => {
            let a = &judge_prefixes(a, table, trace)?[1..];
            out.push(open(false));
            for i in 0..n {
                let before = if i == 0 { L::none() } else { a[i - 1].value };
                out.push(Judged {
                    value: before,
                    locked_true: before & a[i].locked_true,
                    locked_false: !before & a[i].locked_false,
                });
            }
        }
        F::Historically(a) => {
            let a = &judge_prefixes(a, table, trace)?[1..];
            out.push(open(true));
            for i in 0..n {
                let value = all(a[..=i].iter().map(|j| j.value));
                out.push(Judged {
                    value,
                    locked_true: value & a[i].locked_true,
                    locked_false: !value,
                });
            }
        }
        F::Once(a) => {
            let a = &judge_prefixes(a, table, trace)?[1..];
            out.push(open(false));
            for i in 0..n {
                let value = any(a[..=i].iter().map(|j| j.value));
                out.push(Judged {
                    value,
                    locked_true: value,
                    locked_false: !value & a[i].locked_false,
                });
            }
        }
        F::Since(a, b) => {
            let a = &judge_prefixes(a, table, trace)?[1..];
            let b = &judge_prefixes(b, table, trace)?[1..];
            out.push(open(false));
            for i in 0..n {
                // some k <= i with b at k and a on (k, i]
                let value = any((0..=i).map(|k| b[k].value & all(a[k + 1..=i].iter().map(|j| j.value))));
                out.push(Judged {
                    value,
                    locked_true: value & (a[i].locked_true | b[i].locked_true),
                    locked_false: !value & b[i].locked_false,
                });
            }
        }
        F::BoundedHistorically(bd, a) | F::BoundedOnce(bd, a) => {
            let every = matches!(f, F::BoundedHistorically(..));
            let a = &judge_prefixes(a, table, trace)?[1..];
            let (lo, hi) = (bd.lo as usize, bd.hi as usize);
            out.push(open(every));
            for i in 0..n {
                let first = i.saturating_sub(hi);
                let window = || (first..=i).filter(|&j| j + lo <= i).map(|j| a[j].value);
                let reached = i >= lo;
                let (value, locked_true, locked_false) = if every {
                    (
                        all(window()),
                        a[first].locked_true,
                        if reached { a[i - lo].locked_false } else { L::none() },
                    )
                } else {
                    (
                        any(window()),
                        if reached { a[i - lo].locked_true } else { L::none() },
                        a[first].locked_false,
                    )
                };
                out.push(Judged {
                    value,
                    locked_true,
                    locked_false,
                });
            }
        }
        _ => return Err(MonitorError::NotPast(f.to_string())),
    }
    Ok(out)
}

/// Values of any formula, past or future, at every position of a complete
/// trace.
///
/// `X` and `U` are strong. Bounded `G` holds vacuously past the end of the
/// trace, bounded `F` needs a witness inside it.
pub fn evaluate_complete<L: Lane>(f: &F, table: &PropTable, trace: &[Vec<L>]) -> Result<Vec<L>, MonitorError> {
    let n = trace.len();
    let sub = |g: &F| evaluate_complete(g, table, trace);
    Ok(match f {
        F::Atom(e) => trace
            .iter()
            .map(|props| judge_state(e, table, props).map(|j| j.value))
            .collect::<Result<_, _>>()?,
        F::End => (0..n).map(|i| L::splat(i + 1 == n)).collect(),
        F::Not(a) => sub(a)?.into_iter().map(|v| !v).collect(),
        F::And(a, b) | F::Or(a, b) | F::Implies(a, b) | F::Iff(a, b) => {
            let (a, b) = (sub(a)?, sub(b)?);
            a.into_iter()
                .zip(b)
                .map(|(x, y)| match f {
                    F::And(..) => x & y,
                    F::Or(..) => x | y,
                    F::Implies(..) => !x | y,
                    _ => !(x ^ y),
                })
                .collect()
        }
        F::Next(a) => {
            let a = sub(a)?;
            (0..n).map(|i| if i + 1 < n { a[i + 1] } else { L::none() }).collect()
        }
        F::Globally(a) => {
            let a = sub(a)?;
            (0..n).map(|i| all(a[i..].iter().copied())).collect()
        }
        F::Finally(a) => {
            let a = sub(a)?;
            (0..n).map(|i| any(a[i..].iter().copied())).collect()
        }
        F::Until(a, b) => {
            let (a, b) = (sub(a)?, sub(b)?);
            (0..n)
                .map(|i| any((i..n).map(|k| b[k] & all(a[i..k].iter().copied()))))
                .collect()
        }
        F::BoundedGlobally(bd, a) | F::BoundedFinally(bd, a) => {
            let a = sub(a)?;
            let every = matches!(f, F::BoundedGlobally(..));
            (0..n)
                .map(|i| {
                    let lo = (i as u64).saturating_add(bd.lo);
                    let hi = (i as u64).saturating_add(bd.hi).min(n as u64 - 1);
                    let window = (lo..=hi).map(|j| a[j as usize]);
                    if every {
                        all(window)
                    } else {
                        any(window)
                    }
                })
                .collect()
        }
        F::Yesterday(a) => {
            let a = sub(a)?;
            (0..n).map(|i| if i > 0 { a[i - 1] } else { L::none() }).collect()
        }
        F::Historically(a) => {
            let a = sub(a)?;
            (0..n).map(|i| all(a[..=i].iter().copied())).collect()
        }
        F::Once(a) => {
            let a = sub(a)?;
            (0..n).map(|i| any(a[..=i].iter().copied())).collect()
        }
        F::Since(a, b) => {
            let (a, b) = (sub(a)?, sub(b)?);
            (0..n)
                .map(|i| any((0..=i).map(|k| b[k] & all(a[k + 1..=i].iter().copied()))))
                .collect()
        }
        F::BoundedHistorically(bd, a) | F::BoundedOnce(bd, a) => {
            let a = sub(a)?;
            let every = matches!(f, F::BoundedHistorically(..));
            (0..n)
                .map(|i| {
                    let first = (i as u64).saturating_sub(bd.hi) as usize;
                    let window = (first..=i).filter(|&j| (j as u64) + bd.lo <= i as u64).map(|j| a[j]);
                    if every {
                        all(window)
                    } else {
                        any(window)
                    }
                })
                .collect()
        }
    })
}

fn valuations(table: &PropTable, t: &Trace) -> Result<Vec<Vec<bool>>, MonitorError> {
    t.steps().map(|(_, a)| table.valuate(a)).collect()
}

/// Verdict after each event of `t`, computed by definition.
pub fn brute_force_verdicts(f: &F, t: &Trace) -> Result<Vec<Verdict>, MonitorError> {
    let table = PropTable::of(f);
    let vals = valuations(&table, t)?;
    let judged = judge_prefixes(f, &table, &vals)?;
    let mut out = Vec::with_capacity(t.len());
    let mut last = Verdict::of(judged[0]);
    let mut i = 0;
    for e in t.events() {
        if e.is_end() {
            last = last.resolve();
        } else {
            i += 1;
            last = Verdict::of(judged[i]);
        }
        out.push(last);
    }
    Ok(out)
}

/// Verdict at the end of `t`: presumptive unless `t` has ended.
pub fn brute_force_eval(f: &F, t: &Trace) -> Result<Verdict, MonitorError> {
    let table = PropTable::of(f);
    let vals = valuations(&table, t)?;
    let judged = judge_prefixes(f, &table, &vals)?;
    let v = Verdict::of(*judged.last().expect("empty prefix present"));
    Ok(if t.ended() { v.resolve() } else { v })
}

/// Truth of any formula at the first position of a complete, non-empty trace.
pub fn holds_on(f: &F, t: &Trace) -> Result<bool, MonitorError> {
    let table = PropTable::of(f);
    let vals = valuations(&table, t)?;
    if vals.is_empty() {
        return Err(MonitorError::EmptyTrace);
    }
    Ok(evaluate_complete::<bool>(f, &table, &vals)?[0])
}
