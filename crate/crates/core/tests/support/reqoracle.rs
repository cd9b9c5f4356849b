//! Requirement meaning computed straight from trace positions, without
//! going through any temporal formula.
//!
//! A scope cuts the trace into segments (inclusive position ranges). Inside
//! each segment the condition picks trigger positions and the timing is
//! checked from every trigger to the segment's last position. The `only`
//! scopes require the timing to fail instead.

use reqforge_core::monitor::Assignment;
use reqforge_core::semantics::{duration_to_ticks, ModeModel, TickConfig};
use reqforge_core::{BoolExpr, ConditionSpec, Duration, EvalError, Requirement, ScopeSpec, TimingSpec};

pub fn eval(e: &BoolExpr, a: &Assignment) -> bool {
    e.eval_with(&mut |leaf: &BoolExpr| leaf.eval_leaf(a))
        .unwrap_or_else(|err: EvalError| panic!("{e}: {err}"))
}

/// Maximal runs of `true`.
pub fn runs(v: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &x) in v.iter().enumerate() {
        match (x, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, v.len() - 1));
    }
    out
}

/// Segments of the scope and whether the timing is negated in them.
pub fn segments(scope: &ScopeSpec, mm: &ModeModel, trace: &[Assignment]) -> (Vec<(usize, usize)>, bool) {
    let n = trace.len();
    let at = |e: &BoolExpr| trace.iter().map(|a| eval(e, a)).collect::<Vec<bool>>();
    let mode = |m: &str| at(&mm.in_mode(m));
    let not = |v: Vec<bool>| v.into_iter().map(|x| !x).collect::<Vec<bool>>();
    // first position of the mode, and the first position after it outside the mode
    let entry_exit = |m: &str| {
        let v = mode(m);
        let f = v.iter().position(|&x| x);
        let e = f.and_then(|f| (f..n).find(|&i| !v[i]));
        (f, e)
    };
    match scope {
        ScopeSpec::Null => (vec![(0, n - 1)], false),
        ScopeSpec::In(m) => (runs(&mode(m)), false),
        ScopeSpec::NotIn(m) => (runs(&not(mode(m))), false),
        ScopeSpec::While(e) => (runs(&at(e)), false),
        ScopeSpec::OnlyIn(m) => (runs(&not(mode(m))), true),
        ScopeSpec::Before(m) => match entry_exit(m).0 {
            Some(0) => (vec![], false),
            Some(f) => (vec![(0, f - 1)], false),
            None => (vec![(0, n - 1)], false),
        },
        ScopeSpec::After(m) => match entry_exit(m).1 {
            Some(e) => (vec![(e, n - 1)], false),
            None => (vec![], false),
        },
        ScopeSpec::OnlyBefore(m) => match entry_exit(m).0 {
            Some(f) => (vec![(f, n - 1)], true),
            None => (vec![], true),
        },
        ScopeSpec::OnlyAfter(m) => match entry_exit(m).1 {
            Some(e) => (vec![(0, e - 1)], true),
            None => (vec![(0, n - 1)], true),
        },
    }
}

/// Trigger positions inside `[a, b]`.
pub fn triggers(condition: &ConditionSpec, trace: &[Assignment], a: usize, b: usize) -> Vec<usize> {
    match condition {
        ConditionSpec::Null => vec![a],
        ConditionSpec::Trigger { expr, .. } => {
            let c: Vec<bool> = trace.iter().map(|x| eval(expr, x)).collect();
            (a..=b).filter(|&t| c[t] && (t == a || !c[t - 1])).collect()
        }
        ConditionSpec::Continual { expr } => (a..=b).filter(|&t| eval(expr, &trace[t])).collect(),
    }
}

/// Whether the timing holds from trigger `t` to segment end `b`.
pub fn timing_holds(
    timing: &TimingSpec,
    r: &[bool],
    trace: &[Assignment],
    ticks: &TickConfig,
    t: usize,
    b: usize,
) -> bool {
    let span = |d: &Duration| duration_to_ticks(*d, ticks).expect("small duration") as usize;
    let window = |d: &Duration| t..=(t.saturating_add(span(d))).min(b);
    let u = |e: &BoolExpr| (t..=b).find(|&k| eval(e, &trace[k]));
    match timing {
        TimingSpec::Eventually => r[t..=b].iter().any(|&x| x),
        TimingSpec::Always => r[t..=b].iter().all(|&x| x),
        TimingSpec::Never => !r[t..=b].iter().any(|&x| x),
        TimingSpec::Immediately => r[t],
        TimingSpec::NextTimepoint => t < b && r[t + 1],
        TimingSpec::Until(stop) => {
            let held_until = |k: usize| r[t..k].iter().all(|&x| x);
            (t..=b).any(|k| eval(stop, &trace[k]) && held_until(k)) || held_until(b + 1)
        }
        TimingSpec::Before(stop) => match u(stop) {
            Some(k) => r[t..k].iter().any(|&x| x),
            None => true,
        },
        TimingSpec::After(d) => {
            let k = t + span(d);
            k > b || r[k]
        }
        TimingSpec::For(d) => window(d).all(|k| r[k]),
        TimingSpec::Within(d) => window(d).any(|k| r[k]),
    }
}

/// Whether `req` holds on the complete, non-empty `trace`.
pub fn holds(req: &Requirement, mm: &ModeModel, ticks: &TickConfig, trace: &[Assignment]) -> bool {
    assert!(!trace.is_empty());
    let (segs, negate) = segments(&req.scope, mm, trace);
    let r: Vec<bool> = trace.iter().map(|a| eval(&req.response, a)).collect();
    segs.into_iter().all(|(a, b)| {
        triggers(&req.condition, trace, a, b)
            .into_iter()
            .all(|t| timing_holds(&req.timing, &r, trace, ticks, t, b) != negate)
    })
}
