//! Past-time formulas compiled to a flat register program.
//!
//! Each subformula owns one register holding its judged value at the
//! previous position; bounded operators also keep a window of their operand's
//! recent values. Locks follow these rules, where `v`, `lt`, `lf` are the
//! value and the locked-true/locked-false flags at position `i`:
//!
//! | formula      | lt                              | lf                          |
//! |--------------|---------------------------------|-----------------------------|
//! | `Y a`        | `a(i-1) & lt(a,i)`              | `!a(i-1) & lf(a,i)`         |
//! | `H a`        | `v & lt(a,i)`                   | `!v`                        |
//! | `O a`        | `v`                             | `!v & lf(a,i)`              |
//! | `a S b`      | `v & (lt(a,i) \| lt(b,i))`      | `!v & lf(b,i)`              |
//! | `H[lo,hi] a` | `lt(a, max(0,i-hi))`            | `i >= lo & lf(a, i-lo)`     |
//! | `O[lo,hi] a` | `i >= lo & lt(a, i-lo)`         | `lf(a, max(0,i-hi))`        |
//!
//! with `a(-1)` false. Before the first event every proposition reads false,
//! `H`/`H[..]` read true and `O`, `Y`, `S` read false, all unlocked.

use std::collections::{BTreeMap, VecDeque};

use crate::expr::{BoolExpr, VarKind};
use crate::lane::{Judged, Lane};
use crate::semantics::TemporalFormula as F;

use super::trace::Assignment;
use super::MonitorError;

/// The distinct leaf predicates of a formula, in first-occurrence order.
#[derive(Clone, Debug, PartialEq)]
pub struct PropTable {
    props: Vec<BoolExpr>,
}

impl PropTable {
    pub fn of(f: &F) -> Self {
        PropTable {
            props: f.propositions().into_iter().cloned().collect(),
        }
    }

    /// A table over the given leaves; duplicates are dropped.
    pub fn new(leaves: impl IntoIterator<Item = BoolExpr>) -> Self {
        let mut props: Vec<BoolExpr> = Vec::new();
        for l in leaves {
            if !props.contains(&l) {
                props.push(l);
            }
        }
        PropTable { props }
    }

    pub fn props(&self) -> &[BoolExpr] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn index(&self, leaf: &BoolExpr) -> Option<usize> {
        self.props.iter().position(|p| p == leaf)
    }

    /// Every variable read by the propositions.
    pub fn variables(&self) -> BTreeMap<String, VarKind> {
        let mut out = BTreeMap::new();
        for p in &self.props {
            p.collect_vars(&mut out);
        }
        out
    }

    /// Truth value of each proposition under `assign`.
    pub fn valuate(&self, assign: &Assignment) -> Result<Vec<bool>, MonitorError> {
        self.props
            .iter()
            .map(|p| p.eval_leaf(assign).map_err(MonitorError::from))
            .collect()
    }
}

/// A state predicate with leaves replaced by proposition indices.
#[derive(Clone, Debug)]
enum StateExpr {
    Const(bool),
    Prop(usize),
    Not(Box<StateExpr>),
    And(Box<StateExpr>, Box<StateExpr>),
    Or(Box<StateExpr>, Box<StateExpr>),
    Implies(Box<StateExpr>, Box<StateExpr>),
    Iff(Box<StateExpr>, Box<StateExpr>),
    Ite(Box<StateExpr>, Box<StateExpr>, Box<StateExpr>),
}

impl StateExpr {
    fn compile(e: &BoolExpr, table: &PropTable) -> Result<StateExpr, MonitorError> {
        let sub = |e: &BoolExpr| StateExpr::compile(e, table).map(Box::new);
        Ok(match e {
            BoolExpr::Const(b) => StateExpr::Const(*b),
            BoolExpr::Atom(_) | BoolExpr::Comparison(..) | BoolExpr::FnApp(..) => {
                StateExpr::Prop(
                    table
                        .index(e)
                        .ok_or_else(|| MonitorError::UnknownProposition(e.to_string()))?,
                )
            }
            BoolExpr::Not(a) => StateExpr::Not(sub(a)?),
            BoolExpr::And(a, b) => StateExpr::And(sub(a)?, sub(b)?),
            BoolExpr::Or(a, b) => StateExpr::Or(sub(a)?, sub(b)?),
            BoolExpr::Implies(a, b) => StateExpr::Implies(sub(a)?, sub(b)?),
            BoolExpr::Iff(a, b) => StateExpr::Iff(sub(a)?, sub(b)?),
            BoolExpr::IfThenElse(c, t, f) => StateExpr::Ite(sub(c)?, sub(t)?, sub(f)?),
            BoolExpr::Quant(..) => return Err(MonitorError::UnexpandedQuantifier(e.to_string())),
        })
    }

    fn judge<L: Lane>(&self, props: &[L]) -> Judged<L> {
        match self {
            StateExpr::Const(b) => Judged::constant(*b),
            StateExpr::Prop(i) => Judged::open(props[*i]),
            StateExpr::Not(a) => a.judge(props).not(),
            StateExpr::And(a, b) => a.judge(props).and(b.judge(props)),
            StateExpr::Or(a, b) => a.judge(props).or(b.judge(props)),
            StateExpr::Implies(a, b) => a.judge(props).implies(b.judge(props)),
            StateExpr::Iff(a, b) => a.judge(props).iff(b.judge(props)),
            StateExpr::Ite(c, t, f) => Judged::ite(c.judge(props), t.judge(props), f.judge(props)),
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    State(StateExpr),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Yesterday(usize),
    Historically(usize),
    Once(usize),
    Since(usize, usize),
    WindowAll { child: usize, lo: usize, hi: usize, slot: usize },
    WindowAny { child: usize, lo: usize, hi: usize, slot: usize },
}

/// Register contents between two events.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Registers<L> {
    started: bool,
    prev: Vec<Judged<L>>,
    windows: Vec<VecDeque<Judged<L>>>,
    // scratch for the step in progress, equal to `prev` between steps
    cur: Vec<Judged<L>>,
}

impl<L> Registers<L> {
    /// One register per subformula.
    pub fn len(&self) -> usize {
        self.prev.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prev.is_empty()
    }
}

/// Largest window a bounded operator may keep.
const MAX_WINDOW: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct Program {
    table: PropTable,
    nodes: Vec<Node>,
    windows: usize,
}

impl Program {
    pub fn compile(f: &F) -> Result<Program, MonitorError> {
        Program::compile_with(f, PropTable::of(f))
    }

    /// Compiles against a fixed proposition order; every leaf of `f` must be
    /// in `table`.
    pub fn compile_with(f: &F, table: PropTable) -> Result<Program, MonitorError> {
        let mut p = Program {
            table,
            nodes: Vec::new(),
            windows: 0,
        };
        p.lower(f)?;
        Ok(p)
    }

    fn lower(&mut self, f: &F) -> Result<usize, MonitorError> {
        let node = match f {
            F::Atom(e) => Node::State(StateExpr::compile(e, &self.table)?),
            F::Not(a) => Node::Not(self.lower(a)?),
            F::And(a, b) => Node::And(self.lower(a)?, self.lower(b)?),
            F::Or(a, b) => Node::Or(self.lower(a)?, self.lower(b)?),
            F::Implies(a, b) => Node::Implies(self.lower(a)?, self.lower(b)?),
            F::Iff(a, b) => Node::Iff(self.lower(a)?, self.lower(b)?),
            F::Yesterday(a) => Node::Yesterday(self.lower(a)?),
            F::Historically(a) => Node::Historically(self.lower(a)?),
            F::Once(a) => Node::Once(self.lower(a)?),
            F::Since(a, b) => Node::Since(self.lower(a)?, self.lower(b)?),
            F::BoundedHistorically(b, a) | F::BoundedOnce(b, a) => {
                if b.hi >= MAX_WINDOW {
                    return Err(MonitorError::WindowTooLarge(b.hi));
                }
                let child = self.lower(a)?;
                let slot = self.windows;
                self.windows += 1;
                let (lo, hi) = (b.lo as usize, b.hi as usize);
                if matches!(f, F::BoundedHistorically(..)) {
                    Node::WindowAll { child, lo, hi, slot }
                } else {
                    Node::WindowAny { child, lo, hi, slot }
                }
            }
            _ => return Err(MonitorError::NotPast(f.to_string())),
        };
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }

    pub fn props(&self) -> &PropTable {
        &self.table
    }

    /// Number of subformulas, hence registers.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Registers before the first event.
    pub fn initial<L: Lane>(&self) -> Registers<L> {
        let none = vec![L::none(); self.table.len()];
        let mut vals: Vec<Judged<L>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let j = match node {
                Node::State(e) => e.judge(&none),
                Node::Historically(_) | Node::WindowAll { .. } => Judged::open(L::all()),
                Node::Once(_) | Node::Yesterday(_) | Node::Since(..) | Node::WindowAny { .. } => {
                    Judged::open(L::none())
                }
                _ => self.connective(node, &vals),
            };
            vals.push(j);
        }
        Registers {
            started: false,
            cur: vals.clone(),
            prev: vals,
            windows: vec![VecDeque::new(); self.windows],
        }
    }

    /// Judged value of the whole formula at the last consumed event.
    pub fn current<L: Lane>(&self, regs: &Registers<L>) -> Judged<L> {
        regs.prev[self.root()]
    }

    fn connective<L: Lane>(&self, node: &Node, v: &[Judged<L>]) -> Judged<L> {
        match *node {
            Node::Not(a) => v[a].not(),
            Node::And(a, b) => v[a].and(v[b]),
            Node::Or(a, b) => v[a].or(v[b]),
            Node::Implies(a, b) => v[a].implies(v[b]),
            Node::Iff(a, b) => v[a].iff(v[b]),
            _ => unreachable!("temporal node"),
        }
    }

    /// Consumes one event given as proposition truth values.
    pub fn step<L: Lane>(&self, regs: &mut Registers<L>, props: &[L]) -> Judged<L> {
        debug_assert_eq!(props.len(), self.table.len());
        let first = !regs.started;
        for (k, node) in self.nodes.iter().enumerate() {
            let prev = regs.prev[k];
            let j = match *node {
                Node::State(ref e) => e.judge(props),
                Node::Yesterday(a) => {
                    let now = regs.cur[a];
                    if first {
                        Judged {
                            value: L::none(),
                            locked_true: L::none(),
                            locked_false: now.locked_false,
                        }
                    } else {
                        let before = regs.prev[a].value;
                        Judged {
                            value: before,
                            locked_true: before & now.locked_true,
                            locked_false: !before & now.locked_false,
                        }
                    }
                }
                Node::Historically(a) => {
                    let now = regs.cur[a];
                    let value = prev.value & now.value;
                    Judged {
                        value,
                        locked_true: value & now.locked_true,
                        locked_false: !value,
                    }
                }
                Node::Once(a) => {
                    let now = regs.cur[a];
                    let value = prev.value | now.value;
                    Judged {
                        value,
                        locked_true: value,
                        locked_false: !value & now.locked_false,
                    }
                }
                Node::Since(a, b) => {
                    let (a, b) = (regs.cur[a], regs.cur[b]);
                    let value = b.value | (a.value & prev.value);
                    Judged {
                        value,
                        locked_true: value & (a.locked_true | b.locked_true),
                        locked_false: !value & b.locked_false,
                    }
                }
                Node::WindowAll { child, lo, hi, slot } => {
                    let w = push_window(&mut regs.windows[slot], regs.cur[child], hi);
                    let in_range = w.len() > lo;
                    let value = w
                        .iter()
                        .rev()
                        .skip(lo)
                        .fold(L::all(), |acc, j| acc & j.value);
                    Judged {
                        value,
                        locked_true: w.front().expect("window holds the current value").locked_true,
                        locked_false: if in_range { w[w.len() - 1 - lo].locked_false } else { L::none() },
                    }
                }
                Node::WindowAny { child, lo, hi, slot } => {
                    let w = push_window(&mut regs.windows[slot], regs.cur[child], hi);
                    let in_range = w.len() > lo;
                    let value = w
                        .iter()
                        .rev()
                        .skip(lo)
                        .fold(L::none(), |acc, j| acc | j.value);
                    Judged {
                        value,
                        locked_true: if in_range { w[w.len() - 1 - lo].locked_true } else { L::none() },
                        locked_false: w.front().expect("window holds the current value").locked_false,
                    }
                }
                _ => self.connective(node, &regs.cur),
            };
            regs.cur[k] = j;
        }
        regs.started = true;
        regs.prev.copy_from_slice(&regs.cur);
        self.current(regs)
    }
}

fn push_window<L: Copy>(w: &mut VecDeque<Judged<L>>, j: Judged<L>, hi: usize) -> &VecDeque<Judged<L>> {
    w.push_back(j);
    if w.len() > hi + 1 {
        w.pop_front();
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monitor::Verdict;

    fn run(text: &str, steps: &[&[bool]]) -> Vec<Verdict> {
        let f: F = text.parse().unwrap();
        let p = Program::compile(&f).unwrap();
        let mut regs = p.initial::<bool>();
        steps.iter().map(|s| Verdict::of(p.step(&mut regs, s))).collect()
    }

    #[test]
    fn registers_match_subformula_count() {
        let f: F = "H (p => O q) & Y p".parse().unwrap();
        let p = Program::compile(&f).unwrap();
        assert_eq!(p.initial::<bool>().len(), p.len());
        assert_eq!(p.len(), 8);
    }

    #[test]
    fn historically_locks_false() {
        use Verdict::*;
        assert_eq!(run("H p", &[&[true], &[false], &[true]]), [PresumablyTrue, False, False]);
        assert_eq!(run("O p", &[&[false], &[true], &[false]]), [PresumablyFalse, True, True]);
        assert_eq!(run("Y p", &[&[true], &[false]]), [PresumablyFalse, PresumablyTrue]);
    }

    #[test]
    fn since_by_unfolding() {
        // p S q on [{p,!q}, {p,q}, {p,!q}]
        let got = run("p S q", &[&[true, false], &[true, true], &[true, false]]);
        assert!(!got[0].holds() && got[1].holds() && got[2].holds());
    }

    #[test]
    fn bounded_windows() {
        use Verdict::*;
        // O[1,2] p: p one or two steps back
        let got = run("O[1,2] p", &[&[true], &[false], &[false], &[false]]);
        assert_eq!(got, [PresumablyFalse, PresumablyTrue, PresumablyTrue, PresumablyFalse]);
        let got = run("H[0,1] p", &[&[false], &[true], &[true]]);
        assert_eq!(got, [PresumablyFalse, PresumablyFalse, PresumablyTrue]);
    }

    #[test]
    fn future_operators_rejected() {
        let f: F = "G p".parse().unwrap();
        assert!(matches!(Program::compile(&f), Err(MonitorError::NotPast(_))));
        let f: F = "H END".parse().unwrap();
        assert!(matches!(Program::compile(&f), Err(MonitorError::NotPast(_))));
    }

    #[test]
    fn lanes_evaluate_in_parallel() {
        let f: F = "p S q".parse().unwrap();
        let p = Program::compile(&f).unwrap();
        let mut wide = p.initial::<u8>();
        let mut single: Vec<_> = (0..8).map(|_| p.initial::<bool>()).collect();
        for step in 0..4u8 {
            let pv = step.wrapping_mul(37) ^ 0x5a;
            let qv = step.wrapping_mul(91) & 0x93;
            let out = p.step(&mut wide, &[pv, qv]);
            for (lane, regs) in single.iter_mut().enumerate() {
                let one = p.step(regs, &[pv.get(lane), qv.get(lane)]);
                assert_eq!(Verdict::of_lane(out, lane), Verdict::of(one));
            }
        }
    }
}
