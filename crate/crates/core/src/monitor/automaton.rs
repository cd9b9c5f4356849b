//! Explicit verdict automata, expanded from the register program.
//!
//! States are the distinct register contents reachable from the start,
//! split by verdict. Final verdicts collapse into two absorbing states,
//! equivalent states are merged, and each edge gets a minimal sum-of-products
//! guard over the formula's propositions.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::{Display, Write as _};

use serde::{Serialize, Serializer};

use crate::expr::BoolExpr;
use crate::semantics::{normalize_bool, TemporalFormula as F};

use super::incremental::Run;
use super::program::{Program, Registers};
use super::trace::{Trace, TraceEvent};
use super::{MonitorError, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutomatonLimits {
    pub max_atoms: usize,
    pub max_states: usize,
}

impl Default for AutomatonLimits {
    fn default() -> Self {
        AutomatonLimits {
            max_atoms: 12,
            max_states: 1 << 12,
        }
    }
}

fn as_text<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn all_as_text<S: Serializer>(v: &[BoolExpr], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|e| e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "on", rename_all = "lowercase")]
pub enum Guard {
    Event {
        #[serde(serialize_with = "as_text")]
        when: BoolExpr,
    },
    End,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    #[serde(flatten)]
    pub guard: Guard,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutomatonState {
    pub id: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonitorAutomaton {
    #[serde(serialize_with = "as_text")]
    pub formula: F,
    #[serde(serialize_with = "all_as_text")]
    pub propositions: Vec<BoolExpr>,
    pub initial: usize,
    pub states: Vec<AutomatonState>,
    pub transitions: Vec<Transition>,
    // next[state][valuation], valuation bit k = proposition k
    #[serde(skip)]
    next: Vec<Vec<usize>>,
    #[serde(skip)]
    on_end: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum RawState {
    Live(Registers<bool>),
    Final(bool),
}

pub fn compile_monitor(f: &F) -> Result<MonitorAutomaton, MonitorError> {
    compile_monitor_with(f, &AutomatonLimits::default())
}

pub fn compile_monitor_with(f: &F, limits: &AutomatonLimits) -> Result<MonitorAutomaton, MonitorError> {
    let program = Program::compile(f)?;
    let k = program.props().len();
    let too_many = |states| MonitorError::TooManyAtoms { atoms: k, states };
    if k > limits.max_atoms {
        return Err(too_many(0));
    }
    let valuations: Vec<Vec<bool>> = (0..1usize << k)
        .map(|v| (0..k).map(|b| v >> b & 1 == 1).collect())
        .collect();

    // breadth-first over register contents
    let classify = |regs: Registers<bool>| {
        let v = Verdict::of(program.current(&regs));
        match v {
            Verdict::True => RawState::Final(true),
            Verdict::False => RawState::Final(false),
            _ => RawState::Live(regs),
        }
    };
    let mut ids: HashMap<RawState, usize> = HashMap::new();
    let mut raw: Vec<RawState> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |s: RawState, raw: &mut Vec<RawState>, queue: &mut VecDeque<usize>| {
        *ids.entry(s.clone()).or_insert_with(|| {
            raw.push(s);
            queue.push_back(raw.len() - 1);
            raw.len() - 1
        })
    };
    let start = intern(classify(program.initial()), &mut raw, &mut queue);
    let t_id = intern(RawState::Final(true), &mut raw, &mut queue);
    let f_id = intern(RawState::Final(false), &mut raw, &mut queue);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut verdicts: Vec<Verdict> = Vec::new();
    while let Some(s) = queue.pop_front() {
        if raw.len() > limits.max_states + 2 {
            return Err(too_many(limits.max_states));
        }
        let (row, verdict) = match raw[s].clone() {
            RawState::Final(b) => (vec![s; valuations.len()], if b { Verdict::True } else { Verdict::False }),
            RawState::Live(regs) => {
                let verdict = Verdict::of(program.current(&regs));
                let row = valuations
                    .iter()
                    .map(|vals| {
                        let mut next = regs.clone();
                        program.step(&mut next, vals);
                        intern(classify(next), &mut raw, &mut queue)
                    })
                    .collect();
                (row, verdict)
            }
        };
        if edges.len() <= s {
            edges.resize(s + 1, Vec::new());
            verdicts.resize(s + 1, Verdict::False);
        }
        edges[s] = row;
        verdicts[s] = verdict;
    }
    let end_of = |s: usize| match verdicts[s].resolve() {
        Verdict::True => t_id,
        _ => f_id,
    };

    // merge states no sequence of events can tell apart
    let mut class: Vec<usize> = verdicts
        .iter()
        .map(|v| match v {
            Verdict::True => 0,
            Verdict::False => 1,
            Verdict::PresumablyTrue => 2,
            Verdict::PresumablyFalse => 3,
        })
        .collect();
    loop {
        let mut sig: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let next: Vec<usize> = (0..raw.len())
            .map(|s| {
                let key = (class[s], edges[s].iter().map(|&t| class[t]).collect());
                let n = sig.len();
                *sig.entry(key).or_insert(n)
            })
            .collect();
        let stable = sig.len() == class.iter().collect::<std::collections::BTreeSet<_>>().len();
        class = next;
        if stable {
            break;
        }
    }

    // number the merged states in breadth-first order from the start
    let mut order: HashMap<usize, usize> = HashMap::new();
    let mut rep: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([start]);
    order.insert(class[start], 0);
    rep.push(start);
    while let Some(s) = queue.pop_front() {
        let succ = edges[s].iter().copied().chain(std::iter::once(end_of(s)));
        for t in succ {
            if !order.contains_key(&class[t]) {
                order.insert(class[t], rep.len());
                rep.push(t);
                queue.push_back(t);
            }
        }
    }
    let id = |s: usize| order[&class[s]];
    let next: Vec<Vec<usize>> = rep.iter().map(|&s| edges[s].iter().map(|&t| id(t)).collect()).collect();
    let on_end: Vec<usize> = rep.iter().map(|&s| id(end_of(s))).collect();
    let states: Vec<AutomatonState> = rep
        .iter()
        .enumerate()
        .map(|(i, &s)| AutomatonState { id: i, verdict: verdicts[s] })
        .collect();

    let props = program.props().props().to_vec();
    let mut transitions = Vec::new();
    for (s, row) in next.iter().enumerate() {
        let mut by_target: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for (v, &t) in row.iter().enumerate() {
            by_target.entry(t).or_default().push(v as u32);
        }
        for (t, minterms) in by_target {
            transitions.push(Transition {
                from: s,
                to: t,
                guard: Guard::Event {
                    when: guard_expr(&props, &minimal_cover(k, &minterms)),
                },
            });
        }
        transitions.push(Transition {
            from: s,
            to: on_end[s],
            guard: Guard::End,
        });
    }

    Ok(MonitorAutomaton {
        formula: f.clone(),
        propositions: props,
        initial: 0,
        states,
        transitions,
        next,
        on_end,
    })
}

impl MonitorAutomaton {
    pub fn verdict(&self, state: usize) -> Verdict {
        self.states[state].verdict
    }

    /// Successor on an event whose propositions take the values `vals`.
    pub fn successor(&self, state: usize, vals: &[bool]) -> usize {
        let v = vals.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as usize) << i);
        self.next[state][v]
    }

    pub fn end_successor(&self, state: usize) -> usize {
        self.on_end[state]
    }

    /// Verdicts along `t`, one per event.
    pub fn run(&self, t: &Trace) -> Result<Run, MonitorError> {
        let table = super::program::PropTable::new(self.propositions.iter().cloned());
        let mut state = self.initial;
        let mut ended = false;
        let mut verdicts = Vec::with_capacity(t.len());
        for e in t.events() {
            if ended {
                return Err(MonitorError::EventAfterEnd);
            }
            state = match e {
                TraceEvent::End => {
                    ended = true;
                    self.end_successor(state)
                }
                TraceEvent::Step { assign, .. } => self.successor(state, &table.valuate(assign)?),
            };
            verdicts.push(self.verdict(state));
        }
        Ok(Run {
            verdict: self.verdict(state),
            verdicts,
        })
    }

    /// Every state has exactly one event edge enabled per valuation and one
    /// END edge.
    pub fn is_deterministic(&self) -> bool {
        let k = self.propositions.len();
        (0..self.states.len()).all(|s| {
            let out: Vec<&Transition> = self.transitions.iter().filter(|t| t.from == s).collect();
            let ends = out.iter().filter(|t| t.guard == Guard::End).count();
            let exclusive = (0..1usize << k).all(|v| {
                let enabled = out
                    .iter()
                    .filter(|t| match &t.guard {
                        Guard::Event { when } => self.guard_holds(when, v),
                        Guard::End => false,
                    })
                    .count();
                enabled == 1
            });
            ends == 1 && exclusive
        })
    }

    /// Truth of a guard under valuation `v` of the propositions.
    pub fn guard_holds(&self, guard: &BoolExpr, v: usize) -> bool {
        let mut leaf = |e: &BoolExpr| -> Result<bool, crate::expr::EvalError> {
            if let Some(i) = self.propositions.iter().position(|p| p == e) {
                return Ok(v >> i & 1 == 1);
            }
            // a negated comparison printed in flipped form
            let flipped = normalize_bool(&BoolExpr::not(e.clone()));
            let i = self
                .propositions
                .iter()
                .position(|p| *p == flipped)
                .expect("guard leaves come from the propositions");
            Ok(v >> i & 1 == 0)
        };
        guard.eval_with(&mut leaf).expect("guards are quantifier-free")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph monitor {\n  rankdir=LR;\n  start [shape=point];\n");
        for s in &self.states {
            let shape = if s.verdict.is_final() { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  s{} [shape={shape}, label=\"{}\"];", s.id, s.verdict.symbol());
        }
        let _ = writeln!(out, "  start -> s{};", self.initial);
        for t in &self.transitions {
            let label = match &t.guard {
                Guard::Event { when } => when.to_string(),
                Guard::End => "END".to_string(),
            };
            let _ = writeln!(out, "  s{} -> s{} [label=\"{}\"];", t.from, t.to, label.replace('"', "\\\""));
        }
        out.push_str("}\n");
        out
    }
}

/// An implicant: the bits in `care` must equal those in `bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Cube {
    care: u32,
    bits: u32,
}

impl Cube {
    fn covers(self, m: u32) -> bool {
        m & self.care == self.bits
    }
}

/// Prime implicants of the function true exactly on `minterms`, reduced to
/// a smallest cover.
fn minimal_cover(k: usize, minterms: &[u32]) -> Vec<Cube> {
    let full = if k == 0 { 0 } else { u32::MAX >> (32 - k) };
    let mut level: Vec<Cube> = minterms.iter().map(|&m| Cube { care: full, bits: m }).collect();
    let mut primes: Vec<Cube> = Vec::new();
    while !level.is_empty() {
        let mut merged = vec![false; level.len()];
        let mut next: Vec<Cube> = Vec::new();
        for i in 0..level.len() {
            for j in i + 1..level.len() {
                let (a, b) = (level[i], level[j]);
                let diff = a.bits ^ b.bits;
                if a.care == b.care && diff.count_ones() == 1 {
                    merged[i] = true;
                    merged[j] = true;
                    let c = Cube {
                        care: a.care & !diff,
                        bits: a.bits & !diff,
                    };
                    if !next.contains(&c) {
                        next.push(c);
                    }
                }
            }
        }
        primes.extend(level.iter().zip(&merged).filter(|(_, m)| !**m).map(|(c, _)| *c));
        level = next;
    }
    // fewer literals first, so the search below prefers them
    primes.sort_by_key(|c| (c.care.count_ones(), c.care, c.bits));
    primes.dedup();

    let mut chosen: Vec<Cube> = Vec::new();
    let mut left: Vec<u32> = minterms.to_vec();
    // essential primes
    for &m in minterms {
        let covering: Vec<Cube> = primes.iter().copied().filter(|p| p.covers(m)).collect();
        if covering.len() == 1 && !chosen.contains(&covering[0]) {
            chosen.push(covering[0]);
        }
    }
    left.retain(|&m| !chosen.iter().any(|c| c.covers(m)));
    let rest: Vec<Cube> = primes.iter().copied().filter(|p| !chosen.contains(p)).collect();
    if !left.is_empty() {
        chosen.extend(smallest_cover(&rest, &left));
    }
    chosen.sort_by_key(|c| primes.iter().position(|p| p == c));
    chosen
}

fn smallest_cover(cands: &[Cube], left: &[u32]) -> Vec<Cube> {
    const EXACT_LIMIT: usize = 16;
    let cost = |set: &[Cube]| set.iter().map(|c| c.care.count_ones()).sum::<u32>();
    if cands.len() <= EXACT_LIMIT {
        let mut best: Option<Vec<Cube>> = None;
        for mask in 1u32..1 << cands.len() {
            let set: Vec<Cube> = (0..cands.len()).filter(|i| mask >> i & 1 == 1).map(|i| cands[i]).collect();
            if !left.iter().all(|&m| set.iter().any(|c| c.covers(m))) {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => (set.len(), cost(&set)) < (b.len(), cost(b)),
            };
            if better {
                best = Some(set);
            }
        }
        return best.expect("the primes cover every minterm");
    }
    let mut left = left.to_vec();
    let mut out = Vec::new();
    while !left.is_empty() {
        let best = *cands
            .iter()
            .max_by_key(|c| (left.iter().filter(|&&m| c.covers(m)).count(), std::cmp::Reverse(c.care.count_ones())))
            .expect("non-empty candidates");
        left.retain(|&m| !best.covers(m));
        out.push(best);
    }
    out
}

fn guard_expr(props: &[BoolExpr], cover: &[Cube]) -> BoolExpr {
    let term = |c: &Cube| {
        let lits = (0..props.len()).filter(|i| c.care >> i & 1 == 1).map(|i| {
            if c.bits >> i & 1 == 1 {
                props[i].clone()
            } else {
                normalize_bool(&BoolExpr::not(props[i].clone()))
            }
        });
        BoolExpr::conjunction(lits).unwrap_or(BoolExpr::Const(true))
    };
    BoolExpr::disjunction(cover.iter().map(term)).unwrap_or(BoolExpr::Const(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(a: &MonitorAutomaton) -> Vec<(usize, usize, String)> {
        a.transitions
            .iter()
            .map(|t| {
                let g = match &t.guard {
                    Guard::Event { when } => when.to_string(),
                    Guard::End => "END".into(),
                };
                (t.from, t.to, g)
            })
            .collect()
    }

    #[test]
    fn historically_of_a_state_predicate() {
        let f: F = "H (x != 0 & y != 0 & z != 0)".parse().unwrap();
        let a = compile_monitor(&f).unwrap();
        let verdicts: Vec<_> = a.states.iter().map(|s| s.verdict).collect();
        assert_eq!(verdicts, [Verdict::PresumablyTrue, Verdict::False, Verdict::True]);
        let e = edges(&a);
        assert!(e.contains(&(0, 0, "x != 0 & y != 0 & z != 0".into())));
        assert!(e.contains(&(0, 1, "x = 0 | y = 0 | z = 0".into())));
        assert!(e.contains(&(0, 2, "END".into())));
        assert!(a.is_deterministic());
    }

    #[test]
    fn grasp_implies_near() {
        let a = compile_monitor(&"H (grasp => near)".parse().unwrap()).unwrap();
        assert_eq!(a.states.len(), 3);
        let e = edges(&a);
        assert!(e.contains(&(0, 0, "!grasp | near".into())));
        assert!(e.contains(&(0, 1, "grasp & !near".into())));
        assert!(a.to_dot().contains("s0 -> s1 [label=\"grasp & !near\"]"));
    }

    #[test]
    fn single_atom() {
        let a = compile_monitor(&"p".parse().unwrap()).unwrap();
        let s = a.successor(a.initial, &[true]);
        assert_eq!(a.verdict(s), Verdict::PresumablyTrue);
        let s = a.successor(a.initial, &[false]);
        assert_eq!(a.verdict(s), Verdict::PresumablyFalse);
        assert!(a.is_deterministic());
    }

    #[test]
    fn expansion_is_bounded() {
        let f: F = "O[0,5000] p".parse().unwrap();
        let err = compile_monitor(&f).unwrap_err();
        assert!(matches!(err, MonitorError::TooManyAtoms { .. }));
        let wide: F = (0..13).map(|i| format!("p{i}")).collect::<Vec<_>>().join(" & ").parse().unwrap();
        assert!(matches!(compile_monitor(&wide), Err(MonitorError::TooManyAtoms { atoms: 13, .. })));
    }

    #[test]
    fn covers_are_minimal() {
        // x'y' + xy' + xy  ->  x + y'
        let c = minimal_cover(2, &[0b00, 0b01, 0b11]);
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| c.care.count_ones() == 1));
        assert_eq!(minimal_cover(3, &(0..8).collect::<Vec<_>>()), [Cube { care: 0, bits: 0 }]);
    }
}
