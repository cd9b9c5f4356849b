//! Exhaustive boolean traces packed 128 to a word, and the formula families
//! enumerated over them.

use reqforge_core::monitor::{compile_monitor, evaluate_complete, judge_prefixes, MonitorError, Program, PropTable, Verdict};
use reqforge_core::semantics::{to_future_ltl, to_past_ltl, ModeModel, TemporalFormula as F};
use reqforge_core::{BoolExpr, Lane, Requirement};

pub type Word = u128;

/// One batch of up to 128 traces of equal length: `trace[pos][prop]`, and
/// the mask of lanes that carry a real trace.
pub struct Batch {
    pub trace: Vec<Vec<Word>>,
    pub valid: Word,
    /// Index of the trace in lane 0.
    pub first: u64,
}

/// Every trace of `len` positions over `atoms` propositions. Trace number
/// `k` gives proposition `a` at position `i` the bit `i * atoms + a` of `k`.
pub fn batches(atoms: usize, len: usize) -> impl Iterator<Item = Batch> {
    let total: u64 = 1 << (atoms * len);
    let width = Word::WIDTH as u64;
    (0..total.div_ceil(width)).map(move |b| {
        let first = b * width;
        let count = (total - first).min(width);
        let valid = if count == width { Word::MAX } else { (1 << count) - 1 };
        let trace = (0..len)
            .map(|i| {
                (0..atoms)
                    .map(|a| {
                        let mut w: Word = 0;
                        for lane in 0..count {
                            w.set(lane as usize, (first + lane) >> (i * atoms + a) & 1 == 1);
                        }
                        w
                    })
                    .collect()
            })
            .collect();
        Batch { trace, valid, first }
    })
}

/// Lanes, as trace numbers, that differ between `x` and `y`.
pub fn differing(batch: &Batch, x: Word, y: Word) -> Vec<u64> {
    let d = (x ^ y) & batch.valid;
    (0..Word::WIDTH).filter(|&l| d.get(l)).map(|l| batch.first + l as u64).collect()
}

/// Traces of length 1 to `max_len` on which the past translation read at
/// the last position disagrees with the future translation read at the
/// first. Returns `(traces checked, disagreements as (length, trace number))`.
pub fn past_future_disagreements(
    req: &Requirement,
    mm: &ModeModel,
    max_len: usize,
) -> Result<(u64, Vec<(usize, u64)>), String> {
    let future = to_future_ltl(req, mm).map_err(|e| e.to_string())?;
    let past = to_past_ltl(req, mm).map_err(|e| e.to_string())?;
    let leaves: Vec<BoolExpr> = future
        .propositions()
        .into_iter()
        .chain(past.propositions())
        .cloned()
        .collect();
    let table = PropTable::new(leaves);
    let program = Program::compile_with(&past, table.clone()).map_err(|e| e.to_string())?;
    let mut checked = 0;
    let mut bad = Vec::new();
    for len in 1..=max_len {
        for batch in batches(table.len(), len) {
            let f = evaluate_complete::<Word>(&future, &table, &batch.trace).map_err(|e| e.to_string())?[0];
            let mut regs = program.initial::<Word>();
            let mut last = program.current(&regs);
            for props in &batch.trace {
                last = program.step(&mut regs, props);
            }
            checked += u64::from(batch.valid.count_ones());
            bad.extend(differing(&batch, f, last.value).into_iter().map(|k| (len, k)));
        }
    }
    Ok((checked, bad))
}

/// Positions (length, trace number, prefix) where the register monitor's
/// judgement differs from the one computed by definition.
pub fn register_mismatches(f: &F, table: &PropTable, max_len: usize) -> Vec<(usize, u64, usize)> {
    register_mismatches_on(f, table, &trace_space(table.len(), max_len))
}

/// Every batch of every length from 0 to `max_len`, built once for reuse.
pub fn trace_space(atoms: usize, max_len: usize) -> Vec<(usize, Vec<Batch>)> {
    (0..=max_len).map(|len| (len, batches(atoms, len).collect())).collect()
}

pub fn register_mismatches_on(f: &F, table: &PropTable, space: &[(usize, Vec<Batch>)]) -> Vec<(usize, u64, usize)> {
    let program = Program::compile_with(f, table.clone()).expect("past formula");
    let mut out = Vec::new();
    for (len, all) in space {
        let len = *len;
        for batch in all {
            let expected = judge_prefixes::<Word>(f, table, &batch.trace).expect("past formula");
            let mut regs = program.initial::<Word>();
            let mut got = vec![program.current(&regs)];
            got.extend(batch.trace.iter().map(|props| program.step(&mut regs, props)));
            for (i, (e, g)) in expected.iter().zip(&got).enumerate() {
                let lanes = differing(&batch, e.value, g.value)
                    .into_iter()
                    .chain(differing(&batch, e.locked_true, g.locked_true))
                    .chain(differing(&batch, e.locked_false, g.locked_false));
                out.extend(lanes.map(|k| (len, k, i)));
            }
        }
    }
    out
}

/// Like `register_mismatches`, for the explicit automaton, comparing
/// verdicts after every event and after END.
pub fn automaton_mismatches(f: &F, table: &PropTable, max_len: usize) -> Result<Vec<(usize, u64, usize)>, MonitorError> {
    let a = compile_monitor(f)?;
    let idx: Vec<usize> = a
        .propositions
        .iter()
        .map(|p| table.index(p).expect("automaton reads the table's propositions"))
        .collect();
    let mut out = Vec::new();
    for len in 0..=max_len {
        for batch in batches(table.len(), len) {
            let expected = judge_prefixes::<Word>(f, table, &batch.trace)?;
            for lane in (0..Word::WIDTH).filter(|&l| batch.valid.get(l)) {
                let k = batch.first + lane as u64;
                let mut s = a.initial;
                let mut check = |s: usize, i: usize, v: Verdict| {
                    if a.verdict(s) != v {
                        out.push((len, k, i));
                    }
                };
                check(s, 0, Verdict::of_lane(expected[0], lane));
                for (i, props) in batch.trace.iter().enumerate() {
                    let vals: Vec<bool> = idx.iter().map(|&j| props[j].get(lane)).collect();
                    s = a.successor(s, &vals);
                    check(s, i + 1, Verdict::of_lane(expected[i + 1], lane));
                }
                check(a.end_successor(s), len + 1, Verdict::of_lane(expected[len], lane).resolve());
            }
        }
    }
    Ok(out)
}

/// Unpacks trace number `k` into per-position valuations.
pub fn valuation(atoms: usize, len: usize, k: u64) -> Vec<Vec<bool>> {
    (0..len)
        .map(|i| (0..atoms).map(|a| k >> (i * atoms + a) & 1 == 1).collect())
        .collect()
}

/// Past formulas over `atoms` built from `!`, `&`, `Y`, `O`, `H` and `S`.
/// Level `d` holds every formula of depth at most `d`.
pub fn past_level(atoms: &[F], below: &[F]) -> Vec<F> {
    let mut out: Vec<F> = atoms.to_vec();
    for a in below {
        out.extend((0..4).map(|op| unary(op, a.clone())));
    }
    for a in below {
        for b in below {
            out.extend((0..2).map(|op| binary(op, a.clone(), b.clone())));
        }
    }
    out
}

/// Number of formulas `past_level` builds from `m` formulas and `atoms` atoms.
pub fn past_level_size(atoms: usize, m: usize) -> usize {
    atoms + 4 * m + 2 * m * m
}

/// The `i`-th formula of `past_level(atoms, below)` without building the level.
pub fn past_level_nth(atoms: &[F], below: &[F], i: usize) -> F {
    let m = below.len();
    if i < atoms.len() {
        return atoms[i].clone();
    }
    let i = i - atoms.len();
    if i < 4 * m {
        return unary(i % 4, below[i / 4].clone());
    }
    let i = i - 4 * m;
    let (pair, op) = (i / 2, i % 2);
    binary(op, below[pair / m].clone(), below[pair % m].clone())
}

// Built without the constructors, which would fold `!` and `&` over atoms.
fn unary(op: usize, a: F) -> F {
    let a = Box::new(a);
    match op {
        0 => F::Not(a),
        1 => F::Yesterday(a),
        2 => F::Once(a),
        _ => F::Historically(a),
    }
}

fn binary(op: usize, a: F, b: F) -> F {
    let (a, b) = (Box::new(a), Box::new(b));
    if op == 0 {
        F::And(a, b)
    } else {
        F::Since(a, b)
    }
}

pub fn atoms(names: &[&str]) -> Vec<F> {
    names.iter().map(|n| F::atom(BoolExpr::atom(*n))).collect()
}
