//! Requirement, trace and formula generators.

use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reqforge_core::monitor::Assignment;
use reqforge_core::semantics::{ModeModel, TemporalFormula as F, DEFAULT_MODE_VARIABLE};
use reqforge_core::{BoolExpr, Requirement, Value};

/// Boolean trace variables.
pub const VARS: [&str; 5] = ["p", "q", "c", "u", "w"];
pub const MODES: [&str; 2] = ["M", "N"];

pub fn mode_model() -> ModeModel {
    ModeModel::default().with_modes(MODES)
}

fn leaf_text(rich: bool) -> BoxedStrategy<String> {
    let vars = prop::sample::select(VARS.to_vec()).prop_map(str::to_string);
    if !rich {
        return vars.boxed();
    }
    prop_oneof![
        4 => vars,
        1 => Just("true".to_string()),
        1 => (0u32..100).prop_map(|n| format!("x > {n}")),
        1 => Just("y <= x + 1".to_string()),
        1 => Just("speed * 2 != limit".to_string()),
        1 => Just("closer(SV, TGT)".to_string()),
        1 => Just("position(SV) = position(TGT)".to_string()),
        1 => Just("mode = idle".to_string()),
    ]
    .boxed()
}

/// Expression text; every compound is bracketed, so precedence never decides.
pub fn expr_text(rich: bool) -> BoxedStrategy<String> {
    leaf_text(rich)
        .prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| format!("!({a})")),
                (inner.clone(), prop::sample::select(vec!["&", "|", "=>", "<=>"]), inner.clone())
                    .prop_map(|(a, op, b)| format!("({a} {op} {b})")),
                (inner.clone(), inner.clone(), inner).prop_map(|(a, b, c)| format!("(if {a} then {b} else {c})")),
            ]
        })
        .boxed()
}

fn scope_text(rich: bool) -> BoxedStrategy<String> {
    let modes = ["in M", "not in M", "only in M", "before M", "after M", "only before M", "only after M"];
    prop_oneof![
        3 => Just(String::new()),
        4 => prop::sample::select(modes.to_vec()).prop_map(str::to_string),
        1 => expr_text(rich).prop_map(|e| format!("while {e}")),
    ]
    .boxed()
}

fn condition_text(rich: bool) -> BoxedStrategy<String> {
    prop_oneof![
        3 => Just(String::new()),
        3 => (prop::sample::select(vec!["when", "if", "upon"]), expr_text(rich)).prop_map(|(k, e)| format!("{k} {e}")),
        1 => expr_text(rich).prop_map(|e| format!("whenever {e}")),
        1 => (expr_text(rich), expr_text(rich)).prop_map(|(a, b)| format!("when {a} if {b}")),
    ]
    .boxed()
}

fn timing_text(rich: bool) -> BoxedStrategy<String> {
    let fixed = ["", "always", "never", "eventually", "immediately", "at the next timepoint"];
    let unit = if rich {
        prop::sample::select(vec!["", " ticks", " tick", " seconds", " minutes"]).boxed()
    } else {
        prop::sample::select(vec!["", " ticks"]).boxed()
    };
    let n = if rich { 1u64..20 } else { 1u64..4 };
    prop_oneof![
        6 => prop::sample::select(fixed.to_vec()).prop_map(str::to_string),
        2 => (prop::sample::select(vec!["until", "before"]), expr_text(rich)).prop_map(|(k, e)| format!("{k} ({e})")),
        3 => (prop::sample::select(vec!["after", "for", "within"]), n, unit)
            .prop_map(|(k, n, u)| format!("{k} {n}{u}")),
    ]
    .boxed()
}

/// A well-formed sentence. `rich` adds numeric, function and symbolic
/// predicates and non-tick units; otherwise every predicate is one of `VARS`
/// and durations are a few ticks.
pub fn sentence(rich: bool) -> impl Strategy<Value = String> {
    (
        scope_text(rich),
        condition_text(rich),
        prop::sample::select(vec!["C", "Rover", "SV", "Map_Validator"]),
        timing_text(rich),
        expr_text(rich),
    )
        .prop_map(|(s, c, comp, t, r)| {
            [s, c, comp.to_string(), "shall".into(), t, r]
                .into_iter()
                .filter(|p| !p.is_empty())
                .collect::<Vec<_>>()
                .join(" ")
        })
}

pub fn requirement(rich: bool) -> impl Strategy<Value = Requirement> {
    sentence(rich).prop_map(|s| Requirement::parse("R", &s).unwrap_or_else(|e| panic!("{s}: {}", e.render(&s))))
}

pub fn assignment(values: [bool; 6]) -> Assignment {
    let mut a: Assignment = VARS.iter().zip(values).map(|(v, b)| (v.to_string(), Value::Bool(b))).collect();
    let mode = if values[5] { MODES[0] } else { MODES[1] };
    a.insert(DEFAULT_MODE_VARIABLE.to_string(), Value::Sym(mode.to_string()));
    a
}

/// Non-empty traces over `VARS` and the mode variable.
pub fn trace(max_len: usize) -> impl Strategy<Value = Vec<Assignment>> {
    prop::collection::vec(any::<[bool; 6]>().prop_map(assignment), 1..=max_len)
}

pub fn random_trace(rng: &mut impl Rng, max_len: usize) -> Vec<Assignment> {
    let len = rng.random_range(1..=max_len);
    (0..len).map(|_| assignment(rng.random())).collect()
}

/// Past formulas over `atoms` with every past operator, bounded ones included.
pub fn past_formula(atoms: &'static [&'static str], depth: u32) -> impl Strategy<Value = F> {
    let leaf = prop::sample::select(atoms.to_vec()).prop_map(|a| F::atom(BoolExpr::atom(a)));
    leaf.prop_recursive(depth, 24, 2, |inner| {
        let b = |f: F| Box::new(f);
        prop_oneof![
            inner.clone().prop_map(move |a| F::Not(b(a))),
            inner.clone().prop_map(move |a| F::Yesterday(b(a))),
            inner.clone().prop_map(move |a| F::Once(b(a))),
            inner.clone().prop_map(move |a| F::Historically(b(a))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| F::And(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| F::Or(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| F::Implies(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| F::Since(b(x), b(y))),
            (0u64..3, 0u64..3, inner.clone()).prop_map(|(lo, w, a)| F::historically_within(lo, lo + w, a)),
            (0u64..3, 0u64..3, inner).prop_map(|(lo, w, a)| F::once_within(lo, lo + w, a)),
        ]
    })
}

fn random_expr(rng: &mut impl Rng, atoms: &[&str], depth: u32) -> String {
    if depth == 0 || rng.random_bool(0.4) {
        return atoms.choose(rng).expect("atoms").to_string();
    }
    match rng.random_range(0..6) {
        0 => format!("!({})", random_expr(rng, atoms, depth - 1)),
        1 => format!("({} & {})", random_expr(rng, atoms, depth - 1), random_expr(rng, atoms, depth - 1)),
        2 => format!("({} | {})", random_expr(rng, atoms, depth - 1), random_expr(rng, atoms, depth - 1)),
        3 => format!("({} => {})", random_expr(rng, atoms, depth - 1), random_expr(rng, atoms, depth - 1)),
        4 => format!("({} <=> {})", random_expr(rng, atoms, depth - 1), random_expr(rng, atoms, depth - 1)),
        _ => format!(
            "(if {} then {} else {})",
            random_expr(rng, atoms, depth - 1),
            random_expr(rng, atoms, depth - 1),
            random_expr(rng, atoms, depth - 1)
        ),
    }
}

/// `n` distinct requirements whose past and future translations both exist,
/// reading at most three distinct predicates.
pub fn supported_suite(n: usize, seed: u64) -> Vec<Requirement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < n {
        // predicates the requirement may mention; the mode test counts as one
        let mut budget: Vec<&str> = Vec::new();
        let scope = match rng.random_range(0..3) {
            0 => String::new(),
            1 => {
                budget.push(DEFAULT_MODE_VARIABLE);
                "in M".to_string()
            }
            _ => {
                budget.push("w");
                "while w".to_string()
            }
        };
        let condition = if rng.random_bool(0.6) {
            budget.push("c");
            let names: Vec<&str> = budget.iter().copied().filter(|a| *a != DEFAULT_MODE_VARIABLE).collect();
            format!("{} {}", ["when", "if", "upon"].choose(&mut rng).unwrap(), random_expr(&mut rng, &names, 1))
        } else {
            String::new()
        };
        let mut names: Vec<&str> = budget.iter().copied().filter(|a| *a != DEFAULT_MODE_VARIABLE).collect();
        names.push("p");
        if budget.len() < 2 {
            names.push("q");
        }
        let timing = *["", "always", "never", "eventually", "immediately", "at the next timepoint"]
            .choose(&mut rng)
            .unwrap();
        let response = random_expr(&mut rng, &names, 2);
        let text = [scope, condition, "C shall".into(), timing.to_string(), response]
            .into_iter()
            .filter(|p| !p.is_empty())
            .collect::<Vec<_>>()
            .join(" ");
        if seen.insert(text.clone()) {
            out.push(Requirement::parse(format!("S{}", out.len()), &text).unwrap_or_else(|e| panic!("{text}: {e}")));
        }
    }
    out
}

/// `n` requirements with `never` timing over every scope and condition.
pub fn never_suite(n: usize, seed: u64) -> Vec<Requirement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scopes = [
        "", "in M", "not in M", "only in M", "before M", "after M", "only before M", "only after M", "while w",
    ];
    (0..n)
        .map(|i| {
            let scope = scopes.choose(&mut rng).unwrap();
            let condition = match rng.random_range(0..3) {
                0 => String::new(),
                1 => format!("when {}", random_expr(&mut rng, &["c", "u"], 1)),
                _ => format!("whenever {}", random_expr(&mut rng, &["c", "u"], 1)),
            };
            let response = random_expr(&mut rng, &["p", "q", "c"], 2);
            let text = [scope.to_string(), condition, "C shall never".into(), response]
                .into_iter()
                .filter(|p| !p.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            Requirement::parse(format!("N{i}"), &text).unwrap_or_else(|e| panic!("{text}: {e}"))
        })
        .collect()
}

/// Proptest settings without failure files, which need a `lib.rs` beside the test.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
