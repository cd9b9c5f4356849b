//! Acceptance criteria, one PASS or FAIL line each. Exits 1 if any fail.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reqforge_core::monitor::{compile_monitor, holds_on, Assignment, Guard, PropTable, Trace, Verdict};
use reqforge_core::semantics::{
    rewrite_never, template_key, to_future_ltl, to_future_ltl_with, to_past_ltl, ConditionOption, ModeModel,
    ScopeOption, TemporalFormula as F, TickConfig, TimingOption,
};
use reqforge_core::store::{metrics, RequirementSet};
use reqforge_core::{parse_requirement, pretty_print, BoolExpr, Requirement, Value};

use support::exhaustive::{self, atoms, past_level, past_level_nth, past_level_size};
use support::fixtures::{fixture_path, fixture_text, key_strings, load_set, CORPUS_KEYS, EXPECTED_METRICS};
use support::{gen, reqoracle};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn corpus_fidelity() -> Outcome {
    let start = Instant::now();
    let set = load_set("corpus.req");
    ensure(set.len() == CORPUS_KEYS.len(), || format!("{} requirements", set.len()))?;
    for (id, key) in CORPUS_KEYS {
        let got = key_strings(&set, id);
        ensure(got == key.map(String::from), || format!("{id}: key {got:?}"))?;
        let r = set.get(id).unwrap();
        let printed = pretty_print(r);
        let (back, _) = parse_requirement(&printed).map_err(|e| format!("{id}: reparse: {e}"))?;
        ensure(back.same_fields(r), || format!("{id}: round trip changed fields"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{} requirements in {:.2?}", set.len(), start.elapsed()))
}

fn assign(pairs: &[(&str, Value)]) -> Assignment {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Checks the three-state shape of an invariant monitor `H φ`, with every
/// guard compared against `phi` over concrete inputs.
fn invariant_automaton(text: &str, inputs: &[Assignment], phi: impl Fn(&Assignment) -> bool) -> Result<(), String> {
    let f: F = text.parse().map_err(|e| format!("{text}: {e}"))?;
    let a = compile_monitor(&f).map_err(|e| format!("{text}: {e}"))?;
    ensure(a.states.len() == 3, || format!("{text}: {} states", a.states.len()))?;
    let find = |v: Verdict| a.states.iter().find(|s| s.verdict == v).map(|s| s.id);
    let (live, bad, good) = match (find(Verdict::PresumablyTrue), find(Verdict::False), find(Verdict::True)) {
        (Some(l), Some(b), Some(g)) => (l, b, g),
        _ => return Err(format!("{text}: verdicts {:?}", a.states)),
    };
    ensure(a.initial == live, || format!("{text}: starts in {}", a.initial))?;
    ensure(a.is_deterministic(), || format!("{text}: not deterministic"))?;
    for t in &a.transitions {
        if t.from != live {
            ensure(t.to == t.from, || format!("{text}: final state {} leaves", t.from))?;
        }
    }
    ensure(a.end_successor(live) == good, || format!("{text}: END from the live state"))?;
    let table = PropTable::new(a.propositions.iter().cloned());
    for input in inputs {
        let vals = table.valuate(input).map_err(|e| e.to_string())?;
        let v = vals.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as usize) << i);
        let enabled: Vec<usize> = a
            .transitions
            .iter()
            .filter(|t| t.from == live)
            .filter(|t| matches!(&t.guard, Guard::Event { when } if a.guard_holds(when, v)))
            .map(|t| t.to)
            .collect();
        let want = if phi(input) { live } else { bad };
        ensure(enabled == [want], || format!("{text}: on {input:?} goes to {enabled:?}"))?;
    }
    Ok(())
}

fn invariant_monitors() -> Outcome {
    let num = |x: f64| Value::Num(x);
    let mut xyz = Vec::new();
    for bits in 0..8u8 {
        let v = |k: u8| num(if bits >> k & 1 == 1 { 3.0 } else { 0.0 });
        xyz.push(assign(&[("x", v(0)), ("y", v(1)), ("z", v(2))]));
    }
    let nonzero = |a: &Assignment, k: &str| !matches!(a[k], Value::Num(x) if x == 0.0);
    invariant_automaton("H (x != 0 & y != 0 & z != 0)", &xyz, |a| {
        nonzero(a, "x") && nonzero(a, "y") && nonzero(a, "z")
    })?;

    let mut gn = Vec::new();
    for bits in 0..4u8 {
        gn.push(assign(&[("grasp", Value::Bool(bits & 1 == 1)), ("near", Value::Bool(bits & 2 == 2))]));
    }
    let truth = |a: &Assignment, k: &str| a[k] == Value::Bool(true);
    invariant_automaton("H (grasp => near)", &gn, |a| !truth(a, "grasp") || truth(a, "near"))?;

    let set = load_set("grasping.req");
    let f = to_past_ltl(set.get("R1.8").ok_or("R1.8 missing")?, &ModeModel::default()).map_err(|e| e.to_string())?;
    let trace = Trace::from_ndjson(&fixture_text("r1_8_violation.ndjson")).map_err(|e| e.to_string())?;
    let run = compile_monitor(&f).and_then(|a| a.run(&trace)).map_err(|e| e.to_string())?;
    ensure(run.verdict == Verdict::False, || format!("violation run ends {:?}", run.verdict))?;
    Ok(format!("two automata, violation trace ends {:?}", run.verdict))
}

fn exhaustive_equivalence() -> Outcome {
    let start = Instant::now();
    let base = atoms(&["p", "q"]);
    let l1 = past_level(&base, &base);
    let l2 = past_level(&base, &l1);
    let n3 = past_level_size(base.len(), l2.len());
    let table = PropTable::new(["p", "q"].map(BoolExpr::atom));
    let space = exhaustive::trace_space(2, 5);
    for i in 0..n3 {
        let f = past_level_nth(&base, &l2, i);
        let bad = exhaustive::register_mismatches_on(&f, &table, &space);
        ensure(bad.is_empty(), || format!("registers: {f}: {:?}", bad[0]))?;
    }
    let mut sample: Vec<F> = l2.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    sample.extend((0..2000).map(|_| past_level_nth(&base, &l2, rand::Rng::random_range(&mut rng, 0..n3))));
    for f in &sample {
        let bad = exhaustive::automaton_mismatches(f, &table, 5).map_err(|e| format!("{f}: {e}"))?;
        ensure(bad.is_empty(), || format!("automaton: {f}: {:?}", bad[0]))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{n3} register monitors, {} automata, traces up to 5, {:.1?}",
        sample.len(),
        start.elapsed()
    ))
}

fn past_future_agreement() -> Outcome {
    let mm = gen::mode_model();
    let mut total = 0;
    let suite = gen::supported_suite(500, 7);
    for r in &suite {
        let (checked, bad) = exhaustive::past_future_disagreements(r, &mm, 6)?;
        ensure(bad.is_empty(), || format!("{}: {} disagreements, first {:?}", r.text(), bad.len(), bad[0]))?;
        total += checked;
    }
    Ok(format!("{} requirements, {total} traces up to 6", suite.len()))
}

fn never_rewrite() -> Outcome {
    let mm = gen::mode_model();
    let ticks = TickConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let suite = gen::never_suite(200, 5);
    for r in &suite {
        let rw = rewrite_never(r).map_err(|e| e.to_string())?;
        ensure(template_key(&rw).timing == TimingOption::Always, || format!("{}: rewritten timing", r.text()))?;
        let f = to_future_ltl(r, &mm).map_err(|e| e.to_string())?;
        let g = to_future_ltl(&rw, &mm).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let t = gen::random_trace(&mut rng, 8);
            let tr = Trace::from_steps(t.clone(), true);
            let a = holds_on(&f, &tr).map_err(|e| e.to_string())?;
            let b = holds_on(&g, &tr).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{} vs {} on {t:?}", r.text(), rw.text()))?;
            let want = reqoracle::holds(r, &mm, &ticks, &t);
            ensure(a == want, || format!("{}: formula {a}, direct reading {want} on {t:?}", r.text()))?;
        }
    }
    Ok(format!("{} requirements, 50 traces each", suite.len()))
}

fn fixture_metrics() -> Outcome {
    let nonzero = |m: Vec<(&'static str, usize)>| -> BTreeMap<_, _> { m.into_iter().filter(|(_, n)| *n > 0).collect() };
    let want = |xs: &[(&'static str, usize)]| -> BTreeMap<_, _> { xs.iter().copied().collect() };
    for exp in &EXPECTED_METRICS {
        let m = metrics(&load_set(exp.file));
        let file = exp.file;
        ensure(m.total == exp.total, || format!("{file}: total {}", m.total))?;
        ensure(m.child_count == exp.children, || format!("{file}: children {}", m.child_count))?;
        let scope = nonzero(m.scope.iter().map(|(o, n)| (ScopeOption::as_str(*o), *n)).collect());
        ensure(scope == want(exp.scope), || format!("{file}: scope {scope:?}"))?;
        let cond = nonzero(m.condition.iter().map(|(o, n)| (ConditionOption::as_str(*o), *n)).collect());
        ensure(cond == want(exp.condition), || format!("{file}: condition {cond:?}"))?;
        let timing = nonzero(m.timing.iter().map(|(o, n)| (TimingOption::as_str(*o), *n)).collect());
        ensure(timing == want(exp.timing), || format!("{file}: timing {timing:?}"))?;
    }
    Ok(format!("{} fixtures", EXPECTED_METRICS.len()))
}

fn duration_bound(r: &Requirement, ms: u64) -> Result<u64, String> {
    let ticks = TickConfig::new(ms).map_err(|e| e.to_string())?;
    let f = to_future_ltl_with(r, &gen::mode_model(), &ticks).map_err(|e| e.to_string())?;
    let mut stack = vec![&f];
    while let Some(g) = stack.pop() {
        if let F::BoundedFinally(b, _) | F::BoundedGlobally(b, _) = g {
            return Ok(b.hi);
        }
        stack.extend(g.children());
    }
    Err(format!("no bounded operator in {f}"))
}

fn duration_ticks() -> Outcome {
    let r = Requirement::parse("R", "when off System shall after 15 minutes !resumeVentilation").map_err(|e| e.to_string())?;
    let at100 = duration_bound(&r, 100)?;
    ensure(at100 == 9000, || format!("bound {at100} at 100 ms"))?;
    for ms in [1, 10, 50, 250, 1000, 60_000] {
        let b = duration_bound(&r, ms)?;
        ensure(b == 900_000 / ms, || format!("bound {b} at {ms} ms"))?;
    }
    Ok(format!("{at100} ticks at 100 ms"))
}

async fn service_metrics(set: RequirementSet) -> Result<Vec<u8>, String> {
    use http_body_util::BodyExt;
    use tower::ServiceExt;
    let project = set.project.clone();
    let state = reqforge_service::AppState::new(Default::default());
    state.insert_set(set);
    let req = axum::http::Request::get(format!("/api/sets/{project}/metrics"))
        .body(axum::body::Body::empty())
        .map_err(|e| e.to_string())?;
    let resp = reqforge_service::router(state).oneshot(req).await.map_err(|e| e.to_string())?;
    ensure(resp.status().is_success(), || format!("status {}", resp.status()))?;
    let body = resp.into_body().collect().await.map_err(|e| e.to_string())?;
    Ok(body.to_bytes().to_vec())
}

fn cli_service_determinism() -> Outcome {
    let rt = tokio::runtime::Builder::new_current_thread()
        .build()
        .map_err(|e| e.to_string())?;
    for exp in &EXPECTED_METRICS {
        let path = fixture_path(exp.file);
        let out = Command::new(env!("CARGO_BIN_EXE_reqforge"))
            .args(["metrics", "--format", "json"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("{}: exit {:?}", exp.file, out.status.code()))?;
        let mut set = load_set(exp.file);
        if set.project.is_empty() {
            set.project = exp.file.trim_end_matches(".req").to_string();
        }
        let served = rt.block_on(service_metrics(set)).map_err(|e| format!("{}: {e}", exp.file))?;
        ensure(out.stdout == served, || format!("{}: CLI and service bytes differ", exp.file))?;
    }
    Ok(format!("{} fixtures byte-identical", EXPECTED_METRICS.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("corpus_fidelity", corpus_fidelity),
        ("invariant_monitors", invariant_monitors),
        ("exhaustive_equivalence", exhaustive_equivalence),
        ("past_future_agreement", past_future_agreement),
        ("never_rewrite", never_rewrite),
        ("fixture_metrics", fixture_metrics),
        ("duration_ticks", duration_ticks),
        ("cli_service_determinism", cli_service_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name} ({detail})"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
