mod support;

use proptest::prelude::*;

use reqforge_core::parser::{parse_condition, parse_expr, parse_scope, parse_timing, Span};
use reqforge_core::semantics::{ConditionOption, ScopeOption, TimingOption};
use reqforge_core::{parse_requirement, pretty_print, ConditionSpec, Requirement, ScopeSpec, SourceText, TimingSpec};

use support::fixtures::{key_strings, load_set, CORPUS_KEYS};
use support::gen;

fn slice(text: &str, s: Span) -> String {
    text.chars().skip(s.start).take(s.end - s.start).collect()
}

fn reparse(r: &Requirement) -> Requirement {
    let printed = pretty_print(r);
    let (back, _) = parse_requirement(&printed).unwrap_or_else(|e| panic!("{}: {e}", printed.text));
    back
}

#[test]
fn corpus_keys_and_round_trip() {
    let set = load_set("corpus.req");
    assert_eq!(set.len(), CORPUS_KEYS.len());
    for (id, key) in CORPUS_KEYS {
        assert_eq!(key_strings(&set, id), key.map(String::from), "{id}");
        let r = set.get(id).unwrap();
        assert!(reparse(r).same_fields(r), "{id}");
    }
}

#[test]
fn omitted_fields_take_defaults() {
    let r = Requirement::parse("R", "Rover shall battery > 0").unwrap();
    assert_eq!(r.scope, ScopeSpec::Null);
    assert_eq!(r.condition, ConditionSpec::Null);
    assert_eq!(r.timing, TimingSpec::Eventually);
    let k = reqforge_core::semantics::template_key(&r);
    assert_eq!((k.scope, k.condition, k.timing), (ScopeOption::Null, ConditionOption::Null, TimingOption::Eventually));
    assert_eq!(pretty_print(&r).text, "Rover shall battery > 0");
}

proptest! {
    #![proptest_config(gen::config(400))]

    #[test]
    fn print_then_parse_is_identity(r in gen::requirement(true)) {
        let back = reparse(&r);
        prop_assert!(back.same_fields(&r), "{} vs {}", pretty_print(&r).text, pretty_print(&back).text);
        // printing is a fixed point after one pass
        prop_assert_eq!(pretty_print(&back).text, pretty_print(&r).text);
    }

    #[test]
    fn spans_cover_their_fields(text in gen::sentence(true)) {
        let (r, spans) = parse_requirement(&SourceText::new(text.as_str())).unwrap();
        let ordered = spans.ordered();
        for w in ordered.windows(2) {
            prop_assert!(w[0].1.end <= w[1].1.start, "{:?} overlaps {:?}", w[0], w[1]);
        }
        prop_assert_eq!(spans.scope.is_some(), r.scope != ScopeSpec::Null);
        prop_assert_eq!(spans.condition.is_some(), r.condition != ConditionSpec::Null);
        if let Some(s) = spans.scope {
            prop_assert_eq!(parse_scope(&slice(&text, s)).unwrap(), r.scope.clone());
        }
        if let Some(s) = spans.condition {
            let c = parse_condition(&slice(&text, s)).unwrap();
            prop_assert_eq!(c.expr(), r.condition.expr());
        }
        prop_assert_eq!(slice(&text, spans.component.unwrap()), r.component.clone());
        prop_assert_eq!(slice(&text, spans.shall.unwrap()), "shall");
        if let Some(s) = spans.timing {
            prop_assert_eq!(parse_timing(&slice(&text, s)).unwrap(), r.timing.clone());
        }
        prop_assert_eq!(parse_expr(&slice(&text, spans.response.unwrap())).unwrap(), r.response.clone());
    }

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,80}") {
        let _ = parse_requirement(&SourceText::new(text.as_str()));
    }

    #[test]
    fn token_soup_never_panics(words in prop::collection::vec(prop::sample::select(vec![
        "in", "when", "if", "shall", "always", "until", "(", ")", "&", "|", "!", "=>", "p", "C",
        "after", "3", "ticks", "not", "only", "before", "then", "else", "at", "the", "next",
        "timepoint", "=", ">", "forall", ",", "x", "within", "whenever", "while",
    ]), 0..16)) {
        let text = words.join(" ");
        match parse_requirement(&SourceText::new(text.as_str())) {
            Ok((r, _)) => prop_assert!(reparse(&r).same_fields(&r)),
            Err(e) => prop_assert!(e.offset() <= text.chars().count()),
        }
    }
}
