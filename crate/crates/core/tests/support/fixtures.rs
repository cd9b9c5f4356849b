use std::path::PathBuf;

use reqforge_core::semantics::template_key;
use reqforge_core::store::{read_requirements, RequirementSet};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    let path = fixture_path(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn load_set(name: &str) -> RequirementSet {
    read_requirements(&fixture_text(name), Some(name)).unwrap_or_else(|diags| {
        let lines: Vec<String> = diags.iter().map(|d| format!("{name}:{d}")).collect();
        panic!("{}", lines.join("\n"))
    })
}

/// Corpus ids with their expected (scope, condition, timing) keys.
pub const CORPUS_KEYS: [(&str, [&str; 3]); 8] = [
    ("ENG1", ["in", "trigger", "until"]),
    ("ENG2", ["null", "trigger", "eventually"]),
    ("VENT1", ["in", "trigger", "next"]),
    ("VENT2", ["null", "trigger", "after"]),
    ("ROV1", ["null", "null", "immediately"]),
    ("ROV2", ["null", "null", "always"]),
    ("GRASP1", ["null", "null", "always"]),
    ("GRASP2", ["null", "null", "eventually"]),
];

pub fn key_strings(set: &RequirementSet, id: &str) -> [String; 3] {
    let k = template_key(set.get(id).unwrap_or_else(|| panic!("missing {id}")));
    [k.scope.to_string(), k.condition.to_string(), k.timing.to_string()]
}

/// Published per-study counts. Maps list only non-zero entries.
pub struct ExpectedMetrics {
    pub file: &'static str,
    pub total: usize,
    pub children: usize,
    pub scope: &'static [(&'static str, usize)],
    pub condition: &'static [(&'static str, usize)],
    pub timing: &'static [(&'static str, usize)],
}

pub const EXPECTED_METRICS: [ExpectedMetrics; 3] = [
    ExpectedMetrics {
        file: "engine.req",
        total: 42,
        children: 28,
        scope: &[("null", 38), ("in", 4)],
        condition: &[("trigger", 42)],
        timing: &[("eventually", 14), ("until", 28)],
    },
    ExpectedMetrics {
        file: "rover.req",
        total: 28,
        children: 25,
        scope: &[("null", 28)],
        condition: &[("null", 27), ("trigger", 1)],
        timing: &[("eventually", 13), ("always", 13), ("after", 1), ("immediately", 1)],
    },
    ExpectedMetrics {
        file: "grasping.req",
        total: 20,
        children: 18,
        scope: &[("null", 20)],
        condition: &[("null", 20)],
        timing: &[("eventually", 17), ("always", 3)],
    },
];
