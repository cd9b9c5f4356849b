//! Published JSON Schemas (draft 2020-12) for every request and response
//! body, served at `/api/schema`. Each named schema lives under `$defs`.

use serde::Serialize;
use serde_json::{json, Value};

use reqforge_core::monitor::Verdict;
use reqforge_core::semantics::{ConditionOption, ScopeOption, TimingOption};

pub const SCHEMA_VERSION: u32 = 1;

fn names<T: Serialize>(all: &[T]) -> Vec<Value> {
    all.iter().map(|v| serde_json::to_value(v).expect("enum serializes")).collect()
}

fn object(required: &[&str], properties: Value) -> Value {
    json!({"type": "object", "required": required, "properties": properties})
}

fn counts(keys: Vec<Value>) -> Value {
    let props: serde_json::Map<String, Value> = keys
        .into_iter()
        .map(|k| (k.as_str().expect("string key").to_string(), json!({"type": "integer", "minimum": 0})))
        .collect();
    json!({"type": "object", "properties": props, "additionalProperties": false})
}

fn r(name: &str) -> Value {
    json!({"$ref": format!("#/$defs/{name}")})
}

fn defs() -> Value {
    let verdict = names(&[
        Verdict::True,
        Verdict::False,
        Verdict::PresumablyTrue,
        Verdict::PresumablyFalse,
    ]);
    let opt_str = json!({"type": ["string", "null"]});
    json!({
        "error": object(&["error", "message"], json!({
            "error": {"type": "string"},
            "message": {"type": "string"},
            "errors": {"type": "array", "items": r("diagnostic")}
        })),
        "diagnostic": object(&["message", "start", "end", "line", "col"], json!({
            "message": {"type": "string"},
            "start": {"type": "integer", "minimum": 0},
            "end": {"type": "integer", "minimum": 0},
            "line": {"type": "integer", "minimum": 1},
            "col": {"type": "integer", "minimum": 1}
        })),
        "health": object(&["status", "version"], json!({
            "status": {"const": "ok"},
            "version": {"type": "string"}
        })),
        "template_key": {
            "type": "object",
            "required": ["scope", "condition", "timing"],
            "additionalProperties": false,
            "properties": {
                "scope": {"enum": names(&ScopeOption::ALL)},
                "condition": {"enum": names(&ConditionOption::ALL)},
                "timing": {"enum": names(&TimingOption::ALL)}
            }
        },
        "span": object(&["start", "end"], json!({
            "start": {"type": "integer", "minimum": 0},
            "end": {"type": "integer", "minimum": 0}
        })),
        "field_spans": {
            "type": "object",
            "properties": {
                "scope": {"anyOf": [r("span"), {"type": "null"}]},
                "condition": {"anyOf": [r("span"), {"type": "null"}]},
                "component": {"anyOf": [r("span"), {"type": "null"}]},
                "shall": {"anyOf": [r("span"), {"type": "null"}]},
                "timing": {"anyOf": [r("span"), {"type": "null"}]},
                "response": {"anyOf": [r("span"), {"type": "null"}]}
            }
        },
        "marker": {
            "type": "object",
            "required": ["at"],
            "properties": {
                "at": {"enum": ["trace-start", "mode-entry", "mode-exit", "trigger", "bound", "stop", "trace-end"]},
                "ticks": {"type": "integer", "minimum": 0}
            }
        },
        "diagram": object(&["segments"], json!({
            "segments": {"type": "array", "items": object(&["label", "kind", "start", "end"], json!({
                "label": {"type": "string"},
                "kind": {"enum": ["scope-active", "condition-trigger", "response-window"]},
                "start": r("marker"),
                "end": r("marker")
            })), "minItems": 1}
        })),
        "requirement": object(&["id", "parent_id", "project", "scope", "condition", "component", "timing", "response"], json!({
            "id": {"type": "string"},
            "parent_id": opt_str,
            "project": {"type": "string"},
            "component": {"type": "string"},
            "rationale": opt_str
        })),
        "parse_request": {
            "type": "object",
            "required": ["text"],
            "additionalProperties": false,
            "properties": {
                "text": {"type": "string"},
                "mode_var": {"type": "string"},
                "tick_ms": {"type": "integer", "minimum": 1}
            }
        },
        "formalization": {
            "type": "object",
            "required": ["requirement", "text", "template_key", "diagram"],
            "properties": {
                "requirement": r("requirement"),
                "text": {"type": "string"},
                "spans": r("field_spans"),
                "template_key": r("template_key"),
                "future_ltl": {"type": "string"},
                "future_ltl_unsupported": {"type": "string"},
                "past_ltl": {"type": "string"},
                "past_ltl_unsupported": {"type": "string"},
                "diagram": r("diagram"),
                "rewritten": object(&["text", "template_key"], json!({
                    "text": {"type": "string"},
                    "template_key": r("template_key")
                }))
            },
            "allOf": [
                {"oneOf": [{"required": ["future_ltl"]}, {"required": ["future_ltl_unsupported"]}]},
                {"oneOf": [{"required": ["past_ltl"]}, {"required": ["past_ltl_unsupported"]}]}
            ]
        },
        "formalize_output": {"type": "array", "items": r("formalization")},
        "requirement_input": {
            "type": "object",
            "required": ["text"],
            "additionalProperties": false,
            "properties": {
                "id": {"type": "string"},
                "parent_id": opt_str,
                "text": {"type": "string"},
                "rationale": opt_str
            }
        },
        "requirement_doc": {
            "type": "object",
            "required": ["id", "project", "text", "template_key"],
            "additionalProperties": false,
            "properties": {
                "id": {"type": "string"},
                "parent_id": {"type": "string"},
                "project": {"type": "string"},
                "text": {"type": "string"},
                "rationale": {"type": "string"},
                "template_key": r("template_key")
            }
        },
        "requirement_list": object(&["requirements"], json!({
            "requirements": {"type": "array", "items": r("requirement_doc")}
        })),
        "set_summary": object(&["project", "requirements"], json!({
            "project": {"type": "string"},
            "requirements": {"type": "integer", "minimum": 0}
        })),
        "set_list": object(&["sets"], json!({"sets": {"type": "array", "items": r("set_summary")}})),
        "set_file": {
            "type": "object",
            "required": ["schema", "project", "requirements"],
            "additionalProperties": false,
            "properties": {
                "schema": {"const": 1},
                "project": {"type": "string"},
                "modes": object(&["mode_variable"], json!({
                    "mode_variable": {"type": "string"},
                    "modes": {"type": "array", "items": {"type": "string"}, "uniqueItems": true}
                })),
                "domains": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "string"}}},
                "requirements": {"type": "array", "items": {
                    "type": "object",
                    "required": ["id", "text"],
                    "additionalProperties": false,
                    "properties": {
                        "id": {"type": "string"},
                        "parent_id": {"type": "string"},
                        "project": {"type": "string"},
                        "text": {"type": "string"},
                        "rationale": {"type": "string"}
                    }
                }}
            }
        },
        "metrics": {
            "type": "object",
            "required": ["total", "child_count", "scope", "condition", "timing"],
            "additionalProperties": false,
            "properties": {
                "total": {"type": "integer", "minimum": 0},
                "child_count": {"type": "integer", "minimum": 0},
                "scope": counts(names(&ScopeOption::ALL)),
                "condition": counts(names(&ConditionOption::ALL)),
                "timing": counts(names(&TimingOption::ALL))
            }
        },
        "save_response": object(&["path", "requirements"], json!({
            "path": {"type": "string"},
            "requirements": {"type": "integer", "minimum": 0}
        })),
        "trace_event": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["tick"],
                    "additionalProperties": false,
                    "properties": {
                        "tick": {"type": "integer", "minimum": 0},
                        "assign": {"type": "object", "additionalProperties": {"type": ["boolean", "number", "string"]}}
                    }
                },
                {
                    "type": "object",
                    "required": ["end"],
                    "additionalProperties": false,
                    "properties": {"end": {"const": true}}
                }
            ]
        },
        "verdict": {"enum": verdict},
        "simulate_request": {
            "type": "object",
            "additionalProperties": false,
            "properties": {
                "project": {"type": "string"},
                "requirement_id": {"type": "string"},
                "formula": {"type": "string"},
                "events": {"type": "array", "items": r("trace_event")}
            },
            "oneOf": [{"required": ["requirement_id", "project"]}, {"required": ["formula"]}]
        },
        "step_request": {
            "type": "object",
            "required": ["event"],
            "additionalProperties": false,
            "properties": {"event": r("trace_event")}
        },
        "session": object(&["session", "formula", "verdicts", "state"], json!({
            "session": {"type": "string", "pattern": "^[0-9a-f]{32}$"},
            "formula": {"type": "string"},
            "verdicts": {"type": "array", "items": r("verdict")},
            "state": object(&["verdict", "final", "ended", "events"], json!({
                "verdict": r("verdict"),
                "final": {"type": "boolean"},
                "ended": {"type": "boolean"},
                "events": {"type": "integer", "minimum": 0}
            }))
        })),
        "oracle_spec": object(&["version", "tick_period_ms", "monitors"], json!({
            "version": {"const": 1},
            "tick_period_ms": {"type": "integer", "minimum": 1},
            "monitors": {"type": "array", "items": object(&["id", "formula", "vars", "channel"], json!({
                "id": {"type": "string"},
                "formula": {"type": "string"},
                "vars": {"type": "array", "items": object(&["name", "type"], json!({
                    "name": {"type": "string"},
                    "type": {"enum": ["bool", "number", "symbol", "value"]}
                }))},
                "channel": {"type": "string"}
            }))}
        })),
        "verdict_record": object(&["tick", "id", "verdict"], json!({
            "tick": {"type": "integer", "minimum": 0},
            "id": {"type": "string"},
            "verdict": r("verdict")
        }))
    })
}

/// The document served at `/api/schema`.
pub fn published() -> Value {
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$id": format!("urn:reqforge:api:v{SCHEMA_VERSION}"),
        "version": SCHEMA_VERSION,
        "$defs": defs()
    })
}

/// A standalone schema for the named definition.
pub fn named(name: &str) -> Option<Value> {
    let defs = defs();
    defs.get(name)?;
    Some(json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$ref": format!("#/$defs/{name}"),
        "$defs": defs
    }))
}

pub fn names_published() -> Vec<String> {
    defs().as_object().expect("defs is an object").keys().cloned().collect()
}
