use serde::{Deserialize, Serialize};

use reqforge_core::parser::FieldSpans;
use reqforge_core::semantics::{
    diagram_data_with, rewrite_never, template_key, to_future_ltl_with, to_past_ltl, ModeModel, TemplateKey,
    TickConfig, TimelineDiagram,
};
use reqforge_core::{pretty_print, Requirement};

/// Everything derived from one requirement.
#[derive(Clone, Debug, Serialize)]
pub struct Formalization {
    pub requirement: Requirement,
    /// Canonical sentence.
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spans: Option<FieldSpans>,
    pub template_key: TemplateKey,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub future_ltl: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub future_ltl_unsupported: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub past_ltl: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub past_ltl_unsupported: Option<String>,
    pub diagram: TimelineDiagram,
    /// The `always !r` form of a `never r` requirement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rewritten: Option<Rewrite>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rewrite {
    pub text: String,
    pub template_key: TemplateKey,
}

pub fn formalize(req: &Requirement, mm: &ModeModel, ticks: &TickConfig) -> Formalization {
    let (future_ltl, future_ltl_unsupported) = split(to_future_ltl_with(req, mm, ticks));
    let (past_ltl, past_ltl_unsupported) = split(to_past_ltl(req, mm));
    Formalization {
        requirement: req.clone(),
        text: pretty_print(req).text,
        spans: None,
        template_key: template_key(req),
        future_ltl,
        future_ltl_unsupported,
        past_ltl,
        past_ltl_unsupported,
        diagram: diagram_data_with(req, ticks),
        rewritten: rewrite_never(req).ok().map(|r| Rewrite {
            text: pretty_print(&r).text,
            template_key: template_key(&r),
        }),
    }
}

fn split<T: ToString, E: ToString>(r: Result<T, E>) -> (Option<String>, Option<String>) {
    match r {
        Ok(v) => (Some(v.to_string()), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

/// A stored requirement as the API shows it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RequirementDoc {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
    pub project: String,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rationale: Option<String>,
    pub template_key: TemplateKey,
}

impl RequirementDoc {
    pub fn of(r: &Requirement) -> Self {
        RequirementDoc {
            id: r.id.clone(),
            parent_id: r.parent_id.clone(),
            project: r.project.clone(),
            text: r.text(),
            rationale: r.rationale.clone(),
            template_key: template_key(r),
        }
    }
}
