//! Plain-text requirement files.
//!
//! ```text
//! # comment
//! @project rover
//! @mode-var sys_mode
//! @modes Nominal Degraded
//! @domain k = 1, 2, 3
//! R1: Rover shall always battery > 0
//! R1_1 < R1: in Nominal Rover shall
//!     immediately battery > 10
//! ```
//!
//! A requirement is `ID: sentence` or `ID < PARENT: sentence`; indented lines
//! continue the previous sentence.

use std::fmt;

use crate::requirement::{Requirement, SourceText};
use crate::semantics::ModeModel;

use super::{RequirementSet, StoreError};

/// A problem at a position in a requirement file; line and column are
/// 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileDiagnostic {
    pub line: usize,
    pub col: usize,
    pub id: Option<String>,
    pub message: String,
}

impl fmt::Display for FileDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        if let Some(id) = &self.id {
            write!(f, "{id}: ")?;
        }
        f.write_str(&self.message)
    }
}

struct Pending {
    id: String,
    parent: Option<String>,
    line: usize,
    // column where the sentence starts on its first line
    col: usize,
    text: String,
}

/// Reads a requirement file. Every sentence is parsed; all problems are
/// reported together.
pub fn read_requirements(text: &str, file: Option<&str>) -> Result<RequirementSet, Vec<FileDiagnostic>> {
    let mut diags = Vec::new();
    let mut set = RequirementSet::new("");
    let mut pending: Vec<Pending> = Vec::new();
    let diag = |line: usize, col: usize, id: Option<&str>, message: String| FileDiagnostic {
        line,
        col,
        id: id.map(str::to_string),
        message,
    };

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if raw.starts_with(char::is_whitespace) {
            match pending.last_mut() {
                Some(p) => {
                    p.text.push('\n');
                    p.text.push_str(raw);
                }
                None => diags.push(diag(n, 1, None, "continuation line without a requirement".into())),
            }
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('@') {
            let (name, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let arg = arg.trim();
            match name {
                "project" => set.project = arg.to_string(),
                "mode-var" if !arg.is_empty() => {
                    set.modes = ModeModel {
                        mode_variable: arg.to_string(),
                        ..set.modes.clone()
                    }
                }
                "modes" => set.modes.modes.extend(
                    arg.split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|m| !m.is_empty())
                        .map(str::to_string),
                ),
                "domain" => {
                    let Some((var, values)) = arg.split_once('=') else {
                        diags.push(diag(n, 1, None, "expected `@domain VAR = a, b, ...`".into()));
                        continue;
                    };
                    let values: Vec<&str> = values.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
                    if let Err(e) = set.domains.insert(var.trim(), values) {
                        diags.push(diag(n, 1, None, e.to_string()));
                    }
                }
                _ => diags.push(diag(n, 1, None, format!("unknown directive `@{name}`"))),
            }
            continue;
        }
        let Some((head, sentence)) = raw.split_once(':') else {
            diags.push(diag(n, 1, None, "expected `ID: sentence`".into()));
            continue;
        };
        let (id, parent) = match head.split_once('<') {
            Some((id, parent)) => (id.trim(), Some(parent.trim().to_string())),
            None => (head.trim(), None),
        };
        if id.is_empty() || id.contains(char::is_whitespace) || parent.as_deref().is_some_and(str::is_empty) {
            diags.push(diag(n, 1, None, format!("malformed requirement header `{}`", head.trim())));
            continue;
        }
        pending.push(Pending {
            id: id.to_string(),
            parent,
            line: n,
            col: head.chars().count() + 2,
            text: sentence.to_string(),
        });
    }

    let mut reqs = Vec::with_capacity(pending.len());
    let mut lines = std::collections::BTreeMap::new();
    for p in pending {
        if lines.insert(p.id.clone(), p.line).is_some() {
            diags.push(diag(p.line, 1, Some(&p.id), "duplicate id".into()));
            continue;
        }
        let src = SourceText::at(p.text.clone(), file.map(str::to_string), p.line);
        match crate::parser::parse_requirement(&src) {
            Ok((mut r, _)) => {
                r.id = p.id;
                r.parent_id = p.parent;
                r.project = set.project.clone();
                reqs.push(r);
            }
            Err(e) => {
                let (l, c) = e.line_col(&p.text);
                let col = if l == 1 { p.col + c - 1 } else { c };
                diags.push(diag(p.line + l - 1, col, Some(&p.id), e.kind.to_string()));
            }
        }
    }
    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.col));
        return Err(diags);
    }
    set.upsert_batch(reqs).map_err(|e| {
        let id = match &e {
            StoreError::UnknownParent { id, .. } | StoreError::CycleDetected(id) | StoreError::Invalid { id, .. } => {
                Some(id.clone())
            }
            _ => None,
        };
        let line = id.as_ref().and_then(|id| lines.get(id)).copied().unwrap_or(1);
        vec![diag(line, 1, id.as_deref(), e.to_string())]
    })
}

/// Renders a set back to the text format, children after their parents'
/// siblings in id order.
pub fn write_requirements(set: &RequirementSet) -> String {
    let mut out = String::new();
    if !set.project.is_empty() {
        out.push_str(&format!("@project {}\n", set.project));
    }
    if set.modes.mode_variable != ModeModel::default().mode_variable {
        out.push_str(&format!("@mode-var {}\n", set.modes.mode_variable));
    }
    if !set.modes.modes.is_empty() {
        let modes: Vec<&str> = set.modes.modes.iter().map(String::as_str).collect();
        out.push_str(&format!("@modes {}\n", modes.join(" ")));
    }
    for (var, values) in set.domains.iter() {
        out.push_str(&format!("@domain {var} = {}\n", values.join(", ")));
    }
    for r in set.iter() {
        let head = match &r.parent_id {
            Some(p) => format!("{} < {p}", r.id),
            None => r.id.clone(),
        };
        out.push_str(&format!("{head}: {}\n", Requirement::text(r)));
    }
    out
}
