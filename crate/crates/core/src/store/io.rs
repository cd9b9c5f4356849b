//! Set files.
//!
//! JSON (canonical):
//!
//! ```json
//! {
//!   "schema": 1,
//!   "project": "rover",
//!   "modes": {"mode_variable": "__mode", "modes": ["Nominal"]},
//!   "domains": {"k": ["1", "2"]},
//!   "requirements": [
//!     {"id": "R1", "project": "rover", "text": "Rover shall always battery > 0"}
//!   ]
//! }
//! ```
//!
//! `parent_id` and `rationale` are optional per requirement. CSV carries the
//! requirements only, with the header `id,parent_id,project,fretish_text,rationale`;
//! `id` and `fretish_text` are required, empty cells read as absent. In both
//! formats the sentence is the source of truth and is re-parsed on import.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::requirement::{Requirement, SourceText};
use crate::semantics::{ModeModel, QuantDomain};

use super::{RequirementSet, StoreError};

pub const SET_SCHEMA_VERSION: u32 = 1;

const CSV_COLUMNS: [&str; 5] = ["id", "parent_id", "project", "fretish_text", "rationale"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetFormat {
    Json,
    Csv,
}

impl FromStr for SetFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(SetFormat::Json),
            "csv" => Ok(SetFormat::Csv),
            other => Err(format!("unknown set format `{other}`")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetFile {
    schema: u32,
    project: String,
    #[serde(default)]
    modes: ModeModel,
    #[serde(default)]
    domains: QuantDomain,
    requirements: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent_id: Option<String>,
    #[serde(default)]
    project: String,
    text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rationale: Option<String>,
}

impl Entry {
    fn of(r: &Requirement) -> Entry {
        Entry {
            id: r.id.clone(),
            parent_id: r.parent_id.clone(),
            project: r.project.clone(),
            text: r.text(),
            rationale: r.rationale.clone(),
        }
    }

    fn into_requirement(self) -> Result<Requirement, StoreError> {
        let mut r = Requirement::parse(self.id.clone(), &self.text).map_err(|e| StoreError::Parse {
            id: self.id.clone(),
            message: e.render(&self.text),
        })?;
        r.parent_id = self.parent_id;
        r.project = self.project;
        r.rationale = self.rationale;
        r.source = Some(SourceText::new(self.text));
        Ok(r)
    }
}

pub fn export_set(set: &RequirementSet, format: SetFormat) -> Vec<u8> {
    match format {
        SetFormat::Json => {
            let file = SetFile {
                schema: SET_SCHEMA_VERSION,
                project: set.project.clone(),
                modes: set.modes.clone(),
                domains: set.domains.clone(),
                requirements: set.iter().map(Entry::of).collect(),
            };
            let mut out = serde_json::to_vec_pretty(&file).expect("set serializes");
            out.push(b'\n');
            out
        }
        SetFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_COLUMNS).expect("in-memory write");
            for r in set.iter() {
                let e = Entry::of(r);
                w.write_record([
                    e.id.as_str(),
                    e.parent_id.as_deref().unwrap_or(""),
                    e.project.as_str(),
                    e.text.as_str(),
                    e.rationale.as_deref().unwrap_or(""),
                ])
                .expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

pub fn import_set(bytes: &[u8], format: SetFormat) -> Result<RequirementSet, StoreError> {
    let (set, entries) = match format {
        SetFormat::Json => {
            let file: SetFile = serde_json::from_slice(bytes)
                .map_err(|e| StoreError::schema(Some(e.line()), e.to_string()))?;
            if file.schema != SET_SCHEMA_VERSION {
                return Err(StoreError::schema(None, format!("unsupported schema version {}", file.schema)));
            }
            let set = RequirementSet::new(file.project)
                .with_modes(file.modes)
                .with_domains(file.domains);
            let entries: Vec<(Option<usize>, Entry)> = file.requirements.into_iter().map(|e| (None, e)).collect();
            (set, entries)
        }
        SetFormat::Csv => {
            let entries = read_csv(bytes)?;
            let project = entries.first().map(|(_, e)| e.project.clone()).unwrap_or_default();
            (RequirementSet::new(project), entries)
        }
    };
    let mut seen = BTreeSet::new();
    let mut reqs = Vec::with_capacity(entries.len());
    for (line, e) in entries {
        if !seen.insert(e.id.clone()) {
            return Err(StoreError::schema(line, format!("duplicate id `{}`", e.id)));
        }
        reqs.push(e.into_requirement()?);
    }
    set.upsert_batch(reqs)
}

fn read_csv(bytes: &[u8]) -> Result<Vec<(Option<usize>, Entry)>, StoreError> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let headers = rdr
        .headers()
        .map_err(|e| StoreError::schema(Some(1), e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let id_col = col("id").ok_or_else(|| StoreError::schema(Some(1), "missing `id` column"))?;
    let text_col = col("fretish_text").ok_or_else(|| StoreError::schema(Some(1), "missing `fretish_text` column"))?;
    let (parent_col, project_col, rationale_col) = (col("parent_id"), col("project"), col("rationale"));
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize);
            StoreError::schema(line, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line() as usize);
        let cell = |c: Option<usize>| c.and_then(|c| rec.get(c)).map(str::to_string).filter(|s| !s.is_empty());
        let id = cell(Some(id_col)).ok_or_else(|| StoreError::schema(line, "empty id"))?;
        let text = cell(Some(text_col)).ok_or_else(|| StoreError::schema(line, "empty fretish_text"))?;
        out.push((
            line,
            Entry {
                id,
                parent_id: cell(parent_col),
                project: cell(project_col).unwrap_or_default(),
                text,
                rationale: cell(rationale_col),
            },
        ));
    }
    Ok(out)
}
