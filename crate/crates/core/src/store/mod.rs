//! Requirement sets: identity, parent links, metrics and file formats.
//!
//! A [`RequirementSet`] is a value. Every mutation returns a new set and
//! leaves the receiver untouched, so readers holding an older set never see
//! a partial update.

mod io;
mod metrics;
mod text;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::requirement::Requirement;
use crate::semantics::{ModeModel, QuantDomain};

pub use io::{export_set, import_set, SetFormat, SET_SCHEMA_VERSION};
pub use metrics::{metrics, metrics_json, MetricsReport};
pub use text::{read_requirements, write_requirements, FileDiagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("unknown requirement `{0}`")]
    UnknownId(String),
    #[error("requirement `{id}` names unknown parent `{parent}`")]
    UnknownParent { id: String, parent: String },
    #[error("parent links through `{0}` form a cycle")]
    CycleDetected(String),
    #[error("requirement `{id}` still has {children} children")]
    HasChildren { id: String, children: usize },
    #[error("invalid requirement `{id}`: {reason}")]
    Invalid { id: String, reason: String },
    #[error("{}", schema_message(.line, .message))]
    Schema { line: Option<usize>, message: String },
    #[error("requirement `{id}`: {message}")]
    Parse { id: String, message: String },
}

fn schema_message(line: &Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("schema error at line {l}: {message}"),
        None => format!("schema error: {message}"),
    }
}

impl StoreError {
    pub(crate) fn schema(line: Option<usize>, message: impl Into<String>) -> Self {
        StoreError::Schema {
            line,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RequirementSet {
    pub project: String,
    pub modes: ModeModel,
    pub domains: QuantDomain,
    requirements: BTreeMap<String, Requirement>,
}

/// Content equality: where a requirement's text came from is not compared.
impl PartialEq for RequirementSet {
    fn eq(&self, other: &Self) -> bool {
        let strip = |r: &Requirement| Requirement { source: None, ..r.clone() };
        self.project == other.project
            && self.modes == other.modes
            && self.domains == other.domains
            && self.requirements.len() == other.requirements.len()
            && self
                .requirements
                .values()
                .zip(other.requirements.values())
                .all(|(a, b)| strip(a) == strip(b))
    }
}

impl RequirementSet {
    pub fn new(project: impl Into<String>) -> Self {
        RequirementSet {
            project: project.into(),
            ..Default::default()
        }
    }

    pub fn with_modes(mut self, modes: ModeModel) -> Self {
        self.modes = modes;
        self
    }

    pub fn with_domains(mut self, domains: QuantDomain) -> Self {
        self.domains = domains;
        self
    }

    pub fn get(&self, id: &str) -> Option<&Requirement> {
        self.requirements.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.requirements.contains_key(id)
    }

    /// Requirements in id order.
    pub fn iter(&self) -> impl Iterator<Item = &Requirement> {
        self.requirements.values()
    }

    pub fn len(&self) -> usize {
        self.requirements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requirements.is_empty()
    }

    /// Inserts or replaces `req` by id.
    pub fn upsert(&self, req: Requirement) -> Result<RequirementSet, StoreError> {
        self.upsert_batch(vec![req])
    }

    /// Inserts or replaces every requirement at once; parents may be created
    /// by the same batch. Duplicate ids within the batch: the last one wins.
    pub fn upsert_batch(&self, reqs: Vec<Requirement>) -> Result<RequirementSet, StoreError> {
        let mut next = self.clone();
        for r in reqs {
            check_well_formed(&r)?;
            next.requirements.insert(r.id.clone(), r);
        }
        next.check_forest()?;
        Ok(next)
    }

    /// Removes a leaf requirement.
    pub fn remove(&self, id: &str) -> Result<RequirementSet, StoreError> {
        if !self.contains(id) {
            return Err(StoreError::UnknownId(id.to_string()));
        }
        let children = self.children(id).count();
        if children > 0 {
            return Err(StoreError::HasChildren {
                id: id.to_string(),
                children,
            });
        }
        let mut next = self.clone();
        next.requirements.remove(id);
        Ok(next)
    }

    /// Direct children in id order.
    pub fn children<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Requirement> + 'a {
        self.requirements
            .values()
            .filter(move |r| r.parent_id.as_deref() == Some(id))
    }

    /// The subtree below `id` in preorder, children visited in id order.
    pub fn descendants(&self, id: &str) -> Result<Vec<&Requirement>, StoreError> {
        if !self.contains(id) {
            return Err(StoreError::UnknownId(id.to_string()));
        }
        let mut by_parent: BTreeMap<&str, Vec<&Requirement>> = BTreeMap::new();
        for r in self.requirements.values() {
            if let Some(p) = &r.parent_id {
                by_parent.entry(p.as_str()).or_default().push(r);
            }
        }
        let mut out = Vec::new();
        let mut stack: Vec<&Requirement> = by_parent.get(id).into_iter().flatten().rev().copied().collect();
        while let Some(r) = stack.pop() {
            out.push(r);
            stack.extend(by_parent.get(r.id.as_str()).into_iter().flatten().rev());
        }
        Ok(out)
    }

    /// Requirements without a parent, in id order.
    pub fn roots(&self) -> impl Iterator<Item = &Requirement> {
        self.requirements.values().filter(|r| r.parent_id.is_none())
    }

    /// Every parent exists and following parents always reaches a root.
    pub fn check_forest(&self) -> Result<(), StoreError> {
        for r in self.requirements.values() {
            if let Some(p) = &r.parent_id {
                if !self.contains(p) {
                    return Err(StoreError::UnknownParent {
                        id: r.id.clone(),
                        parent: p.clone(),
                    });
                }
            }
        }
        for r in self.requirements.values() {
            let mut at = r;
            for _ in 0..=self.requirements.len() {
                match &at.parent_id {
                    None => break,
                    Some(p) if *p == r.id => return Err(StoreError::CycleDetected(r.id.clone())),
                    Some(p) => at = &self.requirements[p],
                }
            }
            if at.parent_id.is_some() {
                return Err(StoreError::CycleDetected(r.id.clone()));
            }
        }
        Ok(())
    }
}

fn check_well_formed(r: &Requirement) -> Result<(), StoreError> {
    let invalid = |reason: &str| {
        Err(StoreError::Invalid {
            id: r.id.clone(),
            reason: reason.to_string(),
        })
    };
    if r.id.trim().is_empty() {
        return invalid("empty id");
    }
    if r.id.chars().any(char::is_control) {
        return invalid("id contains control characters");
    }
    if r.component.trim().is_empty() {
        return invalid("empty component");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(id: &str, parent: Option<&str>) -> Requirement {
        let r = Requirement::parse(id, "C shall always p").unwrap();
        match parent {
            Some(p) => r.with_parent(p),
            None => r,
        }
    }

    #[test]
    fn parent_then_child() {
        let s = RequirementSet::new("demo")
            .upsert(req("FUN5", None))
            .unwrap()
            .upsert(req("FUN5_3", Some("FUN5")))
            .unwrap();
        assert_eq!(metrics(&s).child_count, 1);
        assert!(matches!(s.remove("FUN5"), Err(StoreError::HasChildren { .. })));
        assert_eq!(s.remove("FUN5_3").unwrap().len(), 1);
    }

    #[test]
    fn cycles_rejected() {
        let s = RequirementSet::new("demo");
        assert_eq!(
            s.upsert(req("A", Some("A"))).unwrap_err(),
            StoreError::CycleDetected("A".into())
        );
        let s = s.upsert_batch(vec![req("A", None), req("B", Some("A"))]).unwrap();
        assert!(matches!(
            s.upsert(req("A", Some("B"))),
            Err(StoreError::CycleDetected(_))
        ));
        assert!(matches!(
            s.upsert(req("C", Some("nope"))),
            Err(StoreError::UnknownParent { .. })
        ));
        // the failed updates left `s` alone
        assert_eq!(s.len(), 2);
        assert!(s.get("A").unwrap().parent_id.is_none());
    }

    #[test]
    fn batch_may_create_parents() {
        let s = RequirementSet::new("p")
            .upsert_batch(vec![req("K", Some("J")), req("J", None)])
            .unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn descendants_in_preorder() {
        let mut batch = vec![req("FUN6", None), req("CONT4", None)];
        batch.extend((1..=6).map(|i| req(&format!("FUN6_{i}"), Some("FUN6"))));
        batch.push(req("FUN6_1_a", Some("FUN6_1")));
        let s = RequirementSet::new("p").upsert_batch(batch).unwrap();
        let ids: Vec<_> = s.descendants("FUN6").unwrap().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["FUN6_1", "FUN6_1_a", "FUN6_2", "FUN6_3", "FUN6_4", "FUN6_5", "FUN6_6"]);
        assert!(s.descendants("CONT4").unwrap().is_empty());
        assert!(matches!(s.descendants("X"), Err(StoreError::UnknownId(_))));
    }
}
