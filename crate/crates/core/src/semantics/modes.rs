use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::expr::BoolExpr;
use crate::requirement::{Requirement, ScopeSpec, TimingSpec};

pub const DEFAULT_MODE_VARIABLE: &str = "__mode";

/// Which variable carries the current mode, and the modes it may take.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeModel {
    pub mode_variable: String,
    #[serde(default)]
    pub modes: BTreeSet<String>,
}

impl Default for ModeModel {
    fn default() -> Self {
        ModeModel::new(DEFAULT_MODE_VARIABLE)
    }
}

impl ModeModel {
    pub fn new(mode_variable: impl Into<String>) -> Self {
        ModeModel {
            mode_variable: mode_variable.into(),
            modes: BTreeSet::new(),
        }
    }

    pub fn with_modes<I, S>(mut self, modes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.modes.extend(modes.into_iter().map(Into::into));
        self
    }

    /// `mode_variable = "m"`
    pub fn in_mode(&self, mode: &str) -> BoolExpr {
        BoolExpr::var_is(&self.mode_variable, mode)
    }

    /// Whether any expression of `req` reads the mode variable directly.
    pub fn is_shadowed_by(&self, req: &Requirement) -> bool {
        let mut exprs: Vec<&BoolExpr> = vec![&req.response];
        exprs.extend(req.condition.expr());
        if let ScopeSpec::While(e) = &req.scope {
            exprs.push(e);
        }
        if let TimingSpec::Until(e) | TimingSpec::Before(e) = &req.timing {
            exprs.push(e);
        }
        exprs
            .into_iter()
            .any(|e| e.variables().contains_key(&self.mode_variable))
    }

    /// Modes named by `req` that this model does not declare. An empty
    /// model declares nothing and accepts everything.
    pub fn undeclared<'r>(&self, req: &'r Requirement) -> Option<&'r str> {
        let mode = req.scope.mode()?;
        (!self.modes.is_empty() && !self.modes.contains(mode)).then_some(mode)
    }
}
