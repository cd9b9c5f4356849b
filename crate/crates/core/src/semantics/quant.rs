use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::expr::{BoolExpr, QuantKind};
use crate::requirement::{ConditionSpec, Requirement, ScopeSpec, TimingSpec};

use super::SemanticsError;

/// Finite instantiation sets for quantified variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuantDomain(BTreeMap<String, Vec<String>>);

impl QuantDomain {
    pub fn new() -> Self {
        QuantDomain::default()
    }

    pub fn insert<I, S>(&mut self, var: impl Into<String>, values: I) -> Result<(), SemanticsError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let var = var.into();
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if values.is_empty() {
            return Err(SemanticsError::InvalidDomain {
                var,
                reason: "no values".into(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            if values[..i].contains(v) {
                return Err(SemanticsError::InvalidDomain {
                    var,
                    reason: format!("duplicate value `{v}`"),
                });
            }
        }
        self.0.insert(var, values);
        Ok(())
    }

    pub fn with<I, S>(mut self, var: impl Into<String>, values: I) -> Result<Self, SemanticsError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.insert(var, values)?;
        Ok(self)
    }

    pub fn get(&self, var: &str) -> Option<&[String]> {
        self.0.get(var).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Vec<String>)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Replaces quantifiers by finite instantiation. A `forall` heading the
/// response splits the requirement into children `<id>_inst_<k>` when the
/// children together mean the same as the original; any other quantifier is
/// unfolded in place.
pub fn expand_quantifiers(req: &Requirement, dom: &QuantDomain) -> Result<Vec<Requirement>, SemanticsError> {
    if let (BoolExpr::Quant(QuantKind::Forall, var, body), true) = (&req.response, splits_over_and(req)) {
        let values = dom
            .get(var)
            .ok_or_else(|| SemanticsError::UnknownDomain(var.clone()))?;
        return values
            .iter()
            .enumerate()
            .map(|(k, value)| {
                let mut child = req.clone();
                child.id = format!("{}_inst_{}", req.id, k + 1);
                child.parent_id = Some(req.id.clone());
                child.response = body.substitute(var, value);
                child.source = None;
                expand_in_place(&mut child, dom)?;
                Ok(child)
            })
            .collect();
    }
    let mut out = req.clone();
    if expand_in_place(&mut out, dom)? {
        out.source = None;
    }
    Ok(vec![out])
}

/// Whether the requirement with response `a & b` means the same as the pair
/// with responses `a` and `b`. Timings that look for one witness position
/// (`eventually`, `within`, `before`) or forbid one (`never`) do not, and the
/// `only` scopes negate the timing.
fn splits_over_and(req: &Requirement) -> bool {
    let negated = matches!(
        req.scope,
        ScopeSpec::OnlyIn(_) | ScopeSpec::OnlyBefore(_) | ScopeSpec::OnlyAfter(_)
    );
    let distributes = matches!(
        req.timing,
        TimingSpec::Always
            | TimingSpec::Immediately
            | TimingSpec::NextTimepoint
            | TimingSpec::Until(_)
            | TimingSpec::After(_)
            | TimingSpec::For(_)
    );
    distributes && !negated
}

/// Returns whether anything changed.
fn expand_in_place(req: &mut Requirement, dom: &QuantDomain) -> Result<bool, SemanticsError> {
    let mut changed = false;
    let mut fix = |e: &mut BoolExpr| -> Result<(), SemanticsError> {
        if e.has_quantifier() {
            *e = unfold(e, dom)?;
            changed = true;
        }
        Ok(())
    };
    fix(&mut req.response)?;
    match &mut req.condition {
        ConditionSpec::Null => {}
        ConditionSpec::Trigger { expr, .. } | ConditionSpec::Continual { expr } => fix(expr)?,
    }
    if let ScopeSpec::While(e) = &mut req.scope {
        fix(e)?;
    }
    if let TimingSpec::Until(e) | TimingSpec::Before(e) = &mut req.timing {
        fix(e)?;
    }
    Ok(changed)
}

fn unfold(e: &BoolExpr, dom: &QuantDomain) -> Result<BoolExpr, SemanticsError> {
    use BoolExpr as B;
    let b = |x: &BoolExpr| unfold(x, dom);
    Ok(match e {
        B::Quant(kind, var, body) => {
            let values = dom
                .get(var)
                .ok_or_else(|| SemanticsError::UnknownDomain(var.clone()))?;
            let items = values
                .iter()
                .map(|v| unfold(&body.substitute(var, v), dom))
                .collect::<Result<Vec<_>, _>>()?;
            match kind {
                QuantKind::Forall => B::conjunction(items),
                QuantKind::Exists => B::disjunction(items),
            }
            .expect("domains are non-empty")
        }
        B::Not(a) => B::not(b(a)?),
        B::And(x, y) => B::and(b(x)?, b(y)?),
        B::Or(x, y) => B::or(b(x)?, b(y)?),
        B::Implies(x, y) => B::implies(b(x)?, b(y)?),
        B::Iff(x, y) => B::iff(b(x)?, b(y)?),
        B::IfThenElse(c, t, f) => B::ite(b(c)?, b(t)?, b(f)?),
        leaf => leaf.clone(),
    })
}
