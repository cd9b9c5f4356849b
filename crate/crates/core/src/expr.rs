//! The expression language shared by conditions, responses and scope guards.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    /// The operator whose result is the logical negation of this one.
    pub fn negated(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Ge => CmpOp::Lt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    #[serde(rename = "+")]
    Add,
    #[serde(rename = "-")]
    Sub,
    #[serde(rename = "*")]
    Mul,
    #[serde(rename = "/")]
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantKind {
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", content = "args", rename_all = "snake_case")]
pub enum ArithExpr {
    Var(String),
    Num(f64),
    Sym(String),
    App(String, Vec<ArithExpr>),
    Neg(Box<ArithExpr>),
    Bin(ArithOp, Box<ArithExpr>, Box<ArithExpr>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", content = "args", rename_all = "snake_case")]
pub enum BoolExpr {
    Const(bool),
    Atom(String),
    Comparison(ArithExpr, CmpOp, ArithExpr),
    FnApp(String, Vec<ArithExpr>),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Implies(Box<BoolExpr>, Box<BoolExpr>),
    Iff(Box<BoolExpr>, Box<BoolExpr>),
    IfThenElse(Box<BoolExpr>, Box<BoolExpr>, Box<BoolExpr>),
    Quant(QuantKind, String, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        BoolExpr::Atom(name.into())
    }

    pub fn cmp(lhs: ArithExpr, op: CmpOp, rhs: ArithExpr) -> Self {
        BoolExpr::Comparison(lhs, op, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(e))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Iff(Box::new(a), Box::new(b))
    }

    pub fn ite(c: BoolExpr, t: BoolExpr, e: BoolExpr) -> Self {
        BoolExpr::IfThenElse(Box::new(c), Box::new(t), Box::new(e))
    }

    /// `var = "value"`, the predicate used for mode membership.
    pub fn var_is(var: &str, symbol: &str) -> Self {
        BoolExpr::Comparison(
            ArithExpr::Var(var.to_string()),
            CmpOp::Eq,
            ArithExpr::Sym(symbol.to_string()),
        )
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn conjunction(items: impl IntoIterator<Item = BoolExpr>) -> Option<BoolExpr> {
        items.into_iter().reduce(BoolExpr::and)
    }

    pub fn disjunction(items: impl IntoIterator<Item = BoolExpr>) -> Option<BoolExpr> {
        items.into_iter().reduce(BoolExpr::or)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(
            self,
            BoolExpr::Atom(_) | BoolExpr::Comparison(..) | BoolExpr::FnApp(..)
        )
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            BoolExpr::Quant(..) => true,
            BoolExpr::Const(_) | BoolExpr::Atom(_) | BoolExpr::Comparison(..) | BoolExpr::FnApp(..) => {
                false
            }
            BoolExpr::Not(a) => a.has_quantifier(),
            BoolExpr::And(a, b)
            | BoolExpr::Or(a, b)
            | BoolExpr::Implies(a, b)
            | BoolExpr::Iff(a, b) => a.has_quantifier() || b.has_quantifier(),
            BoolExpr::IfThenElse(a, b, c) => {
                a.has_quantifier() || b.has_quantifier() || c.has_quantifier()
            }
        }
    }

    /// Leaf predicates in first-occurrence order, without duplicates.
    pub fn leaves(&self) -> Vec<&BoolExpr> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    pub(crate) fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a BoolExpr>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Atom(_) | BoolExpr::Comparison(..) | BoolExpr::FnApp(..) => {
                if !out.iter().any(|l| *l == self) {
                    out.push(self);
                }
            }
            BoolExpr::Not(a) | BoolExpr::Quant(_, _, a) => a.collect_leaves(out),
            BoolExpr::And(a, b)
            | BoolExpr::Or(a, b)
            | BoolExpr::Implies(a, b)
            | BoolExpr::Iff(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
            BoolExpr::IfThenElse(a, b, c) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
                c.collect_leaves(out);
            }
        }
    }

    /// Every identifier the expression reads, with the kind of value it is
    /// used as.
    pub fn variables(&self) -> BTreeMap<String, VarKind> {
        let mut out = BTreeMap::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeMap<String, VarKind>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Atom(name) => merge_kind(out, name, VarKind::Bool),
            BoolExpr::FnApp(..) => merge_kind(out, &self.to_string(), VarKind::Bool),
            BoolExpr::Comparison(l, op, r) => {
                let hint = comparison_kind(l, *op, r);
                l.collect_vars(out, hint);
                r.collect_vars(out, hint);
            }
            BoolExpr::Not(a) => a.collect_vars(out),
            BoolExpr::Quant(_, var, body) => {
                let mut inner = BTreeMap::new();
                body.collect_vars(&mut inner);
                inner.remove(var);
                for (k, v) in inner {
                    merge_kind(out, &k, v);
                }
            }
            BoolExpr::And(a, b)
            | BoolExpr::Or(a, b)
            | BoolExpr::Implies(a, b)
            | BoolExpr::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            BoolExpr::IfThenElse(a, b, c) => {
                a.collect_vars(out);
                b.collect_vars(out);
                c.collect_vars(out);
            }
        }
    }

    /// Replaces free occurrences of identifier `var` by identifier `with`.
    pub fn substitute(&self, var: &str, with: &str) -> BoolExpr {
        let sub = |e: &BoolExpr| Box::new(e.substitute(var, with));
        match self {
            BoolExpr::Const(b) => BoolExpr::Const(*b),
            BoolExpr::Atom(name) if name == var => BoolExpr::Atom(with.to_string()),
            BoolExpr::Atom(name) => BoolExpr::Atom(name.clone()),
            BoolExpr::Comparison(l, op, r) => {
                BoolExpr::Comparison(l.substitute(var, with), *op, r.substitute(var, with))
            }
            BoolExpr::FnApp(name, args) => BoolExpr::FnApp(
                name.clone(),
                args.iter().map(|a| a.substitute(var, with)).collect(),
            ),
            BoolExpr::Not(a) => BoolExpr::Not(sub(a)),
            BoolExpr::And(a, b) => BoolExpr::And(sub(a), sub(b)),
            BoolExpr::Or(a, b) => BoolExpr::Or(sub(a), sub(b)),
            BoolExpr::Implies(a, b) => BoolExpr::Implies(sub(a), sub(b)),
            BoolExpr::Iff(a, b) => BoolExpr::Iff(sub(a), sub(b)),
            BoolExpr::IfThenElse(a, b, c) => BoolExpr::IfThenElse(sub(a), sub(b), sub(c)),
            BoolExpr::Quant(kind, bound, body) if bound == var => {
                BoolExpr::Quant(*kind, bound.clone(), body.clone())
            }
            BoolExpr::Quant(kind, bound, body) => BoolExpr::Quant(*kind, bound.clone(), sub(body)),
        }
    }

    /// Evaluates the expression, resolving each leaf predicate through `leaf`.
    pub fn eval_with<E>(&self, leaf: &mut impl FnMut(&BoolExpr) -> Result<bool, E>) -> Result<bool, E>
    where
        E: From<EvalError>,
    {
        Ok(match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Atom(_) | BoolExpr::Comparison(..) | BoolExpr::FnApp(..) => leaf(self)?,
            BoolExpr::Not(a) => !a.eval_with(leaf)?,
            BoolExpr::And(a, b) => a.eval_with(leaf)? & b.eval_with(leaf)?,
            BoolExpr::Or(a, b) => a.eval_with(leaf)? | b.eval_with(leaf)?,
            BoolExpr::Implies(a, b) => !a.eval_with(leaf)? | b.eval_with(leaf)?,
            BoolExpr::Iff(a, b) => a.eval_with(leaf)? == b.eval_with(leaf)?,
            BoolExpr::IfThenElse(c, t, e) => {
                let c = c.eval_with(leaf)?;
                let t = t.eval_with(leaf)?;
                let e = e.eval_with(leaf)?;
                if c {
                    t
                } else {
                    e
                }
            }
            BoolExpr::Quant(..) => return Err(EvalError::UnexpandedQuantifier(self.to_string()).into()),
        })
    }

    /// Evaluates a leaf predicate against variable values.
    pub fn eval_leaf(&self, env: &impl Env) -> Result<bool, EvalError> {
        match self {
            BoolExpr::Atom(name) => match env.lookup(name)? {
                Value::Bool(b) => Ok(b),
                other => Err(EvalError::TypeMismatch {
                    name: name.clone(),
                    expected: "bool",
                    found: other.kind(),
                }),
            },
            BoolExpr::FnApp(..) => {
                let key = self.to_string();
                match env.lookup(&key)? {
                    Value::Bool(b) => Ok(b),
                    other => Err(EvalError::TypeMismatch {
                        name: key,
                        expected: "bool",
                        found: other.kind(),
                    }),
                }
            }
            BoolExpr::Comparison(l, op, r) => {
                let lv = l.eval(env)?;
                let rv = r.eval(env)?;
                compare(&lv, *op, &rv).ok_or_else(|| EvalError::Incomparable {
                    expr: self.to_string(),
                    lhs: lv.kind(),
                    rhs: rv.kind(),
                })
            }
            _ => self.eval_with(&mut |leaf: &BoolExpr| leaf.eval_leaf(env)),
        }
    }
}

fn compare(l: &Value, op: CmpOp, r: &Value) -> Option<bool> {
    use std::cmp::Ordering;
    let ord = match (l, r) {
        (Value::Num(a), Value::Num(b)) => a.partial_cmp(b)?,
        (Value::Sym(a), Value::Sym(b)) => match op {
            CmpOp::Eq => return Some(a == b),
            CmpOp::Ne => return Some(a != b),
            _ => return None,
        },
        (Value::Bool(a), Value::Bool(b)) => match op {
            CmpOp::Eq => return Some(a == b),
            CmpOp::Ne => return Some(a != b),
            _ => return None,
        },
        _ => return None,
    };
    Some(match op {
        CmpOp::Eq => ord == Ordering::Equal,
        CmpOp::Ne => ord != Ordering::Equal,
        CmpOp::Lt => ord == Ordering::Less,
        CmpOp::Le => ord != Ordering::Greater,
        CmpOp::Gt => ord == Ordering::Greater,
        CmpOp::Ge => ord != Ordering::Less,
    })
}

/// How a variable is used inside expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Bool,
    Number,
    Symbol,
    /// Only compared for equality with other variables.
    Value,
}

fn merge_kind(out: &mut BTreeMap<String, VarKind>, name: &str, kind: VarKind) {
    out.entry(name.to_string())
        .and_modify(|k| {
            if *k == VarKind::Value {
                *k = kind;
            }
        })
        .or_insert(kind);
}

fn comparison_kind(l: &ArithExpr, op: CmpOp, r: &ArithExpr) -> VarKind {
    let numeric = |e: &ArithExpr| matches!(e, ArithExpr::Num(_) | ArithExpr::Neg(_) | ArithExpr::Bin(..));
    let symbolic = |e: &ArithExpr| matches!(e, ArithExpr::Sym(_));
    if !matches!(op, CmpOp::Eq | CmpOp::Ne) || numeric(l) || numeric(r) {
        VarKind::Number
    } else if symbolic(l) || symbolic(r) {
        VarKind::Symbol
    } else {
        VarKind::Value
    }
}

impl ArithExpr {
    pub fn var(name: impl Into<String>) -> Self {
        ArithExpr::Var(name.into())
    }

    pub fn num(n: f64) -> Self {
        ArithExpr::Num(n)
    }

    fn substitute(&self, var: &str, with: &str) -> ArithExpr {
        match self {
            ArithExpr::Var(name) if name == var => ArithExpr::Var(with.to_string()),
            ArithExpr::Var(_) | ArithExpr::Num(_) | ArithExpr::Sym(_) => self.clone(),
            ArithExpr::App(name, args) => ArithExpr::App(
                name.clone(),
                args.iter().map(|a| a.substitute(var, with)).collect(),
            ),
            ArithExpr::Neg(a) => ArithExpr::Neg(Box::new(a.substitute(var, with))),
            ArithExpr::Bin(op, a, b) => ArithExpr::Bin(
                *op,
                Box::new(a.substitute(var, with)),
                Box::new(b.substitute(var, with)),
            ),
        }
    }

    fn collect_vars(&self, out: &mut BTreeMap<String, VarKind>, hint: VarKind) {
        match self {
            ArithExpr::Var(name) => merge_kind(out, name, hint),
            ArithExpr::Num(_) | ArithExpr::Sym(_) => {}
            ArithExpr::App(..) => merge_kind(out, &self.to_string(), hint),
            ArithExpr::Neg(a) => a.collect_vars(out, VarKind::Number),
            ArithExpr::Bin(_, a, b) => {
                a.collect_vars(out, VarKind::Number);
                b.collect_vars(out, VarKind::Number);
            }
        }
    }

    pub fn eval(&self, env: &impl Env) -> Result<Value, EvalError> {
        let num = |e: &ArithExpr| -> Result<f64, EvalError> {
            match e.eval(env)? {
                Value::Num(n) => Ok(n),
                other => Err(EvalError::TypeMismatch {
                    name: e.to_string(),
                    expected: "number",
                    found: other.kind(),
                }),
            }
        };
        Ok(match self {
            ArithExpr::Var(name) => env.lookup(name)?,
            ArithExpr::Num(n) => Value::Num(*n),
            ArithExpr::Sym(s) => Value::Sym(s.clone()),
            ArithExpr::App(..) => env.lookup(&self.to_string())?,
            ArithExpr::Neg(a) => Value::Num(-num(a)?),
            ArithExpr::Bin(op, a, b) => {
                let (x, y) = (num(a)?, num(b)?);
                Value::Num(match op {
                    ArithOp::Add => x + y,
                    ArithOp::Sub => x - y,
                    ArithOp::Mul => x * y,
                    ArithOp::Div => x / y,
                })
            }
        })
    }
}

/// Variable lookup for expression evaluation.
pub trait Env {
    fn lookup(&self, name: &str) -> Result<Value, EvalError>;
}

impl Env for BTreeMap<String, Value> {
    fn lookup(&self, name: &str) -> Result<Value, EvalError> {
        self.get(name)
            .cloned()
            .ok_or_else(|| EvalError::MissingVariable(name.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("missing variable `{0}`")]
    MissingVariable(String),
    #[error("`{name}` must be a {expected}, found a {found}")]
    TypeMismatch {
        name: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("cannot compare {lhs} with {rhs} in `{expr}`")]
    Incomparable {
        expr: String,
        lhs: &'static str,
        rhs: &'static str,
    },
    #[error("quantifier must be expanded before evaluation: `{0}`")]
    UnexpandedQuantifier(String),
}

// Binding strength used by every printer in the crate. Larger binds tighter.
pub(crate) mod prec {
    pub const BINDER: u8 = 0;
    pub const IFF: u8 = 10;
    pub const IMPLIES: u8 = 20;
    pub const OR: u8 = 30;
    pub const AND: u8 = 40;
    pub const TEMPORAL_BIN: u8 = 50;
    pub const CMP: u8 = 60;
    pub const ADD: u8 = 70;
    pub const MUL: u8 = 80;
    pub const UNARY: u8 = 90;
    pub const PRIMARY: u8 = 100;
}

/// Identifiers that collide with operator letters in formula text.
pub(crate) const FORMULA_RESERVED: &[&str] = &["G", "F", "X", "U", "H", "O", "Y", "S", "END"];

#[derive(Clone, Copy, Default)]
pub(crate) struct Style {
    /// Escape identifiers that read as temporal operators.
    pub formula: bool,
}

impl Style {
    fn ident(self, out: &mut String, name: &str) {
        if self.formula && FORMULA_RESERVED.contains(&name) {
            out.push('`');
            out.push_str(name);
            out.push('`');
        } else {
            out.push_str(name);
        }
    }
}

pub(crate) fn bool_level(e: &BoolExpr) -> u8 {
    match e {
        BoolExpr::Const(_) | BoolExpr::Atom(_) | BoolExpr::FnApp(..) => prec::PRIMARY,
        BoolExpr::Comparison(..) => prec::CMP,
        BoolExpr::Not(_) => prec::UNARY,
        BoolExpr::And(..) => prec::AND,
        BoolExpr::Or(..) => prec::OR,
        BoolExpr::Implies(..) => prec::IMPLIES,
        BoolExpr::Iff(..) => prec::IFF,
        BoolExpr::IfThenElse(..) | BoolExpr::Quant(..) => prec::BINDER,
    }
}

fn arith_level(e: &ArithExpr) -> u8 {
    match e {
        ArithExpr::Var(_) | ArithExpr::Num(_) | ArithExpr::Sym(_) | ArithExpr::App(..) => {
            prec::PRIMARY
        }
        ArithExpr::Neg(_) => prec::UNARY,
        ArithExpr::Bin(ArithOp::Add | ArithOp::Sub, ..) => prec::ADD,
        ArithExpr::Bin(ArithOp::Mul | ArithOp::Div, ..) => prec::MUL,
    }
}

pub(crate) fn write_bool(out: &mut String, e: &BoolExpr, min: u8, style: Style) {
    let level = bool_level(e);
    let paren = level < min;
    if paren {
        out.push('(');
    }
    match e {
        BoolExpr::Const(b) => out.push_str(if *b { "true" } else { "false" }),
        BoolExpr::Atom(name) => style.ident(out, name),
        BoolExpr::FnApp(name, args) => write_app(out, name, args, style),
        BoolExpr::Comparison(l, op, r) => {
            write_arith(out, l, prec::ADD, style);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_arith(out, r, prec::ADD, style);
        }
        BoolExpr::Not(a) => {
            out.push('!');
            write_bool(out, a, prec::UNARY, style);
        }
        BoolExpr::And(a, b) => write_infix(out, a, " & ", b, prec::AND, false, style),
        BoolExpr::Or(a, b) => write_infix(out, a, " | ", b, prec::OR, false, style),
        BoolExpr::Iff(a, b) => write_infix(out, a, " <=> ", b, prec::IFF, false, style),
        BoolExpr::Implies(a, b) => write_infix(out, a, " => ", b, prec::IMPLIES, true, style),
        BoolExpr::IfThenElse(c, t, f) => {
            out.push_str("if ");
            write_bool(out, c, prec::IFF, style);
            out.push_str(" then ");
            write_bool(out, t, prec::IFF, style);
            out.push_str(" else ");
            write_bool(out, f, prec::BINDER, style);
        }
        BoolExpr::Quant(kind, var, body) => {
            out.push_str(match kind {
                QuantKind::Forall => "forall ",
                QuantKind::Exists => "exists ",
            });
            style.ident(out, var);
            out.push_str(": ");
            write_bool(out, body, prec::BINDER, style);
        }
    }
    if paren {
        out.push(')');
    }
}

fn write_infix(
    out: &mut String,
    a: &BoolExpr,
    op: &str,
    b: &BoolExpr,
    level: u8,
    right_assoc: bool,
    style: Style,
) {
    let (lmin, rmin) = if right_assoc {
        (level + 1, level)
    } else {
        (level, level + 1)
    };
    write_bool(out, a, lmin, style);
    out.push_str(op);
    write_bool(out, b, rmin, style);
}

fn write_app(out: &mut String, name: &str, args: &[ArithExpr], style: Style) {
    style.ident(out, name);
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_arith(out, a, prec::ADD, style);
    }
    out.push(')');
}

pub(crate) fn write_arith(out: &mut String, e: &ArithExpr, min: u8, style: Style) {
    let level = arith_level(e);
    let paren = level < min;
    if paren {
        out.push('(');
    }
    match e {
        ArithExpr::Var(name) => style.ident(out, name),
        ArithExpr::Num(n) => out.push_str(&n.to_string()),
        ArithExpr::Sym(s) => out.push_str(&format!("{s:?}")),
        ArithExpr::App(name, args) => write_app(out, name, args, style),
        ArithExpr::Neg(a) => {
            out.push('-');
            write_arith(out, a, prec::UNARY, style);
        }
        ArithExpr::Bin(op, a, b) => {
            write_arith(out, a, level, style);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_arith(out, b, level + 1, style);
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_bool(&mut out, self, prec::BINDER, Style::default());
        f.write_str(&out)
    }
}

impl fmt::Display for ArithExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_arith(&mut out, self, prec::ADD, Style::default());
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> BoolExpr {
        BoolExpr::atom(n)
    }

    #[test]
    fn prints_with_minimal_parentheses() {
        let e = BoolExpr::implies(BoolExpr::and(a("a"), a("b")), a("c"));
        assert_eq!(e.to_string(), "a & b => c");
        let e = BoolExpr::and(a("a"), BoolExpr::or(a("b"), a("c")));
        assert_eq!(e.to_string(), "a & (b | c)");
        let e = BoolExpr::or(a("a"), BoolExpr::or(a("b"), a("c")));
        assert_eq!(e.to_string(), "a | (b | c)");
        let e = BoolExpr::implies(a("a"), BoolExpr::implies(a("b"), a("c")));
        assert_eq!(e.to_string(), "a => b => c");
        let e = BoolExpr::not(BoolExpr::not(a("p")));
        assert_eq!(e.to_string(), "!!p");
        let e = BoolExpr::not(BoolExpr::cmp(
            ArithExpr::App("position".into(), vec![ArithExpr::var("SV")]),
            CmpOp::Eq,
            ArithExpr::App("position".into(), vec![ArithExpr::var("TGT")]),
        ));
        assert_eq!(e.to_string(), "!(position(SV) = position(TGT))");
        let sub = ArithExpr::Bin(
            ArithOp::Sub,
            Box::new(ArithExpr::var("a")),
            Box::new(ArithExpr::Bin(
                ArithOp::Sub,
                Box::new(ArithExpr::var("b")),
                Box::new(ArithExpr::num(1.5)),
            )),
        );
        assert_eq!(sub.to_string(), "a - (b - 1.5)");
    }

    #[test]
    fn leaf_evaluation_uses_values() {
        let mut env = BTreeMap::new();
        env.insert("battery".to_string(), Value::Num(3.0));
        env.insert("mode".to_string(), Value::Sym("Idle".into()));
        env.insert("grasp(TGT, BGP)".to_string(), Value::Bool(true));
        let e = BoolExpr::cmp(ArithExpr::var("battery"), CmpOp::Gt, ArithExpr::num(0.0));
        assert_eq!(e.eval_leaf(&env), Ok(true));
        assert_eq!(BoolExpr::var_is("mode", "Idle").eval_leaf(&env), Ok(true));
        let app = BoolExpr::FnApp(
            "grasp".into(),
            vec![ArithExpr::var("TGT"), ArithExpr::var("BGP")],
        );
        assert_eq!(app.eval_leaf(&env), Ok(true));
        assert_eq!(
            a("near").eval_leaf(&env),
            Err(EvalError::MissingVariable("near".into()))
        );
        assert!(matches!(
            a("battery").eval_leaf(&env),
            Err(EvalError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn substitution_respects_binders() {
        let body = BoolExpr::implies(
            BoolExpr::FnApp("fault".into(), vec![ArithExpr::var("s")]),
            BoolExpr::FnApp("flagged".into(), vec![ArithExpr::var("s")]),
        );
        assert_eq!(body.substitute("s", "s1").to_string(), "fault(s1) => flagged(s1)");
        let q = BoolExpr::Quant(QuantKind::Forall, "s".into(), Box::new(body));
        assert_eq!(q.substitute("s", "s1"), q);
    }

    #[test]
    fn variable_kinds() {
        let e = BoolExpr::and(
            BoolExpr::cmp(ArithExpr::var("x"), CmpOp::Ne, ArithExpr::num(0.0)),
            BoolExpr::and(BoolExpr::var_is("__mode", "M"), a("p")),
        );
        let vars = e.variables();
        assert_eq!(vars["x"], VarKind::Number);
        assert_eq!(vars["__mode"], VarKind::Symbol);
        assert_eq!(vars["p"], VarKind::Bool);
    }
}
