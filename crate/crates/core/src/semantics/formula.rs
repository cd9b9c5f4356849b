//! Finite-trace temporal formulas over state predicates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::expr::{bool_level, prec, write_bool, BoolExpr, Style};
use crate::parser::{
    to_bool, tokenize, BinOp, ExprParser, Field, ParseError, Raw, RawKind, SyntaxError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bound {
    pub lo: u64,
    pub hi: u64,
}

impl Bound {
    pub fn new(lo: u64, hi: u64) -> Self {
        debug_assert!(lo <= hi);
        Bound { lo, hi }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", content = "args", rename_all = "snake_case")]
pub enum TemporalFormula {
    /// A temporal-free state predicate.
    Atom(BoolExpr),
    /// True exactly at the last position of the trace.
    End,
    Not(Box<TemporalFormula>),
    And(Box<TemporalFormula>, Box<TemporalFormula>),
    Or(Box<TemporalFormula>, Box<TemporalFormula>),
    Implies(Box<TemporalFormula>, Box<TemporalFormula>),
    Iff(Box<TemporalFormula>, Box<TemporalFormula>),
    Globally(Box<TemporalFormula>),
    Finally(Box<TemporalFormula>),
    Next(Box<TemporalFormula>),
    Until(Box<TemporalFormula>, Box<TemporalFormula>),
    BoundedGlobally(Bound, Box<TemporalFormula>),
    BoundedFinally(Bound, Box<TemporalFormula>),
    Historically(Box<TemporalFormula>),
    Once(Box<TemporalFormula>),
    Yesterday(Box<TemporalFormula>),
    Since(Box<TemporalFormula>, Box<TemporalFormula>),
    BoundedHistorically(Bound, Box<TemporalFormula>),
    BoundedOnce(Bound, Box<TemporalFormula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// No temporal operator at all.
    State,
    Future,
    Past,
    Mixed,
}

impl Direction {
    fn join(self, other: Direction) -> Direction {
        use Direction::*;
        match (self, other) {
            (State, d) | (d, State) => d,
            (a, b) if a == b => a,
            _ => Mixed,
        }
    }
}

type F = TemporalFormula;

// The constructors keep temporal-free subtrees collapsed into one atom.
impl TemporalFormula {
    pub fn atom(e: BoolExpr) -> F {
        F::Atom(e)
    }

    pub fn truth(b: bool) -> F {
        F::Atom(BoolExpr::Const(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: F) -> F {
        match f {
            F::Atom(e) => F::Atom(BoolExpr::not(e)),
            f => F::Not(Box::new(f)),
        }
    }

    pub fn and(a: F, b: F) -> F {
        match (a, b) {
            (F::Atom(x), F::Atom(y)) => F::Atom(BoolExpr::and(x, y)),
            (a, b) => F::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(a: F, b: F) -> F {
        match (a, b) {
            (F::Atom(x), F::Atom(y)) => F::Atom(BoolExpr::or(x, y)),
            (a, b) => F::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn implies(a: F, b: F) -> F {
        match (a, b) {
            (F::Atom(x), F::Atom(y)) => F::Atom(BoolExpr::implies(x, y)),
            (a, b) => F::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn iff(a: F, b: F) -> F {
        match (a, b) {
            (F::Atom(x), F::Atom(y)) => F::Atom(BoolExpr::iff(x, y)),
            (a, b) => F::Iff(Box::new(a), Box::new(b)),
        }
    }

    pub fn globally(f: F) -> F {
        F::Globally(Box::new(f))
    }

    pub fn finally(f: F) -> F {
        F::Finally(Box::new(f))
    }

    pub fn next(f: F) -> F {
        F::Next(Box::new(f))
    }

    pub fn until(a: F, b: F) -> F {
        F::Until(Box::new(a), Box::new(b))
    }

    pub fn globally_within(lo: u64, hi: u64, f: F) -> F {
        F::BoundedGlobally(Bound::new(lo, hi), Box::new(f))
    }

    pub fn finally_within(lo: u64, hi: u64, f: F) -> F {
        F::BoundedFinally(Bound::new(lo, hi), Box::new(f))
    }

    pub fn historically(f: F) -> F {
        F::Historically(Box::new(f))
    }

    pub fn once(f: F) -> F {
        F::Once(Box::new(f))
    }

    pub fn yesterday(f: F) -> F {
        F::Yesterday(Box::new(f))
    }

    pub fn since(a: F, b: F) -> F {
        F::Since(Box::new(a), Box::new(b))
    }

    pub fn historically_within(lo: u64, hi: u64, f: F) -> F {
        F::BoundedHistorically(Bound::new(lo, hi), Box::new(f))
    }

    pub fn once_within(lo: u64, hi: u64, f: F) -> F {
        F::BoundedOnce(Bound::new(lo, hi), Box::new(f))
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&F> {
        match self {
            F::Atom(_) | F::End => vec![],
            F::Not(a)
            | F::Globally(a)
            | F::Finally(a)
            | F::Next(a)
            | F::BoundedGlobally(_, a)
            | F::BoundedFinally(_, a)
            | F::Historically(a)
            | F::Once(a)
            | F::Yesterday(a)
            | F::BoundedHistorically(_, a)
            | F::BoundedOnce(_, a) => vec![a],
            F::And(a, b)
            | F::Or(a, b)
            | F::Implies(a, b)
            | F::Iff(a, b)
            | F::Until(a, b)
            | F::Since(a, b) => vec![a, b],
        }
    }

    pub fn direction(&self) -> Direction {
        let own = match self {
            F::Globally(_)
            | F::Finally(_)
            | F::Next(_)
            | F::Until(..)
            | F::BoundedGlobally(..)
            | F::BoundedFinally(..) => Direction::Future,
            F::Historically(_)
            | F::Once(_)
            | F::Yesterday(_)
            | F::Since(..)
            | F::BoundedHistorically(..)
            | F::BoundedOnce(..) => Direction::Past,
            _ => Direction::State,
        };
        self.children()
            .into_iter()
            .fold(own, |d, c| d.join(c.direction()))
    }

    pub fn is_pure_future(&self) -> bool {
        matches!(self.direction(), Direction::State | Direction::Future)
    }

    pub fn is_pure_past(&self) -> bool {
        matches!(self.direction(), Direction::State | Direction::Past)
    }

    /// Leaf predicates of all atoms, first occurrence first.
    pub fn propositions(&self) -> Vec<&BoolExpr> {
        let mut out = Vec::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props<'a>(&'a self, out: &mut Vec<&'a BoolExpr>) {
        if let F::Atom(e) = self {
            e.collect_leaves(out);
        }
        for c in self.children() {
            c.collect_props(out);
        }
    }

    pub fn has_end(&self) -> bool {
        matches!(self, F::End) || self.children().into_iter().any(F::has_end)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(F::size).sum::<usize>()
    }

    /// Removes double negations, pushes negation into state predicates and
    /// left-associates conjunction and disjunction chains.
    pub fn normalize(&self) -> F {
        let b = |f: &F| Box::new(f.normalize());
        match self {
            F::Atom(e) => F::Atom(normalize_bool(e)),
            F::End => F::End,
            F::Not(a) => match &**a {
                F::Not(inner) => inner.normalize(),
                F::Atom(e) => F::Atom(normalize_bool(&BoolExpr::not(e.clone()))),
                _ => F::Not(b(a)),
            },
            F::And(x, y) => F::and(x.normalize(), y.normalize()),
            F::Or(x, y) => F::or(x.normalize(), y.normalize()),
            F::Implies(x, y) => F::implies(x.normalize(), y.normalize()),
            F::Iff(x, y) => F::iff(x.normalize(), y.normalize()),
            F::Globally(a) => F::Globally(b(a)),
            F::Finally(a) => F::Finally(b(a)),
            F::Next(a) => F::Next(b(a)),
            F::Until(x, y) => F::Until(b(x), b(y)),
            F::BoundedGlobally(k, a) => F::BoundedGlobally(*k, b(a)),
            F::BoundedFinally(k, a) => F::BoundedFinally(*k, b(a)),
            F::Historically(a) => F::Historically(b(a)),
            F::Once(a) => F::Once(b(a)),
            F::Yesterday(a) => F::Yesterday(b(a)),
            F::Since(x, y) => F::Since(b(x), b(y)),
            F::BoundedHistorically(k, a) => F::BoundedHistorically(*k, b(a)),
            F::BoundedOnce(k, a) => F::BoundedOnce(*k, b(a)),
        }
    }

    pub fn parse(text: &str) -> Result<F, ParseError> {
        let toks = tokenize(text)?;
        let raw = ExprParser::temporal(&toks)
            .parse_all()
            .map_err(|e| ParseError::malformed(Field::Expression, e))?;
        from_raw(&raw).map_err(|e| ParseError::malformed(Field::Expression, e))
    }

    fn level(&self) -> u8 {
        match self {
            F::Atom(e) => bool_level(e),
            F::End => prec::PRIMARY,
            F::And(..) => prec::AND,
            F::Or(..) => prec::OR,
            F::Implies(..) => prec::IMPLIES,
            F::Iff(..) => prec::IFF,
            F::Until(..) | F::Since(..) => prec::TEMPORAL_BIN,
            _ => prec::UNARY,
        }
    }

    fn write(&self, out: &mut String, min: u8) {
        let style = Style { formula: true };
        if let F::Atom(e) = self {
            write_bool(out, e, min, style);
            return;
        }
        let level = self.level();
        let paren = level < min;
        if paren {
            out.push('(');
        }
        let unary = |out: &mut String, op: &str, a: &F| {
            out.push_str(op);
            out.push(' ');
            a.write(out, prec::UNARY);
        };
        let bounded = |out: &mut String, op: &str, k: &Bound, a: &F| {
            out.push_str(&format!("{op}[{},{}] ", k.lo, k.hi));
            a.write(out, prec::UNARY);
        };
        let infix = |out: &mut String, a: &F, op: &str, b: &F, right_assoc: bool| {
            let (l, r) = if right_assoc { (level + 1, level) } else { (level, level + 1) };
            a.write(out, l);
            out.push_str(op);
            b.write(out, r);
        };
        match self {
            F::Atom(_) => unreachable!(),
            F::End => out.push_str("END"),
            F::Not(a) => {
                out.push('!');
                a.write(out, prec::UNARY);
            }
            F::And(a, b) => infix(out, a, " & ", b, false),
            F::Or(a, b) => infix(out, a, " | ", b, false),
            F::Implies(a, b) => infix(out, a, " => ", b, true),
            F::Iff(a, b) => infix(out, a, " <=> ", b, false),
            F::Until(a, b) => infix(out, a, " U ", b, false),
            F::Since(a, b) => infix(out, a, " S ", b, false),
            F::Globally(a) => unary(out, "G", a),
            F::Finally(a) => unary(out, "F", a),
            F::Next(a) => unary(out, "X", a),
            F::Historically(a) => unary(out, "H", a),
            F::Once(a) => unary(out, "O", a),
            F::Yesterday(a) => unary(out, "Y", a),
            F::BoundedGlobally(k, a) => bounded(out, "G", k, a),
            F::BoundedFinally(k, a) => bounded(out, "F", k, a),
            F::BoundedHistorically(k, a) => bounded(out, "H", k, a),
            F::BoundedOnce(k, a) => bounded(out, "O", k, a),
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for TemporalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write(&mut out, prec::BINDER);
        f.write_str(&out)
    }
}

impl FromStr for TemporalFormula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TemporalFormula::parse(s)
    }
}

fn has_temporal(raw: &Raw) -> bool {
    match &raw.kind {
        RawKind::Temporal(..) | RawKind::End | RawKind::Bin(BinOp::Until | BinOp::Since, ..) => true,
        RawKind::Ident(_) | RawKind::Num(_) | RawKind::Str(_) | RawKind::Bool(_) => false,
        RawKind::App(_, args) => args.iter().any(has_temporal),
        RawKind::Not(a) | RawKind::Neg(a) | RawKind::Quant(_, _, a) => has_temporal(a),
        RawKind::Bin(_, a, b) => has_temporal(a) || has_temporal(b),
        RawKind::Ite(a, b, c) => has_temporal(a) || has_temporal(b) || has_temporal(c),
    }
}

fn from_raw(raw: &Raw) -> Result<F, SyntaxError> {
    if !has_temporal(raw) {
        return Ok(F::Atom(to_bool(raw)?));
    }
    Ok(match &raw.kind {
        RawKind::End => F::End,
        RawKind::Not(a) => F::not(from_raw(a)?),
        RawKind::Bin(BinOp::And, a, b) => F::and(from_raw(a)?, from_raw(b)?),
        RawKind::Bin(BinOp::Or, a, b) => F::or(from_raw(a)?, from_raw(b)?),
        RawKind::Bin(BinOp::Implies, a, b) => F::implies(from_raw(a)?, from_raw(b)?),
        RawKind::Bin(BinOp::Iff, a, b) => F::iff(from_raw(a)?, from_raw(b)?),
        RawKind::Bin(BinOp::Until, a, b) => F::until(from_raw(a)?, from_raw(b)?),
        RawKind::Bin(BinOp::Since, a, b) => F::since(from_raw(a)?, from_raw(b)?),
        RawKind::Temporal(letter, bound, body) => {
            let body = from_raw(body)?;
            match (*letter, bound) {
                ("G", None) => F::globally(body),
                ("F", None) => F::finally(body),
                ("X", None) => F::next(body),
                ("H", None) => F::historically(body),
                ("O", None) => F::once(body),
                ("Y", None) => F::yesterday(body),
                ("G", Some((lo, hi))) => F::globally_within(*lo, *hi, body),
                ("F", Some((lo, hi))) => F::finally_within(*lo, *hi, body),
                ("H", Some((lo, hi))) => F::historically_within(*lo, *hi, body),
                ("O", Some((lo, hi))) => F::once_within(*lo, *hi, body),
                (l, _) => {
                    return Err(SyntaxError::new(raw.span, format!("`{l}` takes no interval")))
                }
            }
        }
        _ => {
            return Err(SyntaxError::new(
                raw.span,
                "temporal operators may only appear under logical connectives",
            ))
        }
    })
}

/// Double-negation removal, negation pushed into comparisons and through
/// conjunction/disjunction, chains left-associated.
pub fn normalize_bool(e: &BoolExpr) -> BoolExpr {
    let e = push_not(e, false);
    reassociate(&e)
}

fn push_not(e: &BoolExpr, neg: bool) -> BoolExpr {
    use BoolExpr as B;
    match e {
        B::Not(a) => push_not(a, !neg),
        B::Const(b) => B::Const(*b != neg),
        B::Comparison(l, op, r) if neg => B::Comparison(l.clone(), op.negated(), r.clone()),
        B::And(a, b) if neg => B::or(push_not(a, true), push_not(b, true)),
        B::Or(a, b) if neg => B::and(push_not(a, true), push_not(b, true)),
        B::And(a, b) => B::and(push_not(a, false), push_not(b, false)),
        B::Or(a, b) => B::or(push_not(a, false), push_not(b, false)),
        B::Implies(a, b) => wrap(B::implies(push_not(a, false), push_not(b, false)), neg),
        B::Iff(a, b) => wrap(B::iff(push_not(a, false), push_not(b, false)), neg),
        B::IfThenElse(c, t, f) => B::ite(push_not(c, false), push_not(t, neg), push_not(f, neg)),
        B::Quant(k, v, body) => wrap(B::Quant(*k, v.clone(), Box::new(push_not(body, false))), neg),
        leaf => wrap(leaf.clone(), neg),
    }
}

fn wrap(e: BoolExpr, neg: bool) -> BoolExpr {
    if neg {
        BoolExpr::not(e)
    } else {
        e
    }
}

fn reassociate(e: &BoolExpr) -> BoolExpr {
    use BoolExpr as B;
    fn chain(e: &BoolExpr, and: bool, out: &mut Vec<BoolExpr>) {
        match e {
            B::And(a, b) if and => {
                chain(a, and, out);
                chain(b, and, out);
            }
            B::Or(a, b) if !and => {
                chain(a, and, out);
                chain(b, and, out);
            }
            other => out.push(reassociate(other)),
        }
    }
    match e {
        B::And(..) | B::Or(..) => {
            let and = matches!(e, B::And(..));
            let mut items = Vec::new();
            chain(e, and, &mut items);
            let joined = if and {
                B::conjunction(items)
            } else {
                B::disjunction(items)
            };
            joined.expect("chain is non-empty")
        }
        B::Not(a) => B::not(reassociate(a)),
        B::Implies(a, b) => B::implies(reassociate(a), reassociate(b)),
        B::Iff(a, b) => B::iff(reassociate(a), reassociate(b)),
        B::IfThenElse(c, t, f) => B::ite(reassociate(c), reassociate(t), reassociate(f)),
        B::Quant(k, v, body) => B::Quant(*k, v.clone(), Box::new(reassociate(body))),
        leaf => leaf.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expr;

    fn p(s: &str) -> F {
        F::atom(parse_expr(s).unwrap())
    }

    #[test]
    fn prints_canonical_text() {
        let f = F::globally(p("battery > 0"));
        assert_eq!(f.to_string(), "G (battery > 0)");
        let f = F::until(p("r"), F::or(p("u"), F::and(p("r"), F::End)));
        assert_eq!(f.to_string(), "r U (u | r & END)");
        let f = F::historically(F::implies(p("grasp"), p("near")));
        assert_eq!(f.to_string(), "H (grasp => near)");
        let f = F::globally_within(0, 5, F::not(F::next(p("q"))));
        assert_eq!(f.to_string(), "G[0,5] !X q");
        let f = F::since(F::since(p("a"), p("b")), p("c"));
        assert_eq!(f.to_string(), "a S b S c");
        let f = F::since(p("a"), F::since(p("b"), p("c")));
        assert_eq!(f.to_string(), "a S (b S c)");
        assert_eq!(F::globally(p("G")).to_string(), "G `G`");
    }

    #[test]
    fn parses_what_it_prints() {
        for text in [
            "G (battery > 0)",
            "r U (u | r & END)",
            "H (x != 0 & y != 0 & z != 0)",
            "G[0,5] !X q",
            "a S (b S c)",
            "F[2,3] (p => q) & O[0,1] Y p",
            "H (s S s & c & !Y (s & c) => r)",
            "G `G`",
            "!(a U b) | X END",
        ] {
            let f = F::parse(text).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(F::parse(&f.to_string()).unwrap(), f);
        }
        assert!(F::parse("X[0,1] p").is_err());
        assert!(F::parse("G[3,1] p").is_err());
        assert!(F::parse("(G p) > 1").is_err());
    }

    #[test]
    fn temporal_free_subtrees_collapse() {
        let f = F::parse("a & !b U c").unwrap();
        assert_eq!(f, F::and(p("a"), F::until(p("!b"), p("c"))));
        assert!(matches!(f, F::And(ref a, _) if matches!(**a, F::Atom(_))));
    }

    #[test]
    fn direction_purity() {
        assert!(F::parse("G (p => F q)").unwrap().is_pure_future());
        assert!(F::parse("H (p => O q)").unwrap().is_pure_past());
        assert_eq!(F::parse("G O p").unwrap().direction(), Direction::Mixed);
        assert_eq!(F::parse("p & END").unwrap().direction(), Direction::State);
    }

    #[test]
    fn normalizer_moves_negation_inward() {
        let f = F::historically(p("!(x = 0 | y = 0 | z = 0)")).normalize();
        assert_eq!(f.to_string(), "H (x != 0 & y != 0 & z != 0)");
        assert_eq!(p("!!p").normalize(), p("p"));
        assert_eq!(F::not(F::not(F::globally(p("p")))).normalize(), F::globally(p("p")));
        assert_eq!(p("a & (b & c)").normalize(), p("a & b & c"));
    }

    #[test]
    fn json_tree_round_trip() {
        let f = F::parse("G[1,4] (x > 1) U Y END").unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with("{\"op\":\"until\""));
        let back: F = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
