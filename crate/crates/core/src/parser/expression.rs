//! Precedence-climbing parser producing an untyped tree, plus the pass that
//! sorts it into boolean and arithmetic expressions.

use crate::expr::{prec, ArithExpr, ArithOp, BoolExpr, CmpOp, QuantKind};

use super::lexer::{Keyword, Op, Span, Token, TokenKind};

const MAX_DEPTH: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct SyntaxError {
    pub span: Span,
    pub reason: String,
}

impl SyntaxError {
    pub(crate) fn new(span: Span, reason: impl Into<String>) -> Self {
        SyntaxError {
            span,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BinOp {
    And,
    Or,
    Implies,
    Iff,
    Cmp(CmpOp),
    Arith(ArithOp),
    Until,
    Since,
}

impl BinOp {
    /// (left binding power, right binding power)
    fn power(self) -> (u8, u8) {
        match self {
            BinOp::Iff => (prec::IFF, prec::IFF + 1),
            BinOp::Implies => (prec::IMPLIES, prec::IMPLIES),
            BinOp::Or => (prec::OR, prec::OR + 1),
            BinOp::And => (prec::AND, prec::AND + 1),
            BinOp::Until | BinOp::Since => (prec::TEMPORAL_BIN, prec::TEMPORAL_BIN + 1),
            BinOp::Cmp(_) => (prec::CMP, prec::CMP + 1),
            BinOp::Arith(ArithOp::Add | ArithOp::Sub) => (prec::ADD, prec::ADD + 1),
            BinOp::Arith(ArithOp::Mul | ArithOp::Div) => (prec::MUL, prec::MUL + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum RawKind {
    Ident(String),
    Num(f64),
    Str(String),
    Bool(bool),
    App(String, Vec<Raw>),
    Not(Box<Raw>),
    Neg(Box<Raw>),
    Bin(BinOp, Box<Raw>, Box<Raw>),
    Ite(Box<Raw>, Box<Raw>, Box<Raw>),
    Quant(QuantKind, String, Box<Raw>),
    /// Prefix temporal operator by letter, with an optional bound.
    Temporal(&'static str, Option<(u64, u64)>, Box<Raw>),
    End,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Raw {
    pub kind: RawKind,
    pub span: Span,
    pub parenthesized: bool,
}

impl Raw {
    fn new(kind: RawKind, span: Span) -> Self {
        Raw {
            kind,
            span,
            parenthesized: false,
        }
    }
}

pub(crate) struct ExprParser<'t> {
    toks: &'t [Token],
    pub pos: usize,
    /// Reads `G F X H O Y U S END` as temporal operators.
    temporal: bool,
    depth: usize,
}

impl<'t> ExprParser<'t> {
    pub(crate) fn new(toks: &'t [Token], pos: usize) -> Self {
        ExprParser {
            toks,
            pos,
            temporal: false,
            depth: 0,
        }
    }

    pub(crate) fn temporal(toks: &'t [Token]) -> Self {
        ExprParser {
            toks,
            pos: 0,
            temporal: true,
            depth: 0,
        }
    }

    pub(crate) fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_span(&self) -> Span {
        let at = self.toks.last().map_or(0, |t| t.span.end);
        Span::new(at, at)
    }

    fn here(&self) -> Span {
        self.peek().map_or_else(|| self.end_span(), |t| t.span)
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<Span, SyntaxError> {
        match self.peek() {
            Some(t) if &t.kind == kind => {
                self.pos += 1;
                Ok(t.span)
            }
            Some(t) => Err(SyntaxError::new(t.span, format!("expected {what}, found {}", t.kind))),
            None => Err(SyntaxError::new(self.end_span(), format!("expected {what}"))),
        }
    }

    /// Parses the longest expression starting at the cursor.
    pub(crate) fn parse(&mut self) -> Result<Raw, SyntaxError> {
        self.parse_bp(0)
    }

    /// Parses an expression and requires that it ends the token slice.
    pub(crate) fn parse_all(&mut self) -> Result<Raw, SyntaxError> {
        let e = self.parse()?;
        match self.peek() {
            None => Ok(e),
            Some(t) => Err(SyntaxError::new(t.span, format!("unexpected {}", t.kind))),
        }
    }

    fn temporal_letter(&self, tok: &Token) -> Option<&'static str> {
        if !self.temporal {
            return None;
        }
        match &tok.kind {
            TokenKind::Ident(s) => ["G", "F", "X", "H", "O", "Y", "U", "S", "END"]
                .into_iter()
                .find(|l| *l == s),
            _ => None,
        }
    }

    fn infix(&self) -> Option<BinOp> {
        let tok = self.peek()?;
        match &tok.kind {
            TokenKind::Op(op) => Some(match op {
                Op::And => BinOp::And,
                Op::Or => BinOp::Or,
                Op::Implies => BinOp::Implies,
                Op::Iff => BinOp::Iff,
                Op::Eq => BinOp::Cmp(CmpOp::Eq),
                Op::Ne => BinOp::Cmp(CmpOp::Ne),
                Op::Lt => BinOp::Cmp(CmpOp::Lt),
                Op::Le => BinOp::Cmp(CmpOp::Le),
                Op::Gt => BinOp::Cmp(CmpOp::Gt),
                Op::Ge => BinOp::Cmp(CmpOp::Ge),
                Op::Plus => BinOp::Arith(ArithOp::Add),
                Op::Minus => BinOp::Arith(ArithOp::Sub),
                Op::Star => BinOp::Arith(ArithOp::Mul),
                Op::Slash => BinOp::Arith(ArithOp::Div),
                Op::Not => return None,
            }),
            _ => match self.temporal_letter(tok) {
                Some("U") => Some(BinOp::Until),
                Some("S") => Some(BinOp::Since),
                _ => None,
            },
        }
    }

    fn parse_bp(&mut self, min: u8) -> Result<Raw, SyntaxError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(SyntaxError::new(self.here(), "expression nested too deeply"));
        }
        let mut lhs = self.prefix()?;
        while let Some(op) = self.infix() {
            let (lbp, rbp) = op.power();
            if lbp < min {
                break;
            }
            let op_span = self.bump().expect("peeked").span;
            if let (BinOp::Cmp(_), RawKind::Bin(BinOp::Cmp(_), ..)) = (op, &lhs.kind) {
                if !lhs.parenthesized {
                    return Err(SyntaxError::new(op_span, "comparisons cannot be chained"));
                }
            }
            let rhs = self.parse_bp(rbp)?;
            if let (BinOp::Cmp(_), RawKind::Bin(BinOp::Cmp(_), ..)) = (op, &rhs.kind) {
                if !rhs.parenthesized {
                    return Err(SyntaxError::new(op_span, "comparisons cannot be chained"));
                }
            }
            let span = lhs.span.join(rhs.span);
            lhs = Raw::new(RawKind::Bin(op, Box::new(lhs), Box::new(rhs)), span);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Raw, SyntaxError> {
        let Some(tok) = self.bump() else {
            return Err(SyntaxError::new(self.end_span(), "expected an expression"));
        };
        let start = tok.span;
        if let Some(letter) = self.temporal_letter(tok) {
            return match letter {
                "END" => Ok(Raw::new(RawKind::End, start)),
                "U" | "S" => Err(SyntaxError::new(start, format!("`{letter}` needs a left operand"))),
                _ => {
                    let bound = if matches!(self.peek(), Some(t) if t.kind == TokenKind::LBracket) {
                        Some(self.bound()?)
                    } else {
                        None
                    };
                    let body = self.parse_bp(prec::UNARY)?;
                    let span = start.join(body.span);
                    Ok(Raw::new(RawKind::Temporal(letter, bound, Box::new(body)), span))
                }
            };
        }
        match &tok.kind {
            TokenKind::Ident(name) | TokenKind::QuotedIdent(name) => {
                let adjacent_paren = matches!(
                    self.peek(),
                    Some(t) if t.kind == TokenKind::LParen && t.span.start == start.end
                );
                if !adjacent_paren {
                    return Ok(Raw::new(RawKind::Ident(name.clone()), start));
                }
                self.pos += 1;
                let mut args = Vec::new();
                if matches!(self.peek(), Some(t) if t.kind == TokenKind::RParen) {
                    self.pos += 1;
                } else {
                    loop {
                        args.push(self.parse_bp(0)?);
                        match self.bump() {
                            Some(t) if t.kind == TokenKind::Comma => continue,
                            Some(t) if t.kind == TokenKind::RParen => break,
                            Some(t) => {
                                return Err(SyntaxError::new(
                                    t.span,
                                    format!("expected `,` or `)`, found {}", t.kind),
                                ))
                            }
                            None => return Err(SyntaxError::new(self.end_span(), "unclosed `(`")),
                        }
                    }
                }
                let end = self.toks[self.pos - 1].span;
                Ok(Raw::new(RawKind::App(name.clone(), args), start.join(end)))
            }
            TokenKind::Num { value, .. } => Ok(Raw::new(RawKind::Num(*value), start)),
            TokenKind::Str(s) => Ok(Raw::new(RawKind::Str(s.clone()), start)),
            TokenKind::Kw(Keyword::True) => Ok(Raw::new(RawKind::Bool(true), start)),
            TokenKind::Kw(Keyword::False) => Ok(Raw::new(RawKind::Bool(false), start)),
            TokenKind::Op(Op::Not) => {
                let body = self.parse_bp(prec::UNARY)?;
                let span = start.join(body.span);
                Ok(Raw::new(RawKind::Not(Box::new(body)), span))
            }
            TokenKind::Op(Op::Minus) => {
                let body = self.parse_bp(prec::UNARY)?;
                let span = start.join(body.span);
                Ok(Raw::new(RawKind::Neg(Box::new(body)), span))
            }
            TokenKind::LParen => {
                let mut inner = self.parse_bp(0)?;
                let close = match self.bump() {
                    Some(t) if t.kind == TokenKind::RParen => t.span,
                    Some(t) => {
                        return Err(SyntaxError::new(t.span, format!("expected `)`, found {}", t.kind)))
                    }
                    None => return Err(SyntaxError::new(start, "unclosed `(`")),
                };
                inner.span = start.join(close);
                inner.parenthesized = true;
                Ok(inner)
            }
            TokenKind::Kw(Keyword::If) => {
                let cond = self.parse_bp(0)?;
                self.expect(&TokenKind::Kw(Keyword::Then), "`then`")?;
                let then = self.parse_bp(0)?;
                self.expect(&TokenKind::Kw(Keyword::Else), "`else`")?;
                let otherwise = self.parse_bp(0)?;
                let span = start.join(otherwise.span);
                Ok(Raw::new(
                    RawKind::Ite(Box::new(cond), Box::new(then), Box::new(otherwise)),
                    span,
                ))
            }
            TokenKind::Kw(kw @ (Keyword::Forall | Keyword::Exists)) => {
                let kind = if *kw == Keyword::Forall {
                    QuantKind::Forall
                } else {
                    QuantKind::Exists
                };
                let var = match self.bump() {
                    Some(t) if t.ident().is_some() => t.ident().unwrap().to_string(),
                    Some(t) => {
                        return Err(SyntaxError::new(t.span, "expected a variable after quantifier"))
                    }
                    None => return Err(SyntaxError::new(self.end_span(), "expected a variable")),
                };
                self.expect(&TokenKind::Colon, "`:`")?;
                let body = self.parse_bp(0)?;
                let span = start.join(body.span);
                Ok(Raw::new(RawKind::Quant(kind, var, Box::new(body)), span))
            }
            other => Err(SyntaxError::new(start, format!("expected an expression, found {other}"))),
        }
    }

    fn bound(&mut self) -> Result<(u64, u64), SyntaxError> {
        self.expect(&TokenKind::LBracket, "`[`")?;
        let lo = self.whole_number()?;
        self.expect(&TokenKind::Comma, "`,`")?;
        let hi = self.whole_number()?;
        let close = self.expect(&TokenKind::RBracket, "`]`")?;
        if lo > hi {
            return Err(SyntaxError::new(close, "empty interval"));
        }
        Ok((lo, hi))
    }

    fn whole_number(&mut self) -> Result<u64, SyntaxError> {
        match self.bump() {
            Some(Token {
                kind: TokenKind::Num {
                    integer: Some(n), ..
                },
                ..
            }) => Ok(*n),
            Some(t) => Err(SyntaxError::new(t.span, "expected a whole number")),
            None => Err(SyntaxError::new(self.end_span(), "expected a whole number")),
        }
    }
}

/// Reads `raw` as a condition.
pub(crate) fn to_bool(raw: &Raw) -> Result<BoolExpr, SyntaxError> {
    let b = |r: &Raw| to_bool(r).map(Box::new);
    Ok(match &raw.kind {
        RawKind::Ident(name) => BoolExpr::Atom(name.clone()),
        RawKind::Bool(v) => BoolExpr::Const(*v),
        RawKind::App(name, args) => BoolExpr::FnApp(
            name.clone(),
            args.iter().map(to_arith).collect::<Result<_, _>>()?,
        ),
        RawKind::Not(a) => BoolExpr::Not(b(a)?),
        RawKind::Bin(BinOp::And, l, r) => BoolExpr::And(b(l)?, b(r)?),
        RawKind::Bin(BinOp::Or, l, r) => BoolExpr::Or(b(l)?, b(r)?),
        RawKind::Bin(BinOp::Implies, l, r) => BoolExpr::Implies(b(l)?, b(r)?),
        RawKind::Bin(BinOp::Iff, l, r) => BoolExpr::Iff(b(l)?, b(r)?),
        RawKind::Bin(BinOp::Cmp(op), l, r) => BoolExpr::Comparison(to_arith(l)?, *op, to_arith(r)?),
        RawKind::Ite(c, t, e) => BoolExpr::IfThenElse(b(c)?, b(t)?, b(e)?),
        RawKind::Quant(kind, var, body) => BoolExpr::Quant(*kind, var.clone(), b(body)?),
        RawKind::Num(_) | RawKind::Str(_) | RawKind::Neg(_) | RawKind::Bin(BinOp::Arith(_), ..) => {
            return Err(SyntaxError::new(raw.span, "expected a condition, found a value"))
        }
        RawKind::Temporal(..) | RawKind::End | RawKind::Bin(BinOp::Until | BinOp::Since, ..) => {
            return Err(SyntaxError::new(raw.span, "temporal operator inside a state expression"))
        }
    })
}

/// Reads `raw` as a value.
pub(crate) fn to_arith(raw: &Raw) -> Result<ArithExpr, SyntaxError> {
    Ok(match &raw.kind {
        RawKind::Ident(name) => ArithExpr::Var(name.clone()),
        RawKind::Num(n) => ArithExpr::Num(*n),
        RawKind::Str(s) => ArithExpr::Sym(s.clone()),
        RawKind::App(name, args) => ArithExpr::App(
            name.clone(),
            args.iter().map(to_arith).collect::<Result<_, _>>()?,
        ),
        RawKind::Neg(a) => ArithExpr::Neg(Box::new(to_arith(a)?)),
        RawKind::Bin(BinOp::Arith(op), l, r) => {
            ArithExpr::Bin(*op, Box::new(to_arith(l)?), Box::new(to_arith(r)?))
        }
        _ => return Err(SyntaxError::new(raw.span, "expected a value, found a condition")),
    })
}
