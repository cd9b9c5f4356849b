use crate::expr::BoolExpr;
use crate::requirement::{
    ConditionSpec, Duration, Requirement, ScopeSpec, SourceText, TimeUnit, TimingSpec,
    TriggerKeyword,
};

use super::expression::{to_bool, ExprParser, SyntaxError};
use super::lexer::{tokenize, Keyword, Span, Token, TokenKind};
use super::{Field, FieldSpans, ParseError, ParseErrorKind};

/// Parses one FRETISH sentence. The returned requirement has an empty id.
pub fn parse_requirement(src: &SourceText) -> Result<(Requirement, FieldSpans), ParseError> {
    let toks = tokenize(&src.text)?;
    let end = toks.last().map_or(0, |t| t.span.end);
    let Some(shall) = toks.iter().position(|t| t.is_kw(Keyword::Shall)) else {
        return Err(ParseError::new(ParseErrorKind::MissingShall, Span::new(end, end)));
    };
    let shall_span = toks[shall].span;
    let head = &toks[..shall];
    let missing_component = || ParseError::new(ParseErrorKind::MissingComponent, shall_span);

    let Some(last) = head.last() else {
        return Err(missing_component());
    };
    let preamble = match last.ident() {
        Some(_) => match preamble(&head[..head.len() - 1]) {
            Ok(p) => p,
            Err(e) => {
                return Err(match preamble(head) {
                    Ok(p) if p.consumed == head.len() => missing_component(),
                    _ => e,
                })
            }
        },
        None => {
            return Err(match preamble(head) {
                Ok(p) if p.consumed == head.len() => missing_component(),
                Ok(p) => ParseError::new(
                    ParseErrorKind::Malformed {
                        field: Field::Component,
                        reason: "component must be a single identifier".into(),
                    },
                    head[p.consumed].span.join(last.span),
                ),
                Err(e) => e,
            })
        }
    };
    if preamble.consumed + 1 < head.len() {
        return Err(ParseError::new(
            ParseErrorKind::Malformed {
                field: Field::Component,
                reason: "component must be a single identifier".into(),
            },
            head[preamble.consumed].span.join(last.span),
        ));
    }

    let tail = &toks[shall + 1..];
    let (timing, timing_span, used) = timing(tail)?;
    let rest = &tail[used..];
    if rest.is_empty() {
        return Err(ParseError::new(ParseErrorKind::MissingResponse, Span::new(end, end)));
    }
    let mut p = ExprParser::new(rest, 0);
    let raw = p
        .parse_all()
        .map_err(|e| ParseError::malformed(Field::Response, e))?;
    let response = to_bool(&raw).map_err(|e| ParseError::malformed(Field::Response, e))?;

    let mut req = Requirement::new(String::new(), last.ident().unwrap(), response);
    req.scope = preamble.scope;
    req.condition = preamble.condition;
    req.timing = timing;
    req.source = Some(src.clone());
    let spans = FieldSpans {
        scope: preamble.scope_span,
        condition: preamble.condition_span,
        component: Some(last.span),
        shall: Some(shall_span),
        timing: timing_span,
        response: Some(span_of(rest)),
    };
    Ok((req, spans))
}

/// Parses a standalone expression such as `a & b => c`.
pub fn parse_expr(text: &str) -> Result<BoolExpr, ParseError> {
    let toks = tokenize(text)?;
    let raw = ExprParser::new(&toks, 0)
        .parse_all()
        .map_err(|e| ParseError::malformed(Field::Expression, e))?;
    to_bool(&raw).map_err(|e| ParseError::malformed(Field::Expression, e))
}

/// Parses scope text such as `in Nominal mode` or `while x > 0`.
pub fn parse_scope(text: &str) -> Result<ScopeSpec, ParseError> {
    let toks = tokenize(text)?;
    let (scope, _, used) = scope(&toks)?;
    require_consumed(&toks, used, Field::Scope)?;
    Ok(scope)
}

/// Parses condition text such as `when a if b`.
pub fn parse_condition(text: &str) -> Result<ConditionSpec, ParseError> {
    let toks = tokenize(text)?;
    let (cond, _, used) = condition(&toks, 0)?;
    require_consumed(&toks, used, Field::Condition)?;
    Ok(cond)
}

/// Parses timing text such as `after 15 minutes`.
pub fn parse_timing(text: &str) -> Result<TimingSpec, ParseError> {
    let toks = tokenize(text)?;
    let (timing, _, used) = timing(&toks)?;
    require_consumed(&toks, used, Field::Timing)?;
    Ok(timing)
}

fn require_consumed(toks: &[Token], used: usize, field: Field) -> Result<(), ParseError> {
    match toks.get(used) {
        None => Ok(()),
        Some(t) => Err(ParseError::malformed(
            field,
            SyntaxError::new(t.span, format!("unexpected {}", t.kind)),
        )),
    }
}

fn span_of(toks: &[Token]) -> Span {
    toks[0].span.join(toks[toks.len() - 1].span)
}

fn span_between(toks: &[Token], from: usize, to: usize) -> Option<Span> {
    (to > from).then(|| span_of(&toks[from..to]))
}

struct Preamble {
    scope: ScopeSpec,
    scope_span: Option<Span>,
    condition: ConditionSpec,
    condition_span: Option<Span>,
    consumed: usize,
}

fn preamble(toks: &[Token]) -> Result<Preamble, ParseError> {
    let (scope, scope_span, pos) = scope(toks)?;
    let (condition, condition_span, consumed) = condition(toks, pos)?;
    Ok(Preamble {
        scope,
        scope_span,
        condition,
        condition_span,
        consumed,
    })
}

fn is_word(tok: Option<&Token>, word: &str) -> bool {
    matches!(tok, Some(Token { kind: TokenKind::Ident(w), .. }) if w == word)
}

fn scope(toks: &[Token]) -> Result<(ScopeSpec, Option<Span>, usize), ParseError> {
    let kw = |i: usize, k: Keyword| toks.get(i).is_some_and(|t| t.is_kw(k));
    type Make = fn(String) -> ScopeSpec;
    let (make, skip): (Make, usize) = if kw(0, Keyword::In) {
        (ScopeSpec::In, 1)
    } else if is_word(toks.first(), "not") && kw(1, Keyword::In) {
        (ScopeSpec::NotIn, 2)
    } else if is_word(toks.first(), "only") && kw(1, Keyword::In) {
        (ScopeSpec::OnlyIn, 2)
    } else if is_word(toks.first(), "only") && kw(1, Keyword::Before) {
        (ScopeSpec::OnlyBefore, 2)
    } else if is_word(toks.first(), "only") && kw(1, Keyword::After) {
        (ScopeSpec::OnlyAfter, 2)
    } else if kw(0, Keyword::Before) {
        (ScopeSpec::Before, 1)
    } else if kw(0, Keyword::After) {
        (ScopeSpec::After, 1)
    } else if kw(0, Keyword::While) {
        let mut p = ExprParser::new(toks, 1);
        let raw = p.parse().map_err(|e| ParseError::malformed(Field::Scope, e))?;
        let guard = to_bool(&raw).map_err(|e| ParseError::malformed(Field::Scope, e))?;
        return Ok((ScopeSpec::While(guard), span_between(toks, 0, p.pos), p.pos));
    } else {
        return Ok((ScopeSpec::Null, None, 0));
    };
    let mode = match toks.get(skip) {
        Some(t) if t.ident().is_some() => t.ident().unwrap().to_string(),
        Some(t) => {
            return Err(ParseError::malformed(
                Field::Scope,
                SyntaxError::new(t.span, format!("expected a mode name, found {}", t.kind)),
            ))
        }
        None => {
            let at = toks[skip - 1].span.end;
            return Err(ParseError::malformed(
                Field::Scope,
                SyntaxError::new(Span::new(at, at), "expected a mode name"),
            ));
        }
    };
    let mut pos = skip + 1;
    // `in M mode`, unless `mode` is the component itself
    if is_word(toks.get(pos), "mode") && !toks.get(pos + 1).is_some_and(|t| t.is_kw(Keyword::Shall)) {
        pos += 1;
    }
    Ok((make(mode), span_between(toks, 0, pos), pos))
}

fn condition(toks: &[Token], start: usize) -> Result<(ConditionSpec, Option<Span>, usize), ParseError> {
    let mut pos = start;
    let mut first: Option<Keyword> = None;
    let mut clauses = Vec::new();
    while let Some(tok) = toks.get(pos) {
        let kw = match tok.kind {
            TokenKind::Kw(k @ (Keyword::When | Keyword::If | Keyword::Upon | Keyword::Whenever)) => k,
            _ => break,
        };
        if let Some(f) = first {
            if (f == Keyword::Whenever) != (kw == Keyword::Whenever) {
                return Err(ParseError::malformed(
                    Field::Condition,
                    SyntaxError::new(tok.span, "`whenever` cannot be combined with other condition keywords"),
                ));
            }
        } else {
            first = Some(kw);
        }
        let mut p = ExprParser::new(toks, pos + 1);
        let raw = p.parse().map_err(|e| ParseError::malformed(Field::Condition, e))?;
        clauses.push(to_bool(&raw).map_err(|e| ParseError::malformed(Field::Condition, e))?);
        pos = p.pos;
    }
    let Some(expr) = BoolExpr::conjunction(clauses) else {
        return Ok((ConditionSpec::Null, None, start));
    };
    let cond = match first.unwrap() {
        Keyword::Whenever => ConditionSpec::Continual { expr },
        Keyword::When => ConditionSpec::Trigger {
            expr,
            keyword: TriggerKeyword::When,
        },
        Keyword::If => ConditionSpec::Trigger {
            expr,
            keyword: TriggerKeyword::If,
        },
        _ => ConditionSpec::Trigger {
            expr,
            keyword: TriggerKeyword::Upon,
        },
    };
    Ok((cond, span_between(toks, start, pos), pos))
}

/// Reads an optional timing phrase; `until` and `before` expressions stop
/// where the response begins.
fn timing(toks: &[Token]) -> Result<(TimingSpec, Option<Span>, usize), ParseError> {
    let malformed = |span: Span, reason: &str| {
        ParseError::malformed(Field::Timing, SyntaxError::new(span, reason))
    };
    let Some(first) = toks.first() else {
        return Ok((TimingSpec::Eventually, None, 0));
    };
    let simple = |t: TimingSpec| Ok((t, Some(first.span), 1));
    match first.kind {
        TokenKind::Kw(Keyword::Eventually) => simple(TimingSpec::Eventually),
        TokenKind::Kw(Keyword::Always) => simple(TimingSpec::Always),
        TokenKind::Kw(Keyword::Never) => simple(TimingSpec::Never),
        TokenKind::Kw(Keyword::Immediately) => simple(TimingSpec::Immediately),
        TokenKind::Kw(Keyword::At) => {
            let words = [Keyword::The, Keyword::Next, Keyword::Timepoint];
            for (i, w) in words.iter().enumerate() {
                match toks.get(i + 1) {
                    Some(t) if t.is_kw(*w) => {}
                    Some(t) => return Err(malformed(t.span, "expected `at the next timepoint`")),
                    None => return Err(malformed(first.span, "expected `at the next timepoint`")),
                }
            }
            Ok((TimingSpec::NextTimepoint, Some(span_of(&toks[..4])), 4))
        }
        TokenKind::Kw(kw @ (Keyword::Until | Keyword::Before)) => {
            let mut p = ExprParser::new(toks, 1);
            let raw = p.parse().map_err(|e| ParseError::malformed(Field::Timing, e))?;
            let e = to_bool(&raw).map_err(|e| ParseError::malformed(Field::Timing, e))?;
            let t = if kw == Keyword::Until {
                TimingSpec::Until(e)
            } else {
                TimingSpec::Before(e)
            };
            Ok((t, span_between(toks, 0, p.pos), p.pos))
        }
        TokenKind::Kw(kw @ (Keyword::After | Keyword::For | Keyword::Within)) => {
            let magnitude = match toks.get(1) {
                Some(Token {
                    kind: TokenKind::Num {
                        integer: Some(n), ..
                    },
                    ..
                }) if *n > 0 => *n,
                Some(t) => return Err(malformed(t.span, "expected a positive whole number")),
                None => return Err(malformed(first.span, "expected a duration")),
            };
            let (unit, used) = match toks.get(2).map(|t| &t.kind) {
                Some(TokenKind::Kw(Keyword::Unit(u))) => (*u, 3),
                _ => (TimeUnit::Tick, 2),
            };
            let d = Duration::new(magnitude, unit);
            let t = match kw {
                Keyword::After => TimingSpec::After(d),
                Keyword::For => TimingSpec::For(d),
                _ => TimingSpec::Within(d),
            };
            Ok((t, Some(span_of(&toks[..used])), used))
        }
        _ => Ok((TimingSpec::Eventually, None, 0)),
    }
}
