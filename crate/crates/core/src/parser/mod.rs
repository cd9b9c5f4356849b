//! FRETISH text to structured requirements and back.

mod expression;
mod grammar;
mod lexer;
mod printer;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use expression::{to_bool, BinOp, ExprParser, Raw, RawKind, SyntaxError};
pub use grammar::{parse_condition, parse_expr, parse_requirement, parse_scope, parse_timing};
pub use lexer::{tokenize, Keyword, LexError, Op, Span, Token, TokenKind};
pub use printer::{condition_text, pretty_print, scope_text, timing_text};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Scope,
    Condition,
    Component,
    Shall,
    Timing,
    Response,
    Expression,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Scope => "scope",
            Field::Condition => "condition",
            Field::Component => "component",
            Field::Shall => "shall",
            Field::Timing => "timing",
            Field::Response => "response",
            Field::Expression => "expression",
        })
    }
}

/// Character ranges of each recognized field in the source sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpans {
    pub scope: Option<Span>,
    pub condition: Option<Span>,
    pub component: Option<Span>,
    pub shall: Option<Span>,
    pub timing: Option<Span>,
    pub response: Option<Span>,
}

impl FieldSpans {
    /// Present spans in sentence order.
    pub fn ordered(&self) -> Vec<(Field, Span)> {
        [
            (Field::Scope, self.scope),
            (Field::Condition, self.condition),
            (Field::Component, self.component),
            (Field::Shall, self.shall),
            (Field::Timing, self.timing),
            (Field::Response, self.response),
        ]
        .into_iter()
        .filter_map(|(f, s)| s.map(|s| (f, s)))
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("missing `shall`")]
    MissingShall,
    #[error("missing component before `shall`")]
    MissingComponent,
    #[error("missing response after `shall`")]
    MissingResponse,
    #[error("malformed {field}: {reason}")]
    Malformed { field: Field, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} (at offset {})", span.start)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, span: Span) -> Self {
        ParseError { kind, span }
    }

    pub(crate) fn malformed(field: Field, err: SyntaxError) -> Self {
        ParseError::new(
            ParseErrorKind::Malformed {
                field,
                reason: err.reason,
            },
            err.span,
        )
    }

    pub fn offset(&self) -> usize {
        self.span.start
    }

    /// One-based line and column of the error start within `text`.
    pub fn line_col(&self, text: &str) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for c in text.chars().take(self.span.start) {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    /// `line:col: message`
    pub fn render(&self, text: &str) -> String {
        let (line, col) = self.line_col(text);
        format!("{line}:{col}: {}", self.kind)
    }
}

impl From<LexError> for ParseError {
    fn from(e: LexError) -> Self {
        let at = e.offset();
        ParseError::new(ParseErrorKind::Lex(e), Span::new(at, at + 1))
    }
}
