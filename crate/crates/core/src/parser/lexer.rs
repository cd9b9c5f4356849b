use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::requirement::TimeUnit;

/// Half-open range of character (not byte) offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keyword {
    In,
    When,
    If,
    Upon,
    Whenever,
    While,
    Shall,
    Always,
    Eventually,
    Never,
    Until,
    Before,
    After,
    For,
    Within,
    Immediately,
    At,
    The,
    Next,
    Timepoint,
    Then,
    Else,
    True,
    False,
    Forall,
    Exists,
    Unit(TimeUnit),
}

impl Keyword {
    pub fn from_word(word: &str) -> Option<Keyword> {
        use Keyword::*;
        Some(match word {
            "in" => In,
            "when" => When,
            "if" => If,
            "upon" => Upon,
            "whenever" => Whenever,
            "while" => While,
            "shall" => Shall,
            "always" => Always,
            "eventually" => Eventually,
            "never" => Never,
            "until" => Until,
            "before" => Before,
            "after" => After,
            "for" => For,
            "within" => Within,
            "immediately" => Immediately,
            "at" => At,
            "the" => The,
            "next" => Next,
            "timepoint" => Timepoint,
            "then" => Then,
            "else" => Else,
            "true" => True,
            "false" => False,
            "forall" => Forall,
            "exists" => Exists,
            "tick" | "ticks" => Unit(TimeUnit::Tick),
            "second" | "seconds" => Unit(TimeUnit::Second),
            "minute" | "minutes" => Unit(TimeUnit::Minute),
            "hour" | "hours" => Unit(TimeUnit::Hour),
            _ => return None,
        })
    }

    pub fn is_reserved(word: &str) -> bool {
        Keyword::from_word(word).is_some()
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Keyword::In => "in",
            Keyword::When => "when",
            Keyword::If => "if",
            Keyword::Upon => "upon",
            Keyword::Whenever => "whenever",
            Keyword::While => "while",
            Keyword::Shall => "shall",
            Keyword::Always => "always",
            Keyword::Eventually => "eventually",
            Keyword::Never => "never",
            Keyword::Until => "until",
            Keyword::Before => "before",
            Keyword::After => "after",
            Keyword::For => "for",
            Keyword::Within => "within",
            Keyword::Immediately => "immediately",
            Keyword::At => "at",
            Keyword::The => "the",
            Keyword::Next => "next",
            Keyword::Timepoint => "timepoint",
            Keyword::Then => "then",
            Keyword::Else => "else",
            Keyword::True => "true",
            Keyword::False => "false",
            Keyword::Forall => "forall",
            Keyword::Exists => "exists",
            Keyword::Unit(u) => u.name(false),
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Not => "!",
            Op::And => "&",
            Op::Or => "|",
            Op::Implies => "=>",
            Op::Iff => "<=>",
            Op::Eq => "=",
            Op::Ne => "!=",
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Ge => ">=",
            Op::Plus => "+",
            Op::Minus => "-",
            Op::Star => "*",
            Op::Slash => "/",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Ident(String),
    /// A backtick-quoted identifier, never read as an operator letter.
    QuotedIdent(String),
    Kw(Keyword),
    Num { value: f64, integer: Option<u64> },
    Str(String),
    Op(Op),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "Ident({s})"),
            TokenKind::QuotedIdent(s) => write!(f, "Ident(`{s}`)"),
            TokenKind::Kw(k) => write!(f, "Kw({k})"),
            TokenKind::Num { value, .. } => write!(f, "Num({value})"),
            TokenKind::Str(s) => write!(f, "Str({s:?})"),
            TokenKind::Op(o) => write!(f, "Op({})", o.symbol()),
            TokenKind::LParen => f.write_str("("),
            TokenKind::RParen => f.write_str(")"),
            TokenKind::LBracket => f.write_str("["),
            TokenKind::RBracket => f.write_str("]"),
            TokenKind::Comma => f.write_str(","),
            TokenKind::Colon => f.write_str(":"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

impl Token {
    pub fn ident(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Ident(s) | TokenKind::QuotedIdent(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_kw(&self, kw: Keyword) -> bool {
        self.kind == TokenKind::Kw(kw)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("empty input")]
    Empty,
    #[error("unrecognized character {ch:?} at offset {offset}")]
    IllegalChar { offset: usize, ch: char },
    #[error("unterminated string literal starting at offset {offset}")]
    UnterminatedString { offset: usize },
    #[error("malformed number at offset {offset}")]
    BadNumber { offset: usize },
}

impl LexError {
    pub fn offset(&self) -> usize {
        match self {
            LexError::Empty => 0,
            LexError::IllegalChar { offset, .. }
            | LexError::UnterminatedString { offset }
            | LexError::BadNumber { offset } => *offset,
        }
    }
}

/// Splits `text` into tokens. Offsets are character positions.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    if text.trim().is_empty() {
        return Err(LexError::Empty);
    }
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let kind = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match Keyword::from_word(&word) {
                Some(kw) => TokenKind::Kw(kw),
                None => TokenKind::Ident(word),
            }
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut integer = true;
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                integer = false;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(LexError::BadNumber { offset: start });
            }
            let lit: String = chars[start..i].iter().collect();
            let value: f64 = lit.parse().map_err(|_| LexError::BadNumber { offset: start })?;
            TokenKind::Num {
                value,
                integer: if integer { lit.parse().ok() } else { None },
            }
        } else if c == '"' {
            i += 1;
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(LexError::UnterminatedString { offset: start }),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') if i + 1 < chars.len() => {
                        s.push(chars[i + 1]);
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            TokenKind::Str(s)
        } else if c == '`' {
            i += 1;
            let name_start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if i == name_start || chars.get(i) != Some(&'`') {
                return Err(LexError::IllegalChar { offset: start, ch: c });
            }
            let name: String = chars[name_start..i].iter().collect();
            i += 1;
            TokenKind::QuotedIdent(name)
        } else {
            let next = chars.get(i + 1).copied();
            let next2 = chars.get(i + 2).copied();
            let (op, len) = match (c, next, next2) {
                ('<', Some('='), Some('>')) => (TokenKind::Op(Op::Iff), 3),
                ('<', Some('='), _) => (TokenKind::Op(Op::Le), 2),
                ('>', Some('='), _) => (TokenKind::Op(Op::Ge), 2),
                ('=', Some('>'), _) => (TokenKind::Op(Op::Implies), 2),
                ('!', Some('='), _) => (TokenKind::Op(Op::Ne), 2),
                ('<', ..) => (TokenKind::Op(Op::Lt), 1),
                ('>', ..) => (TokenKind::Op(Op::Gt), 1),
                ('=', ..) => (TokenKind::Op(Op::Eq), 1),
                ('!', ..) => (TokenKind::Op(Op::Not), 1),
                ('&', ..) => (TokenKind::Op(Op::And), 1),
                ('|', ..) => (TokenKind::Op(Op::Or), 1),
                ('+', ..) => (TokenKind::Op(Op::Plus), 1),
                ('-', ..) => (TokenKind::Op(Op::Minus), 1),
                ('*', ..) => (TokenKind::Op(Op::Star), 1),
                ('/', ..) => (TokenKind::Op(Op::Slash), 1),
                ('(', ..) => (TokenKind::LParen, 1),
                (')', ..) => (TokenKind::RParen, 1),
                ('[', ..) => (TokenKind::LBracket, 1),
                (']', ..) => (TokenKind::RBracket, 1),
                (',', ..) => (TokenKind::Comma, 1),
                (':', ..) => (TokenKind::Colon, 1),
                _ => return Err(LexError::IllegalChar { offset: start, ch: c }),
            };
            i += len;
            op
        };
        tokens.push(Token {
            kind,
            span: Span::new(start, i),
        });
    }
    Ok(tokens)
}
