//! Structured requirements: parsing, temporal-logic compilation, runtime
//! monitoring and requirement-set management.

pub mod expr;
pub mod lane;
pub mod monitor;
pub mod parser;
pub mod requirement;
pub mod semantics;
pub mod store;
pub mod value;

pub use expr::{ArithExpr, ArithOp, BoolExpr, CmpOp, Env, EvalError, QuantKind, VarKind};
pub use lane::{Judged, Lane};
pub use parser::{parse_expr, parse_requirement, pretty_print, FieldSpans, ParseError, ParseErrorKind};
pub use requirement::{
    ConditionSpec, Duration, Requirement, ScopeSpec, SourceText, TimeUnit, TimingSpec,
    TriggerKeyword,
};
pub use value::Value;
