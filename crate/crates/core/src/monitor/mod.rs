//! Past-time runtime monitors with four-valued verdicts.

mod automaton;
mod incremental;
mod oracle;
mod oracle_spec;
mod program;
mod trace;
mod verdict;

use thiserror::Error;

use crate::expr::EvalError;

pub use automaton::{
    compile_monitor, compile_monitor_with, AutomatonLimits, AutomatonState, Guard, MonitorAutomaton,
    Transition,
};
pub use incremental::{run_trace, IncrementalMonitor, MonitorState, Run};
pub use oracle::{brute_force_eval, brute_force_verdicts, evaluate_complete, holds_on, judge_prefixes};
pub use oracle_spec::{
    export_oracle_spec, verdict_channel, ExportError, MonitorEntry, OracleSpec, SpecMonitor, VarDecl,
    VerdictRecord, ORACLE_SPEC_VERSION,
};
pub use program::{Program, PropTable, Registers};
pub use trace::{parse_event_line, Assignment, Trace, TraceError, TraceEvent};
pub use verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonitorError {
    #[error("missing variable `{0}`")]
    MissingVariable(String),
    #[error(transparent)]
    Eval(EvalError),
    #[error("event after END")]
    EventAfterEnd,
    #[error("not a past-time formula: `{0}`")]
    NotPast(String),
    #[error("quantifier must be expanded first: `{0}`")]
    UnexpandedQuantifier(String),
    #[error("proposition `{0}` is not in the table")]
    UnknownProposition(String),
    #[error("window of {0} ticks is too large to monitor")]
    WindowTooLarge(u64),
    #[error("explicit automaton too large ({atoms} propositions, state bound {states})")]
    TooManyAtoms { atoms: usize, states: usize },
    #[error("formula needs a non-empty trace")]
    EmptyTrace,
    #[error("oracle spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

impl From<EvalError> for MonitorError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::MissingVariable(v) => MonitorError::MissingVariable(v),
            EvalError::UnexpandedQuantifier(q) => MonitorError::UnexpandedQuantifier(q),
            other => MonitorError::Eval(other),
        }
    }
}
