use crate::semantics::TemporalFormula as F;

use super::program::{Program, PropTable, Registers};
use super::trace::{Trace, TraceEvent};
use super::{MonitorError, Verdict};

/// Online checker for one past-time formula.
#[derive(Clone, Debug)]
pub struct IncrementalMonitor {
    formula: F,
    program: Program,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonitorState {
    pub registers: Registers<bool>,
    pub verdict: Verdict,
    pub ended: bool,
    /// Events consumed, END included.
    pub events: u64,
}

impl MonitorState {
    pub fn is_final(&self) -> bool {
        self.verdict.is_final()
    }
}

/// Outcome of running a whole trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub verdict: Verdict,
    /// One verdict per event.
    pub verdicts: Vec<Verdict>,
}

impl IncrementalMonitor {
    pub fn new(formula: &F) -> Result<Self, MonitorError> {
        Ok(IncrementalMonitor {
            program: Program::compile(formula)?,
            formula: formula.clone(),
        })
    }

    pub fn formula(&self) -> &F {
        &self.formula
    }

    pub fn props(&self) -> &PropTable {
        self.program.props()
    }

    pub fn initial_state(&self) -> MonitorState {
        let registers = self.program.initial::<bool>();
        MonitorState {
            verdict: Verdict::of(self.program.current(&registers)),
            registers,
            ended: false,
            events: 0,
        }
    }

    /// Consumes one event. Final verdicts absorb, but every event is still
    /// checked for the variables the formula reads.
    pub fn step(&self, st: &mut MonitorState, e: &TraceEvent) -> Result<Verdict, MonitorError> {
        if st.ended {
            return Err(MonitorError::EventAfterEnd);
        }
        match e {
            TraceEvent::End => {
                st.ended = true;
                st.verdict = st.verdict.resolve();
            }
            TraceEvent::Step { assign, .. } => {
                let vals = self.program.props().valuate(assign)?;
                self.step_valuation(st, &vals);
            }
        }
        st.events += 1;
        Ok(st.verdict)
    }

    /// Consumes one event given as proposition truth values, in
    /// [`IncrementalMonitor::props`] order.
    pub fn step_valuation(&self, st: &mut MonitorState, vals: &[bool]) -> Verdict {
        if !st.verdict.is_final() {
            st.verdict = Verdict::of(self.program.step(&mut st.registers, vals));
        }
        st.verdict
    }

    pub fn run(&self, t: &Trace) -> Result<Run, MonitorError> {
        let mut st = self.initial_state();
        let verdicts = t
            .events()
            .iter()
            .map(|e| self.step(&mut st, e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Run {
            verdict: st.verdict,
            verdicts,
        })
    }
}

/// Folds [`IncrementalMonitor::step`] over `t`.
pub fn run_trace(f: &F, t: &Trace) -> Result<Run, MonitorError> {
    IncrementalMonitor::new(f)?.run(t)
}
