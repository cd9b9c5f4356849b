//! Traces and their newline-delimited JSON form.
//!
//! ```text
//! {"tick":0,"assign":{"grasp":true,"near":false}}
//! {"tick":1,"assign":{"grasp":false,"near":false}}
//! {"end":true}
//! ```

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::value::Value;

pub type Assignment = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq)]
pub enum TraceEvent {
    Step { tick: u64, assign: Assignment },
    End,
}

impl TraceEvent {
    pub fn step(tick: u64, assign: Assignment) -> Self {
        TraceEvent::Step { tick, assign }
    }

    pub fn is_end(&self) -> bool {
        matches!(self, TraceEvent::End)
    }

    pub fn tick(&self) -> Option<u64> {
        match self {
            TraceEvent::Step { tick, .. } => Some(*tick),
            TraceEvent::End => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireEvent {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tick: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    assign: Option<Assignment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end: Option<bool>,
}

impl Serialize for TraceEvent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let wire = match self {
            TraceEvent::Step { tick, assign } => WireEvent {
                tick: Some(*tick),
                assign: Some(assign.clone()),
                end: None,
            },
            TraceEvent::End => WireEvent {
                tick: None,
                assign: None,
                end: Some(true),
            },
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TraceEvent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = WireEvent::deserialize(d)?;
        match (wire.end, wire.tick, wire.assign) {
            (Some(true), None, None) => Ok(TraceEvent::End),
            (Some(true), _, _) => Err(D::Error::custom("an end event carries no tick or assignments")),
            (_, Some(tick), assign) => Ok(TraceEvent::Step {
                tick,
                assign: assign.unwrap_or_default(),
            }),
            (_, None, _) => Err(D::Error::custom("event needs a `tick` or `\"end\": true`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: tick {tick} does not increase on {previous}")]
    NonIncreasingTick { line: usize, tick: u64, previous: u64 },
    #[error("line {line}: event after END")]
    EventAfterEnd { line: usize },
    #[error("line {line}: {message}")]
    Io { line: usize, message: String },
}

impl TraceError {
    pub fn line(&self) -> usize {
        match self {
            TraceError::Json { line, .. }
            | TraceError::NonIncreasingTick { line, .. }
            | TraceError::EventAfterEnd { line }
            | TraceError::Io { line, .. } => *line,
        }
    }
}

/// A well-formed event sequence: ticks strictly increase and END, if
/// present, comes last.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    events: Vec<TraceEvent>,
}

impl Trace {
    /// Validates `events`; error line numbers are 1-based event indices.
    pub fn new(events: Vec<TraceEvent>) -> Result<Self, TraceError> {
        let mut trace = Trace::default();
        for (i, e) in events.into_iter().enumerate() {
            trace.push_at(e, i + 1)?;
        }
        Ok(trace)
    }

    /// Steps at ticks 0, 1, 2, ... optionally followed by END.
    pub fn from_steps(steps: impl IntoIterator<Item = Assignment>, ended: bool) -> Self {
        let mut events: Vec<_> = steps
            .into_iter()
            .enumerate()
            .map(|(i, a)| TraceEvent::step(i as u64, a))
            .collect();
        if ended {
            events.push(TraceEvent::End);
        }
        Trace { events }
    }

    pub fn push(&mut self, e: TraceEvent) -> Result<(), TraceError> {
        let line = self.events.len() + 1;
        self.push_at(e, line)
    }

    fn push_at(&mut self, e: TraceEvent, line: usize) -> Result<(), TraceError> {
        if self.ended() {
            return Err(TraceError::EventAfterEnd { line });
        }
        if let (Some(tick), Some(previous)) = (e.tick(), self.last_tick()) {
            if tick <= previous {
                return Err(TraceError::NonIncreasingTick { line, tick, previous });
            }
        }
        self.events.push(e);
        Ok(())
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn ended(&self) -> bool {
        self.events.last().is_some_and(TraceEvent::is_end)
    }

    pub fn last_tick(&self) -> Option<u64> {
        self.events.iter().rev().find_map(TraceEvent::tick)
    }

    /// Assignments of the non-END events in order.
    pub fn steps(&self) -> impl Iterator<Item = (u64, &Assignment)> {
        self.events.iter().filter_map(|e| match e {
            TraceEvent::Step { tick, assign } => Some((*tick, assign)),
            TraceEvent::End => None,
        })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Reads NDJSON, skipping blank lines. Line numbers are physical lines.
    pub fn read_ndjson(reader: impl BufRead) -> Result<Self, TraceError> {
        let mut trace = Trace::default();
        for (i, line) in reader.lines().enumerate() {
            let n = i + 1;
            let line = line.map_err(|e| TraceError::Io {
                line: n,
                message: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            trace.push_at(parse_event_line(&line, n)?, n)?;
        }
        Ok(trace)
    }

    pub fn from_ndjson(text: &str) -> Result<Self, TraceError> {
        Self::read_ndjson(text.as_bytes())
    }

    pub fn to_ndjson(&self) -> String {
        self.events
            .iter()
            .map(|e| serde_json::to_string(e).expect("events serialize") + "\n")
            .collect()
    }
}

/// Parses one NDJSON line as an event; `line` is used in the error.
pub fn parse_event_line(text: &str, line: usize) -> Result<TraceEvent, TraceError> {
    serde_json::from_str(text).map_err(|e| TraceError::Json {
        line,
        message: e.to_string(),
    })
}
