use serde::{Deserialize, Serialize};

use crate::parser::{condition_text, scope_text, timing_text};
use crate::requirement::{Requirement, ScopeSpec, TimingSpec};

use super::ticks::{duration_to_ticks, TickConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentKind {
    ScopeActive,
    ConditionTrigger,
    ResponseWindow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "at", content = "ticks", rename_all = "kebab-case")]
pub enum Marker {
    TraceStart,
    ModeEntry,
    ModeExit,
    Trigger,
    /// The given number of ticks after the window's anchor.
    Bound(u64),
    /// First position where an `until`/`before` expression holds.
    Stop,
    TraceEnd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub label: String,
    pub kind: SegmentKind,
    pub start: Marker,
    pub end: Marker,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelineDiagram {
    pub segments: Vec<Segment>,
}

impl TimelineDiagram {
    pub fn response_window(&self) -> &Segment {
        self.segments
            .iter()
            .find(|s| s.kind == SegmentKind::ResponseWindow)
            .expect("every diagram has a response window")
    }
}

pub fn diagram_data(req: &Requirement) -> TimelineDiagram {
    diagram_data_with(req, &TickConfig::default())
}

/// Timeline for `req`. Bounds too large for a tick count saturate.
pub fn diagram_data_with(req: &Requirement, cfg: &TickConfig) -> TimelineDiagram {
    use Marker::*;
    let mut segments = Vec::new();
    let (scope_start, scope_end) = match &req.scope {
        ScopeSpec::Null => (TraceStart, TraceEnd),
        ScopeSpec::In(_) | ScopeSpec::While(_) => (ModeEntry, ModeExit),
        ScopeSpec::NotIn(_) | ScopeSpec::OnlyIn(_) => (ModeExit, ModeEntry),
        ScopeSpec::Before(_) => (TraceStart, ModeEntry),
        ScopeSpec::After(_) => (ModeExit, TraceEnd),
        ScopeSpec::OnlyBefore(_) => (ModeEntry, TraceEnd),
        ScopeSpec::OnlyAfter(_) => (TraceStart, ModeExit),
    };
    if let Some(label) = scope_text(&req.scope) {
        segments.push(Segment {
            label,
            kind: SegmentKind::ScopeActive,
            start: scope_start,
            end: scope_end,
        });
    }
    let anchor = match condition_text(&req.condition) {
        Some(label) => {
            segments.push(Segment {
                label,
                kind: SegmentKind::ConditionTrigger,
                start: Trigger,
                end: Trigger,
            });
            Trigger
        }
        None => scope_start,
    };
    let ticks = |d| duration_to_ticks(d, cfg).unwrap_or(u64::MAX);
    let (start, end) = match &req.timing {
        TimingSpec::Eventually | TimingSpec::Always | TimingSpec::Never => (anchor, scope_end),
        TimingSpec::Immediately => (anchor, anchor),
        TimingSpec::NextTimepoint => (Bound(1), Bound(1)),
        TimingSpec::Until(_) | TimingSpec::Before(_) => (anchor, Stop),
        TimingSpec::After(d) => (Bound(ticks(*d)), Bound(ticks(*d))),
        TimingSpec::For(d) | TimingSpec::Within(d) => (anchor, Bound(ticks(*d))),
    };
    segments.push(Segment {
        label: timing_text(&req.timing).unwrap_or_else(|| "eventually".into())
            + " "
            + &req.response.to_string(),
        kind: SegmentKind::ResponseWindow,
        start,
        end,
    });
    TimelineDiagram { segments }
}
