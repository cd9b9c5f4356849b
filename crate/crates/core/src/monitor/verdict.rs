use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lane::{Judged, Lane};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    True,
    False,
    PresumablyTrue,
    PresumablyFalse,
}

impl Verdict {
    /// Verdict carried by one lane of a judged value.
    pub fn of_lane<L: Lane>(j: Judged<L>, lane: usize) -> Verdict {
        if j.locked_true.get(lane) {
            Verdict::True
        } else if j.locked_false.get(lane) {
            Verdict::False
        } else if j.value.get(lane) {
            Verdict::PresumablyTrue
        } else {
            Verdict::PresumablyFalse
        }
    }

    pub fn of(j: Judged<bool>) -> Verdict {
        Verdict::of_lane(j, 0)
    }

    pub fn is_final(self) -> bool {
        matches!(self, Verdict::True | Verdict::False)
    }

    /// What the verdict becomes once the trace is known to have ended.
    pub fn resolve(self) -> Verdict {
        match self {
            Verdict::PresumablyTrue => Verdict::True,
            Verdict::PresumablyFalse => Verdict::False,
            v => v,
        }
    }

    /// Truth value ignoring finality.
    pub fn holds(self) -> bool {
        matches!(self, Verdict::True | Verdict::PresumablyTrue)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "True",
            Verdict::False => "False",
            Verdict::PresumablyTrue => "PresumablyTrue",
            Verdict::PresumablyFalse => "PresumablyFalse",
        }
    }

    /// `⊤`, `⊥`, `?⊤`, `?⊥`
    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::True => "⊤",
            Verdict::False => "⊥",
            Verdict::PresumablyTrue => "?⊤",
            Verdict::PresumablyFalse => "?⊥",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
