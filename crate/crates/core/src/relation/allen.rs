use std::fmt;

use serde::{Deserialize, Serialize};

use crate::time::TimeInterval;

/// The thirteen qualitative relations between two intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllenRelation {
    Before,
    Meets,
    Overlaps,
    Starts,
    During,
    Finishes,
    Equals,
    After,
    MetBy,
    OverlappedBy,
    StartedBy,
    Contains,
    FinishedBy,
}

impl AllenRelation {
    pub const ALL: [AllenRelation; 13] = [
        AllenRelation::Before,
        AllenRelation::Meets,
        AllenRelation::Overlaps,
        AllenRelation::Starts,
        AllenRelation::During,
        AllenRelation::Finishes,
        AllenRelation::Equals,
        AllenRelation::After,
        AllenRelation::MetBy,
        AllenRelation::OverlappedBy,
        AllenRelation::StartedBy,
        AllenRelation::Contains,
        AllenRelation::FinishedBy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AllenRelation::Before => "before",
            AllenRelation::Meets => "meets",
            AllenRelation::Overlaps => "overlaps",
            AllenRelation::Starts => "starts",
            AllenRelation::During => "during",
            AllenRelation::Finishes => "finishes",
            AllenRelation::Equals => "equals",
            AllenRelation::After => "after",
            AllenRelation::MetBy => "met_by",
            AllenRelation::OverlappedBy => "overlapped_by",
            AllenRelation::StartedBy => "started_by",
            AllenRelation::Contains => "contains",
            AllenRelation::FinishedBy => "finished_by",
        }
    }

    pub fn from_name(name: &str) -> Option<AllenRelation> {
        AllenRelation::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(name))
    }

    /// The relation seen from the other interval.
    pub fn inverse(self) -> AllenRelation {
        use AllenRelation::*;
        match self {
            Before => After,
            After => Before,
            Meets => MetBy,
            MetBy => Meets,
            Overlaps => OverlappedBy,
            OverlappedBy => Overlaps,
            Starts => StartedBy,
            StartedBy => Starts,
            During => Contains,
            Contains => During,
            Finishes => FinishedBy,
            FinishedBy => Finishes,
            Equals => Equals,
        }
    }

    /// Relation of `a` to `b` over inclusive integer intervals.
    ///
    /// Intervals sharing exactly one endpoint time point meet; a point
    /// interval is the zero-length interval `[t, t]`.
    pub fn between(a: TimeInterval, b: TimeInterval) -> AllenRelation {
        use AllenRelation::*;
        if a.end < b.start {
            return Before;
        }
        if a.start > b.end {
            return After;
        }
        if a.start == b.start && a.end == b.end {
            return Equals;
        }
        if a.start == b.start {
            return if a.end < b.end { Starts } else { StartedBy };
        }
        if a.end == b.end {
            return if a.start > b.start { Finishes } else { FinishedBy };
        }
        if a.end == b.start {
            return Meets;
        }
        if a.start == b.end {
            return MetBy;
        }
        if a.start < b.start {
            if a.end < b.end {
                Overlaps
            } else {
                Contains
            }
        } else if a.end < b.end {
            During
        } else {
            OverlappedBy
        }
    }
}

impl fmt::Display for AllenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
