//! Discrete time model: the domain is the sorted set of distinct timestamps
//! present in the data, and intervals are contiguous index ranges.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An opaque timestamp token as it appears in the input.
///
/// Integers order numerically, text orders lexicographically, and every
/// integer sorts before every text label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeLabel {
    Int(i64),
    Text(String),
}

impl Ord for TimeLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TimeLabel::Int(a), TimeLabel::Int(b)) => a.cmp(b),
            (TimeLabel::Int(_), TimeLabel::Text(_)) => Ordering::Less,
            (TimeLabel::Text(_), TimeLabel::Int(_)) => Ordering::Greater,
            (TimeLabel::Text(a), TimeLabel::Text(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for TimeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeLabel::Int(v) => write!(f, "{v}"),
            TimeLabel::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for TimeLabel {
    fn from(v: i64) -> Self {
        TimeLabel::Int(v)
    }
}

impl From<&str> for TimeLabel {
    fn from(v: &str) -> Self {
        TimeLabel::Text(v.to_string())
    }
}

impl TimeLabel {
    /// Parses a CSV/DSL token: integers become `Int`, anything else `Text`.
    pub fn parse_token(token: &str) -> TimeLabel {
        match token.parse::<i64>() {
            Ok(v) => TimeLabel::Int(v),
            Err(_) => TimeLabel::Text(token.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TimePoint {
    pub index: usize,
    pub label: TimeLabel,
}

/// Inclusive range of time-point indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TimeInterval {
    pub start: usize,
    pub end: usize,
}

impl TimeInterval {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidScope(format!(
                "interval start {start} is after end {end}"
            )));
        }
        Ok(TimeInterval { start, end })
    }

    pub fn point(t: usize) -> Self {
        TimeInterval { start: t, end: t }
    }

    pub fn contains(&self, t: usize) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn contains_interval(&self, other: &TimeInterval) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// Number of time points covered.
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

/// The ordered list of distinct timestamps of a dataset.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TimeDomain {
    labels: Vec<TimeLabel>,
}

impl TimeDomain {
    /// Builds a domain from arbitrary labels (sorted and deduplicated).
    pub fn from_labels(mut labels: Vec<TimeLabel>) -> Self {
        labels.sort();
        labels.dedup();
        TimeDomain { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[TimeLabel] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &TimeLabel {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &TimeLabel) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    pub fn resolve(&self, label: &TimeLabel) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownTime(label.to_string()))
    }

    pub fn point(&self, index: usize) -> TimePoint {
        TimePoint {
            index,
            label: self.labels[index].clone(),
        }
    }

    /// The whole time period, or `None` for an empty domain.
    pub fn full_interval(&self) -> Option<TimeInterval> {
        if self.labels.is_empty() {
            None
        } else {
            Some(TimeInterval {
                start: 0,
                end: self.labels.len() - 1,
            })
        }
    }

    pub fn last(&self) -> Option<usize> {
        self.labels.len().checked_sub(1)
    }
}
