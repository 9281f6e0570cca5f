//! Storage and query engines for temporal property graphs: time-indexed
//! attribute lookup, behaviour patterns, relations between references,
//! structural queries and correlation between time series.

pub mod correlation;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod pattern;
pub mod predicate;
pub mod reference;
pub mod relation;
pub mod structural;
pub mod task;
pub mod time;
pub mod value;

pub use error::{Error, Result};
pub use graph::{ElementRef, Evaluated, MemberKind, Subset, TemporalGraph, ValueSource};
pub use time::{TimeDomain, TimeInterval, TimeLabel, TimePoint};
pub use value::{AttributeValue, ValueKind};
