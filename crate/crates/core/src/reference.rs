//! Resolved references: a time reference paired with a graph reference.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{ElementRef, Subset, TemporalGraph};
use crate::time::TimeInterval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimeRef {
    Point(usize),
    Interval(TimeInterval),
}

impl TimeRef {
    pub fn as_interval(&self) -> TimeInterval {
        match *self {
            TimeRef::Point(t) => TimeInterval::point(t),
            TimeRef::Interval(iv) => iv,
        }
    }

    pub fn as_point(&self) -> Option<usize> {
        match *self {
            TimeRef::Point(t) => Some(t),
            TimeRef::Interval(_) => None,
        }
    }

    pub fn to_json(&self, graph: &TemporalGraph) -> Value {
        let label = |t: usize| serde_json::to_value(graph.domain().label(t)).expect("label");
        match *self {
            TimeRef::Point(t) => label(t),
            TimeRef::Interval(iv) => json!([label(iv.start), label(iv.end)]),
        }
    }
}

/// A graph reference: one element (or object), a subset, or a node pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphRef {
    Element(ElementRef),
    Subset(Subset),
    Pair(String, String),
}

impl GraphRef {
    pub fn to_json(&self) -> Value {
        match self {
            GraphRef::Element(e) => Value::String(e.to_string()),
            GraphRef::Subset(s) => json!({
                "subset": s.name,
                "members": s.member_refs().iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
            GraphRef::Pair(a, b) => json!([format!("node:{a}"), format!("node:{b}")]),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GraphRef::Element(e) => e.to_string(),
            GraphRef::Subset(s) => format!("subset:{}", s.name),
            GraphRef::Pair(a, b) => format!("(node:{a}, node:{b})"),
        }
    }

    /// Atomic members (nodes or edges) the reference stands for.
    pub fn members(&self, graph: &TemporalGraph) -> Result<BTreeSet<ElementRef>> {
        match self {
            GraphRef::Element(e) => graph.member_set(e),
            GraphRef::Subset(s) => Ok(s.member_refs()),
            GraphRef::Pair(..) => Err(Error::FamilyMismatch(
                "node pairs have no member set".to_string(),
            )),
        }
    }

    /// Node indices the reference covers at `t`.
    pub fn nodes_at(&self, graph: &TemporalGraph, t: usize) -> Result<Vec<usize>> {
        match self {
            GraphRef::Element(e) => graph.element_nodes_at(e, t),
            GraphRef::Subset(s) => Ok(graph.subset_alive_nodes(s, t)),
            GraphRef::Pair(..) => Err(Error::FamilyMismatch(
                "structural relations take elements or subsets, not pairs".to_string(),
            )),
        }
    }

    pub fn exists_at(&self, graph: &TemporalGraph, t: usize) -> Result<bool> {
        match self {
            GraphRef::Element(e) => graph.exists(e, t),
            GraphRef::Subset(s) => Ok(graph.subset_exists(s, t)),
            GraphRef::Pair(a, b) => {
                let a = graph.require_node(a)?;
                let b = graph.require_node(b)?;
                Ok(graph.node_exists(a, t) && graph.node_exists(b, t))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binding {
    pub time: TimeRef,
    pub graph: GraphRef,
}

impl Binding {
    pub fn new(time: TimeRef, graph: GraphRef) -> Binding {
        Binding { time, graph }
    }
}
