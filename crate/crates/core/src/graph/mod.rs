//! Temporal property graph: nodes and edges with existence intervals,
//! named subsets, time-indexed attributes and external time series.

mod load;
mod snapshot;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::time::{TimeDomain, TimeInterval};
use crate::value::{AttributeValue, ValueKind};

pub use load::{parse_csv, parse_jsonl, Record};
pub use snapshot::{Direction, Snapshot};

/// Derived per-node attributes computed from the snapshot topology.
pub const DERIVED_ATTRIBUTES: [&str; 3] = ["@degree", "@indegree", "@outdegree"];

/// Reference to a single graph element. `Object` names a subset treated as
/// one aggregate element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementRef {
    Node(String),
    Edge(String),
    Object(String),
}

impl ElementRef {
    pub fn node(id: &str) -> Self {
        ElementRef::Node(id.to_string())
    }

    pub fn edge(id: &str) -> Self {
        ElementRef::Edge(id.to_string())
    }

    pub fn object(name: &str) -> Self {
        ElementRef::Object(name.to_string())
    }

    pub fn id(&self) -> &str {
        match self {
            ElementRef::Node(s) | ElementRef::Edge(s) | ElementRef::Object(s) => s,
        }
    }
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementRef::Node(id) => write!(f, "node:{id}"),
            ElementRef::Edge(id) => write!(f, "edge:{id}"),
            ElementRef::Object(id) => write!(f, "subset:{id}"),
        }
    }
}

impl FromStr for ElementRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, id) = s
            .split_once(':')
            .ok_or_else(|| Error::UnknownElement(s.to_string()))?;
        if id.is_empty() {
            return Err(Error::UnknownElement(s.to_string()));
        }
        match kind {
            "node" => Ok(ElementRef::Node(id.to_string())),
            "edge" => Ok(ElementRef::Edge(id.to_string())),
            "subset" => Ok(ElementRef::Object(id.to_string())),
            _ => Err(Error::UnknownElement(s.to_string())),
        }
    }
}

impl Serialize for ElementRef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ElementRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberKind {
    Nodes,
    Edges,
}

/// A set of nodes or a set of edges. Named subsets come from the data;
/// computed ones (components, k-hop neighbourhoods, literals) carry a
/// descriptive name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subset {
    pub name: String,
    pub kind: MemberKind,
    pub members: BTreeSet<String>,
}

impl Subset {
    pub fn nodes(name: &str, members: impl IntoIterator<Item = String>) -> Self {
        Subset {
            name: name.to_string(),
            kind: MemberKind::Nodes,
            members: members.into_iter().collect(),
        }
    }

    pub fn member_refs(&self) -> BTreeSet<ElementRef> {
        self.members
            .iter()
            .map(|id| match self.kind {
                MemberKind::Nodes => ElementRef::Node(id.clone()),
                MemberKind::Edges => ElementRef::Edge(id.clone()),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub existence: Vec<TimeInterval>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: String,
    pub target: String,
    pub directed: bool,
    pub existence: Vec<TimeInterval>,
    pub(crate) source_idx: usize,
    pub(crate) target_idx: usize,
}

impl Edge {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.source_idx, self.target_idx)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributeInfo {
    pub kind: ValueKind,
    pub carry_forward: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValueSource {
    Recorded,
    CarriedForward,
    Aggregated,
    Derived,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluated {
    pub value: AttributeValue,
    pub source: ValueSource,
}

fn interval_containing(intervals: &[TimeInterval], t: usize) -> Option<&TimeInterval> {
    let idx = intervals.partition_point(|i| i.end < t);
    intervals.get(idx).filter(|i| i.start <= t)
}

#[derive(Debug)]
pub struct TemporalGraph {
    domain: TimeDomain,
    nodes: Vec<Node>,
    node_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
    subsets: BTreeMap<String, Subset>,
    attributes: BTreeMap<String, AttributeInfo>,
    values: BTreeMap<String, BTreeMap<ElementRef, BTreeMap<usize, AttributeValue>>>,
    series: BTreeMap<String, BTreeMap<usize, f64>>,
    alive_nodes: Vec<Vec<usize>>,
    alive_edges: Vec<Vec<usize>>,
    snapshots: Vec<OnceLock<Snapshot>>,
}

impl TemporalGraph {
    pub fn domain(&self) -> &TimeDomain {
        &self.domain
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_idx(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn edge_idx(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn require_node(&self, id: &str) -> Result<usize> {
        self.node_idx(id)
            .ok_or_else(|| Error::UnknownElement(format!("node:{id}")))
    }

    pub fn subsets(&self) -> impl Iterator<Item = &Subset> {
        self.subsets.values()
    }

    pub fn subset(&self, name: &str) -> Result<&Subset> {
        self.subsets
            .get(name)
            .ok_or_else(|| Error::UnknownSubset(name.to_string()))
    }

    pub fn attributes(&self) -> &BTreeMap<String, AttributeInfo> {
        &self.attributes
    }

    /// Kind of a stored or derived attribute.
    pub fn attribute_kind(&self, name: &str) -> Result<ValueKind> {
        if DERIVED_ATTRIBUTES.contains(&name) {
            return Ok(ValueKind::Numeric);
        }
        self.attributes
            .get(name)
            .map(|a| a.kind)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn series_names(&self) -> impl Iterator<Item = &str> {
        self.series.keys().map(String::as_str)
    }

    pub fn series(&self, name: &str) -> Result<&BTreeMap<usize, f64>> {
        self.series
            .get(name)
            .ok_or_else(|| Error::UnknownSeries(name.to_string()))
    }

    /// Overrides carry-forward: `default` for every attribute, then the
    /// per-attribute entries. Unknown attribute names are ignored.
    pub fn configure_carry_forward(&mut self, default: bool, overrides: &BTreeMap<String, bool>) {
        for (name, info) in self.attributes.iter_mut() {
            info.carry_forward = overrides.get(name).copied().unwrap_or(default);
        }
    }

    pub fn node_exists(&self, idx: usize, t: usize) -> bool {
        interval_containing(&self.nodes[idx].existence, t).is_some()
    }

    pub fn edge_exists(&self, idx: usize, t: usize) -> bool {
        interval_containing(&self.edges[idx].existence, t).is_some()
    }

    pub fn alive_nodes(&self, t: usize) -> &[usize] {
        &self.alive_nodes[t]
    }

    pub fn alive_edges(&self, t: usize) -> &[usize] {
        &self.alive_edges[t]
    }

    /// Checks that an element reference names something in the dataset.
    pub fn check_element(&self, elem: &ElementRef) -> Result<()> {
        let known = match elem {
            ElementRef::Node(id) => self.node_index.contains_key(id),
            ElementRef::Edge(id) => self.edge_index.contains_key(id),
            ElementRef::Object(name) => self.subsets.contains_key(name),
        };
        if known {
            Ok(())
        } else {
            Err(Error::UnknownElement(elem.to_string()))
        }
    }

    /// Node and edge indices making up a subset viewed as one graph object:
    /// a node subset brings its induced edges, an edge subset its endpoints.
    pub fn subset_parts(&self, subset: &Subset) -> (Vec<usize>, Vec<usize>) {
        match subset.kind {
            MemberKind::Nodes => {
                let nodes: BTreeSet<usize> = subset
                    .members
                    .iter()
                    .filter_map(|id| self.node_idx(id))
                    .collect();
                let edges = self
                    .edges
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| nodes.contains(&e.source_idx) && nodes.contains(&e.target_idx))
                    .map(|(i, _)| i)
                    .collect();
                (nodes.into_iter().collect(), edges)
            }
            MemberKind::Edges => {
                let edges: Vec<usize> = subset
                    .members
                    .iter()
                    .filter_map(|id| self.edge_idx(id))
                    .collect();
                let nodes: BTreeSet<usize> = edges
                    .iter()
                    .flat_map(|&e| [self.edges[e].source_idx, self.edges[e].target_idx])
                    .collect();
                (nodes.into_iter().collect(), edges)
            }
        }
    }

    /// Members of the subset that exist at `t`.
    pub fn subset_alive_members(&self, subset: &Subset, t: usize) -> Vec<ElementRef> {
        subset
            .members
            .iter()
            .filter_map(|id| match subset.kind {
                MemberKind::Nodes => self
                    .node_idx(id)
                    .filter(|&i| self.node_exists(i, t))
                    .map(|_| ElementRef::Node(id.clone())),
                MemberKind::Edges => self
                    .edge_idx(id)
                    .filter(|&i| self.edge_exists(i, t))
                    .map(|_| ElementRef::Edge(id.clone())),
            })
            .collect()
    }

    /// Nodes of a subset (viewed as a graph object) alive at `t`.
    pub fn subset_alive_nodes(&self, subset: &Subset, t: usize) -> Vec<usize> {
        match subset.kind {
            MemberKind::Nodes => subset
                .members
                .iter()
                .filter_map(|id| self.node_idx(id))
                .filter(|&i| self.node_exists(i, t))
                .collect(),
            MemberKind::Edges => {
                let nodes: BTreeSet<usize> = subset
                    .members
                    .iter()
                    .filter_map(|id| self.edge_idx(id))
                    .filter(|&e| self.edge_exists(e, t))
                    .flat_map(|e| [self.edges[e].source_idx, self.edges[e].target_idx])
                    .collect();
                nodes.into_iter().collect()
            }
        }
    }

    pub fn subset_exists(&self, subset: &Subset, t: usize) -> bool {
        !self.subset_alive_members(subset, t).is_empty()
    }

    /// Existence of any element reference at `t`. Objects exist while at
    /// least one member does.
    pub fn exists(&self, elem: &ElementRef, t: usize) -> Result<bool> {
        match elem {
            ElementRef::Node(id) => Ok(self
                .node_idx(id)
                .map(|i| self.node_exists(i, t))
                .ok_or_else(|| Error::UnknownElement(elem.to_string()))?),
            ElementRef::Edge(id) => Ok(self
                .edge_idx(id)
                .map(|i| self.edge_exists(i, t))
                .ok_or_else(|| Error::UnknownElement(elem.to_string()))?),
            ElementRef::Object(name) => Ok(self.subset_exists(self.subset(name)?, t)),
        }
    }

    /// Atomic members of an element: itself for nodes and edges, the member
    /// set for objects.
    pub fn member_set(&self, elem: &ElementRef) -> Result<BTreeSet<ElementRef>> {
        match elem {
            ElementRef::Object(name) => Ok(self.subset(name)?.member_refs()),
            other => {
                self.check_element(other)?;
                Ok(BTreeSet::from([other.clone()]))
            }
        }
    }

    /// Node indices an element covers at `t` (its endpoints for an edge).
    pub fn element_nodes_at(&self, elem: &ElementRef, t: usize) -> Result<Vec<usize>> {
        match elem {
            ElementRef::Node(id) => {
                let i = self.require_node(id)?;
                Ok(if self.node_exists(i, t) { vec![i] } else { vec![] })
            }
            ElementRef::Edge(id) => {
                let e = self
                    .edge_idx(id)
                    .ok_or_else(|| Error::UnknownElement(elem.to_string()))?;
                if !self.edge_exists(e, t) {
                    return Ok(vec![]);
                }
                let (a, b) = self.edges[e].endpoints();
                Ok(vec![a.min(b), a.max(b)])
            }
            ElementRef::Object(name) => Ok(self.subset_alive_nodes(self.subset(name)?, t)),
        }
    }

    pub fn snapshot(&self, t: usize) -> &Snapshot {
        self.snapshots[t].get_or_init(|| Snapshot::build(self, t))
    }

    fn absent(&self, elem: &ElementRef, t: usize) -> Error {
        Error::AbsentElement {
            element: elem.to_string(),
            time: self.domain.label(t).to_string(),
        }
    }

    fn missing(&self, elem: &ElementRef, attr: &str, t: usize) -> Error {
        Error::MissingValue {
            element: elem.to_string(),
            attr: attr.to_string(),
            time: self.domain.label(t).to_string(),
        }
    }

    /// The value of attribute `attr` for element `elem` at time index `t`.
    ///
    /// Recorded values win; otherwise the most recent earlier value is
    /// carried forward when enabled and the element existed throughout.
    /// Objects without their own value aggregate over alive members.
    pub fn eval(&self, t: usize, elem: &ElementRef, attr: &str) -> Result<Evaluated> {
        if t >= self.domain.len() {
            return Err(Error::UnknownTime(t.to_string()));
        }
        let kind = self.attribute_kind(attr)?;
        if !self.exists(elem, t)? {
            return Err(self.absent(elem, t));
        }
        if DERIVED_ATTRIBUTES.contains(&attr) {
            return self.eval_derived(t, elem, attr);
        }
        if let Some(found) = self.eval_stored(t, elem, attr)? {
            return Ok(found);
        }
        match elem {
            ElementRef::Object(name) => self.aggregate(t, elem, self.subset(name)?, attr, kind),
            _ => Err(self.missing(elem, attr, t)),
        }
    }

    pub fn eval_value(&self, t: usize, elem: &ElementRef, attr: &str) -> Result<AttributeValue> {
        self.eval(t, elem, attr).map(|e| e.value)
    }

    fn eval_stored(&self, t: usize, elem: &ElementRef, attr: &str) -> Result<Option<Evaluated>> {
        let Some(history) = self.values.get(attr).and_then(|m| m.get(elem)) else {
            return Ok(None);
        };
        let Some((&recorded_at, value)) = history.range(..=t).next_back() else {
            return Ok(None);
        };
        if recorded_at == t {
            return Ok(Some(Evaluated {
                value: value.clone(),
                source: ValueSource::Recorded,
            }));
        }
        if !self.attributes[attr].carry_forward {
            return Ok(None);
        }
        let unbroken = match elem {
            ElementRef::Node(id) => {
                let i = self.node_index[id];
                interval_containing(&self.nodes[i].existence, t).is_some_and(|iv| iv.start <= recorded_at)
            }
            ElementRef::Edge(id) => {
                let i = self.edge_index[id];
                interval_containing(&self.edges[i].existence, t).is_some_and(|iv| iv.start <= recorded_at)
            }
            ElementRef::Object(name) => {
                let subset = self.subset(name)?;
                (recorded_at..=t).all(|s| self.subset_exists(subset, s))
            }
        };
        Ok(unbroken.then(|| Evaluated {
            value: value.clone(),
            source: ValueSource::CarriedForward,
        }))
    }

    fn aggregate(
        &self,
        t: usize,
        elem: &ElementRef,
        subset: &Subset,
        attr: &str,
        kind: ValueKind,
    ) -> Result<Evaluated> {
        let mut values = Vec::new();
        for member in self.subset_alive_members(subset, t) {
            match self.eval(t, &member, attr) {
                Ok(v) => values.push(v.value),
                Err(e) if e.is_undefined() => {}
                Err(e) => return Err(e),
            }
        }
        if values.is_empty() {
            return Err(self.missing(elem, attr, t));
        }
        let value = match kind {
            ValueKind::Numeric => {
                let nums: Vec<f64> = values.iter().filter_map(AttributeValue::as_f64).collect();
                AttributeValue::Numeric(nums.iter().sum::<f64>() / nums.len() as f64)
            }
            ValueKind::Categorical | ValueKind::Boolean => mode(&values),
        };
        Ok(Evaluated {
            value,
            source: ValueSource::Aggregated,
        })
    }

    fn eval_derived(&self, t: usize, elem: &ElementRef, attr: &str) -> Result<Evaluated> {
        match elem {
            ElementRef::Node(id) => {
                let snap = self.snapshot(t);
                let i = self.node_index[id];
                let direction = match attr {
                    "@indegree" => Direction::In,
                    "@outdegree" => Direction::Out,
                    _ => Direction::Any,
                };
                Ok(Evaluated {
                    value: AttributeValue::Numeric(snap.degree(i, direction) as f64),
                    source: ValueSource::Derived,
                })
            }
            ElementRef::Edge(_) => Err(self.missing(elem, attr, t)),
            ElementRef::Object(name) => {
                self.aggregate(t, elem, self.subset(name)?, attr, ValueKind::Numeric)
            }
        }
    }
}

/// Most frequent value; ties go to the smallest value in natural order.
fn mode(values: &[AttributeValue]) -> AttributeValue {
    let mut counts: Vec<(&AttributeValue, usize)> = Vec::new();
    for v in values {
        match counts.iter_mut().find(|(seen, _)| *seen == v) {
            Some((_, c)) => *c += 1,
            None => counts.push((v, 1)),
        }
    }
    counts
        .into_iter()
        .max_by(|(a, ca), (b, cb)| {
            ca.cmp(cb)
                .then_with(|| b.compare(a).unwrap_or(std::cmp::Ordering::Equal))
        })
        .map(|(v, _)| v.clone())
        .expect("mode of non-empty slice")
}
