//! The task engine: lookups, characterisation, pattern search, comparison
//! and relation seeking over behaviour scopes with free or fixed references.

mod ops;
mod resolve;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{ElementRef, Evaluated, Subset, TemporalGraph};
use crate::pattern::{Pattern, PatternConfig, PatternSpec};
use crate::predicate::ValueConstraint;
use crate::reference::{Binding, TimeRef};
use crate::time::TimeInterval;

pub use ops::{
    AuxRelation, CompareOperand, CompareReport, CompareVariant, ElementSelection, LookupHit,
    LookupResult, PairReport, PatternMatch, RelationRequest, ReportedRelation, SeekHit,
    TimeSelection,
};
pub use resolve::literal_subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AspectAxis {
    TrendsOverGraph,
    DistributionOverTime,
}

/// What is characterised for a reference: an attribute value, a pattern
/// over the four attribute quadrants, a structural pattern, or nothing
/// (a bare reference).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Behavior {
    Value,
    Distribution,
    Trend,
    Aspect(AspectAxis),
    Presence,
    Configuration,
    PairsAggregate,
    ConfigurationTrend,
    Reference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Element,
    Subset,
    Pair,
    Any,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeKind {
    Point,
    Interval,
    Any,
}

impl Behavior {
    pub fn graph_kind(self) -> GraphKind {
        match self {
            Behavior::Value | Behavior::Trend => GraphKind::Element,
            Behavior::Distribution
            | Behavior::Aspect(_)
            | Behavior::Configuration
            | Behavior::PairsAggregate
            | Behavior::ConfigurationTrend => GraphKind::Subset,
            Behavior::Presence => GraphKind::Pair,
            Behavior::Reference => GraphKind::Any,
        }
    }

    pub fn time_kind(self) -> TimeKind {
        match self {
            Behavior::Value | Behavior::Distribution | Behavior::Configuration => TimeKind::Point,
            Behavior::Trend
            | Behavior::Aspect(_)
            | Behavior::Presence
            | Behavior::PairsAggregate
            | Behavior::ConfigurationTrend => TimeKind::Interval,
            Behavior::Reference => TimeKind::Any,
        }
    }

    pub fn needs_attr(self) -> bool {
        matches!(
            self,
            Behavior::Value | Behavior::Distribution | Behavior::Trend | Behavior::Aspect(_)
        )
    }

    /// Name of the pattern kind this behaviour produces, if any.
    pub fn pattern_kind(self) -> Option<&'static str> {
        Some(match self {
            Behavior::Distribution => "distribution",
            Behavior::Trend => "trend",
            Behavior::Aspect(AspectAxis::TrendsOverGraph) => "aspect_trends",
            Behavior::Aspect(AspectAxis::DistributionOverTime) => "aspect_distributions",
            Behavior::Presence => "presence",
            Behavior::Configuration => "configuration",
            Behavior::PairsAggregate => "pairs_aggregate",
            Behavior::ConfigurationTrend => "configuration_trend",
            Behavior::Value | Behavior::Reference => return None,
        })
    }
}

/// A subset named in a query before it is resolved against the dataset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubsetRef {
    Named(String),
    AllNodes,
    AllEdges,
    Literal(Subset),
}

impl SubsetRef {
    pub fn resolve(&self, graph: &TemporalGraph) -> Result<Subset> {
        match self {
            SubsetRef::Named(name) => graph.subset(name).cloned(),
            SubsetRef::AllNodes => Ok(Subset::nodes("NODES", graph.nodes().iter().map(|n| n.id.clone()))),
            SubsetRef::AllEdges => Ok(Subset {
                name: "EDGES".to_string(),
                kind: crate::graph::MemberKind::Edges,
                members: graph.edges().iter().map(|e| e.id.clone()).collect(),
            }),
            SubsetRef::Literal(s) => {
                for m in s.member_refs() {
                    graph.check_element(&m)?;
                }
                Ok(s.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphTarget {
    Element(ElementRef),
    Subset(SubsetRef),
    Pair(String, String),
}

impl GraphTarget {
    fn kind(&self) -> GraphKind {
        match self {
            GraphTarget::Element(_) => GraphKind::Element,
            GraphTarget::Subset(_) => GraphKind::Subset,
            GraphTarget::Pair(..) => GraphKind::Pair,
        }
    }
}

/// A family of graph references a free reference ranges over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GraphFamily {
    Nodes,
    Edges,
    /// Every node and every edge.
    Elements,
    MembersOf(SubsetRef),
    NamedSubsets,
    /// Connected components of the snapshot, or of the union graph over an interval.
    Components,
    /// Nodes within `k` hops of `center` (or of every node).
    KHop { k: usize, center: Option<String> },
    /// Unordered node pairs, optionally restricted to a subset.
    NodePairs(Option<SubsetRef>),
}

impl GraphFamily {
    fn kind(&self) -> GraphKind {
        match self {
            GraphFamily::Nodes | GraphFamily::Edges | GraphFamily::Elements | GraphFamily::MembersOf(_) => GraphKind::Element,
            GraphFamily::NamedSubsets | GraphFamily::Components | GraphFamily::KHop { .. } => GraphKind::Subset,
            GraphFamily::NodePairs(_) => GraphKind::Pair,
        }
    }
}

/// A family of time references a free reference ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TimeFamily {
    Points { within: Option<TimeInterval> },
    Windows { min_len: usize, within: Option<TimeInterval> },
}

/// The behaviour to characterise and the references it applies to; a
/// `None` reference is free and ranges over the matching search-space family.
#[derive(Clone, Debug, PartialEq)]
pub struct BehaviorScope {
    pub behavior: Behavior,
    pub attr: Option<String>,
    pub graph: Option<GraphTarget>,
    pub time: Option<TimeRef>,
}

impl BehaviorScope {
    pub fn new(behavior: Behavior, attr: Option<&str>, graph: Option<GraphTarget>, time: Option<TimeRef>) -> Self {
        BehaviorScope {
            behavior,
            attr: attr.map(str::to_string),
            graph,
            time,
        }
    }

    pub fn is_fixed(&self) -> bool {
        self.graph.is_some() && self.time.is_some()
    }

    /// Checks that references and attribute fit the behaviour.
    pub fn validate(&self, graph: &TemporalGraph) -> Result<()> {
        let invalid = |m: String| Err(Error::InvalidScope(m));
        let b = self.behavior;
        match (&self.attr, b.needs_attr()) {
            (None, true) => return invalid(format!("{b:?} needs an attribute")),
            (Some(a), false) => return invalid(format!("{b:?} takes no attribute, got '{a}'")),
            (Some(a), true) => {
                let kind = graph.attribute_kind(a)?;
                if b != Behavior::Value && kind != crate::value::ValueKind::Numeric {
                    return Err(Error::TypeError(format!(
                        "{b:?} needs a numeric attribute, '{a}' is {kind}"
                    )));
                }
            }
            (None, false) => {}
        }
        if let Some(g) = &self.graph {
            if b.graph_kind() != GraphKind::Any && g.kind() != b.graph_kind() {
                return invalid(format!("{b:?} applies to {:?} references", b.graph_kind()));
            }
        }
        if let Some(t) = &self.time {
            let ok = matches!(
                (b.time_kind(), t),
                (TimeKind::Any, _) | (TimeKind::Point, TimeRef::Point(_)) | (TimeKind::Interval, TimeRef::Interval(_))
            );
            if !ok {
                return invalid(format!("{b:?} needs a time {:?}", b.time_kind()));
            }
            let last = graph.domain().len();
            if t.as_interval().end >= last {
                return Err(Error::UnknownTime(t.as_interval().end.to_string()));
            }
        }
        Ok(())
    }
}

/// Families free references range over, plus the candidate cap.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchSpace {
    pub graph: Option<GraphFamily>,
    pub time: Option<TimeFamily>,
}

/// A filter a side's characteristic must pass.
#[derive(Clone, Debug, PartialEq)]
pub enum Constraint {
    Value(ValueConstraint),
    Pattern(PatternSpec),
}

/// One side of a compare or relation-seeking task.
#[derive(Clone, Debug, PartialEq)]
pub struct Side {
    pub scope: BehaviorScope,
    pub space: SearchSpace,
    pub constraint: Option<Constraint>,
}

impl Side {
    pub fn fixed(scope: BehaviorScope) -> Side {
        Side {
            scope,
            space: SearchSpace::default(),
            constraint: None,
        }
    }

    pub fn is_free(&self) -> bool {
        !self.scope.is_fixed()
    }

    /// Whether every binding of this side has a point time reference.
    pub fn has_point_times(&self) -> bool {
        match (&self.scope.time, &self.space.time) {
            (Some(TimeRef::Point(_)), _) => true,
            (Some(TimeRef::Interval(_)), _) => false,
            (None, Some(TimeFamily::Points { .. })) => true,
            (None, Some(TimeFamily::Windows { .. })) => false,
            (None, None) => self.scope.behavior.time_kind() != TimeKind::Interval,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub patterns: PatternConfig,
    pub max_candidates: usize,
    pub correlation_threshold: f64,
    pub min_window: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            patterns: PatternConfig::default(),
            max_candidates: 10_000,
            correlation_threshold: 0.5,
            min_window: 2,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        self.patterns.validate()?;
        if self.max_candidates == 0 {
            return Err(Error::InvalidConfig("max_candidates must be positive".to_string()));
        }
        if !(0.0..=1.0).contains(&self.correlation_threshold) {
            return Err(Error::InvalidConfig("correlation_threshold must lie in [0, 1]".to_string()));
        }
        if self.min_window == 0 {
            return Err(Error::InvalidConfig("min_window must be positive".to_string()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Characteristic {
    Value(Evaluated),
    Pattern(Pattern),
    Reference,
}

impl Characteristic {
    pub fn to_json(&self) -> Value {
        match self {
            Characteristic::Value(v) => json!({"value": v.value, "source": v.source}),
            Characteristic::Pattern(p) => json!({"pattern": p}),
            Characteristic::Reference => json!({}),
        }
    }
}

/// A binding together with its characteristic and, when a pattern
/// constraint or spec scored it, the similarity score.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub binding: Binding,
    pub characteristic: Characteristic,
    pub score: Option<f64>,
}

impl Resolved {
    pub fn to_json(&self, graph: &TemporalGraph) -> Value {
        let mut obj = self.characteristic.to_json();
        let map = obj.as_object_mut().expect("object");
        map.insert("time".into(), self.binding.time.to_json(graph));
        map.insert("graph".into(), self.binding.graph.to_json());
        if let Some(s) = self.score {
            map.insert("score".into(), json!(s));
        }
        obj
    }
}

pub struct Engine<'g> {
    graph: &'g TemporalGraph,
    config: EngineConfig,
}

impl<'g> Engine<'g> {
    pub fn new(graph: &'g TemporalGraph, config: EngineConfig) -> Result<Engine<'g>> {
        config.validate()?;
        Ok(Engine { graph, config })
    }

    pub fn graph(&self) -> &'g TemporalGraph {
        self.graph
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }
}
