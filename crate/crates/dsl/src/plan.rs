//! Binds a validated query to exactly one engine operation and runs it.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use tgq_core::correlation::{GraphSeries, SeriesAggregate};
use tgq_core::predicate::Predicate;
use tgq_core::reference::TimeRef;
use tgq_core::relation::{RelationOutcome, RelationSpec};
use tgq_core::structural::{connection_times, find_connected, find_connected_pairs, find_connection, ConnectionSpec};
use tgq_core::task::{
    literal_subset, AuxRelation, Behavior, BehaviorScope, CompareOperand, CompareReport, Constraint,
    ElementSelection, Engine, EngineConfig, GraphFamily, GraphKind, GraphTarget, RelationRequest, Resolved,
    SearchSpace, Side as CoreSide, SubsetRef, TimeFamily, TimeSelection,
};
use tgq_core::{ElementRef, TemporalGraph, TimeInterval, TimeLabel};

use crate::ast::*;
use crate::error::{DslError, Result};
use crate::validate::{behavior, pattern_behavior};

/// Result of running one query. Field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub query: String,
    pub bindings: Vec<Value>,
    pub elapsed_ms: u64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Correlation {
    CrossSection { a: String, b: String, members: GraphTarget, t: usize },
    TwoTrends { a: String, b: String, element: ElementRef, interval: TimeInterval, lag: i64 },
    Pooled { a: String, b: String, members: GraphTarget, interval: TimeInterval, lag: i64, per_element: bool },
    External { series: SeriesPlan, name: String, lag: i64 },
    Homogeneous { left: SeriesPlan, right: SeriesPlan, lag: i64 },
}

#[derive(Clone, Debug, PartialEq)]
struct SeriesPlan {
    attr: String,
    graph: GraphTarget,
    interval: TimeInterval,
    aggregate: SeriesAggregate,
}

#[derive(Clone, Debug, PartialEq)]
enum Op {
    DirectLookup { t: usize, element: ElementRef, attr: String },
    InverseLookup { predicate: Predicate, elements: ElementSelection, times: TimeSelection, time: bool, graph: bool },
    Characterize { scope: BehaviorScope, structural: bool },
    PatternSearch { spec: tgq_core::pattern::PatternSpec, scope: BehaviorScope, space: SearchSpace, structural: bool },
    DirectCompare { left: CompareOperand, right: CompareOperand, relation: Option<RelationSpec> },
    InverseCompare { left: CoreSide, right: CoreSide, request: RelationRequest, all_pairs: bool },
    RelationSeek { relation: RelationSpec, left: CoreSide, right: CoreSide, aux: Vec<AuxRelation> },
    FindConnection { a: String, b: String, t: usize, spec: ConnectionSpec },
    FindConnected { a: String, times: Vec<usize>, fixed: bool, spec: ConnectionSpec },
    FindConnectedPairs { times: Vec<usize>, spec: ConnectionSpec },
    ConnectionTimes { a: String, b: String, spec: ConnectionSpec, within: Option<TimeInterval> },
    Correlate(Correlation),
}

/// A query bound to one engine operation.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub query: Query,
    op: Op,
}

fn plan_error<T>(msg: impl Into<String>) -> Result<T> {
    Err(DslError::Plan(msg.into()))
}

struct Planner<'a> {
    graph: &'a TemporalGraph,
    config: &'a EngineConfig,
}

impl Planner<'_> {
    fn point(&self, l: &TimeLabel) -> Result<usize> {
        Ok(self.graph.domain().resolve(l)?)
    }

    fn range(&self, r: &Range) -> Result<TimeInterval> {
        Ok(TimeInterval::new(self.point(&r.0)?, self.point(&r.1)?)?)
    }

    fn full(&self) -> Result<TimeInterval> {
        self.graph
            .domain()
            .full_interval()
            .ok_or_else(|| DslError::Plan("the dataset has no time points".into()))
    }

    fn subset_ref(&self, g: &GraphExpr) -> Option<SubsetRef> {
        match g {
            GraphExpr::Ref(ElementRef::Object(s)) => Some(SubsetRef::Named(s.clone())),
            GraphExpr::AllNodes => Some(SubsetRef::AllNodes),
            GraphExpr::AllEdges => Some(SubsetRef::AllEdges),
            GraphExpr::Literal(ids) => Some(literal_subset(ids.iter().cloned())),
            _ => None,
        }
    }

    fn family(&self, f: &FamilyExpr) -> GraphFamily {
        match f {
            FamilyExpr::Nodes => GraphFamily::Nodes,
            FamilyExpr::Edges => GraphFamily::Edges,
            FamilyExpr::Elements => GraphFamily::Elements,
            FamilyExpr::Members(s) => GraphFamily::MembersOf(SubsetRef::Named(s.clone())),
            FamilyExpr::Subsets => GraphFamily::NamedSubsets,
            FamilyExpr::Components => GraphFamily::Components,
            FamilyExpr::KHop { k, center } => GraphFamily::KHop { k: *k, center: center.clone() },
            FamilyExpr::Pairs(s) => GraphFamily::NodePairs(s.as_ref().map(|s| SubsetRef::Named(s.clone()))),
        }
    }

    /// Fixed graph target, or the family a free reference ranges over.
    fn graph(&self, g: &GraphExpr, b: Behavior) -> Result<(Option<GraphTarget>, Option<GraphFamily>)> {
        let subset_side = matches!(b.graph_kind(), GraphKind::Subset | GraphKind::Any);
        Ok(match g {
            GraphExpr::Free { family: Some(f), .. } => (None, Some(self.family(f))),
            GraphExpr::Free { family: None, var } => {
                let family = match b.graph_kind() {
                    GraphKind::Element => GraphFamily::Nodes,
                    GraphKind::Pair => GraphFamily::NodePairs(None),
                    GraphKind::Any => GraphFamily::Elements,
                    GraphKind::Subset => {
                        return plan_error(format!(
                            "free subset ?{var} has no family to range over; add IN SUBSETS, COMPONENTS or KHOP k"
                        ))
                    }
                };
                (None, Some(family))
            }
            GraphExpr::Ref(ElementRef::Object(s)) if subset_side => {
                (Some(GraphTarget::Subset(SubsetRef::Named(s.clone()))), None)
            }
            GraphExpr::Ref(e) => (Some(GraphTarget::Element(e.clone())), None),
            GraphExpr::Pair(a, c) => (Some(GraphTarget::Pair(a.clone(), c.clone())), None),
            other => (Some(GraphTarget::Subset(self.subset_ref(other).expect("subset expression"))), None),
        })
    }

    fn time(&self, t: &TimeExpr) -> Result<(Option<TimeRef>, Option<TimeFamily>)> {
        let within = |r: &Option<Range>| -> Result<Option<TimeInterval>> { r.as_ref().map(|r| self.range(r)).transpose() };
        Ok(match t {
            TimeExpr::At(l) => (Some(TimeRef::Point(self.point(l)?)), None),
            TimeExpr::During(a, b) => (Some(TimeRef::Interval(self.range(&(a.clone(), b.clone()))?)), None),
            TimeExpr::DuringAll => (Some(TimeRef::Interval(self.full()?)), None),
            TimeExpr::AtFree { within: w, .. } => (None, Some(TimeFamily::Points { within: within(w)? })),
            TimeExpr::DuringFree { min_len, within: w, .. } => (
                None,
                Some(TimeFamily::Windows {
                    min_len: min_len.unwrap_or(self.config.min_window),
                    within: within(w)?,
                }),
            ),
        })
    }

    fn scope(&self, s: &Scope) -> Result<(BehaviorScope, SearchSpace)> {
        let b = behavior(s.behavior);
        let (graph, gfam) = self.graph(&s.graph, b)?;
        let (time, tfam) = self.time(&s.time)?;
        Ok((
            BehaviorScope::new(b, s.attr.as_deref(), graph, time),
            SearchSpace { graph: gfam, time: tfam },
        ))
    }

    fn side(&self, s: &Side) -> Result<CoreSide> {
        let (scope, space) = self.scope(&s.scope)?;
        Ok(CoreSide {
            scope,
            space,
            constraint: s.having.as_ref().map(|h| match h {
                Having::Value(c) => Constraint::Value(c.clone()),
                Having::Pattern(p) => Constraint::Pattern(p.clone()),
            }),
        })
    }

    fn points(&self, p: &PointSel) -> Result<(Vec<usize>, bool)> {
        Ok(match p {
            PointSel::At(l) => (vec![self.point(l)?], true),
            PointSel::Free { within: Some(r), .. } => (self.range(r)?.iter().collect(), false),
            PointSel::Free { within: None, .. } => match self.graph.domain().full_interval() {
                Some(iv) => (iv.iter().collect(), false),
                None => (Vec::new(), false),
            },
        })
    }

    fn series(&self, s: &Series) -> Result<SeriesPlan> {
        let Series::Graph { aggregate, attr, graph, time } = s else {
            unreachable!("external series are handled by the caller")
        };
        let target = match self.subset_ref(graph) {
            Some(sub) => GraphTarget::Subset(sub),
            None => self.graph(graph, Behavior::Value)?.0.expect("fixed graph"),
        };
        let interval = match self.time(time)?.0.expect("fixed time") {
            TimeRef::Point(t) => TimeInterval::point(t),
            TimeRef::Interval(iv) => iv,
        };
        Ok(SeriesPlan {
            attr: attr.clone(),
            graph: target,
            interval,
            aggregate: aggregate.unwrap_or_default(),
        })
    }

    fn correlate(&self, c: &Correlate) -> Result<Correlation> {
        match (&c.left, &c.right) {
            (Series::External(name), s) | (s, Series::External(name)) => {
                let series = self.series(s)?;
                let lag = if matches!(c.left, Series::External(_)) { -c.lag } else { c.lag };
                return Ok(Correlation::External { series, name: name.clone(), lag });
            }
            _ => {}
        }
        let (left, right) = (self.series(&c.left)?, self.series(&c.right)?);
        let (Series::Graph { aggregate: agg_l, time: tl, .. }, Series::Graph { aggregate: agg_r, .. }) = (&c.left, &c.right) else {
            unreachable!()
        };
        let shared = agg_l.is_none() && agg_r.is_none() && left.attr != right.attr && left.graph == right.graph && left.interval == right.interval;
        if !shared {
            return Ok(Correlation::Homogeneous { left, right, lag: c.lag });
        }
        let (a, b) = (left.attr, right.attr);
        match (left.graph, tl.is_point()) {
            (GraphTarget::Element(_), true) => {
                plan_error("one element at one time point gives a single sample; correlate over an interval or a subset")
            }
            (GraphTarget::Element(element), false) => Ok(Correlation::TwoTrends {
                a,
                b,
                element,
                interval: left.interval,
                lag: c.lag,
            }),
            (members, true) => Ok(Correlation::CrossSection { a, b, members, t: left.interval.start }),
            (members, false) => Ok(Correlation::Pooled {
                a,
                b,
                members,
                interval: left.interval,
                lag: c.lag,
                per_element: c.per_element,
            }),
        }
    }

    fn plan(&self, q: &Query) -> Result<Op> {
        Ok(match q {
            Query::Lookup { attr, element, time } => Op::DirectLookup {
                t: self.point(time)?,
                element: element.clone(),
                attr: attr.clone(),
            },
            Query::InverseLookup(f) => Op::InverseLookup {
                predicate: f.predicate.clone(),
                elements: match &f.scope {
                    Some(FindScope::Element(e)) => ElementSelection::One(e.clone()),
                    Some(FindScope::Family(fam)) => ElementSelection::Family(self.family(fam)),
                    None => ElementSelection::Family(GraphFamily::Elements),
                },
                times: match &f.time {
                    Some(FindTime::At(l)) => TimeSelection::Point(self.point(l)?),
                    Some(FindTime::During(a, b)) => TimeSelection::Within(Some(self.range(&(a.clone(), b.clone()))?)),
                    Some(FindTime::DuringAll) | None => TimeSelection::Within(None),
                },
                time: f.targets.contains(&Target::Time),
                graph: f.targets.contains(&Target::Graph),
            },
            Query::Characterize(s) | Query::StructCharacterize(s) => Op::Characterize {
                scope: self.scope(s)?.0,
                structural: matches!(q, Query::StructCharacterize(_)),
            },
            Query::PatternSearch(s) | Query::StructSearch(s) => {
                let kw = pattern_behavior(&s.pattern).expect("validated");
                let (scope, space) = self.scope(&Scope {
                    behavior: kw,
                    attr: s.attr.clone(),
                    graph: s.graph.clone(),
                    time: s.time.clone(),
                })?;
                Op::PatternSearch {
                    spec: s.pattern.clone(),
                    scope,
                    space,
                    structural: matches!(q, Query::StructSearch(_)),
                }
            }
            Query::Compare(c) => Op::DirectCompare {
                left: CompareOperand::Scope(self.scope(&c.left.scope)?.0),
                right: match &c.right {
                    CompareRhs::Side(s) => CompareOperand::Scope(self.scope(&s.scope)?.0),
                    CompareRhs::Value(v) => CompareOperand::Value(v.clone()),
                    CompareRhs::Pattern(p) => CompareOperand::Pattern(p.clone()),
                },
                relation: match &c.using {
                    Some(Using::Relation(r)) => Some(*r),
                    _ => None,
                },
            },
            Query::InverseCompare(c) => {
                let CompareRhs::Side(right) = &c.right else {
                    unreachable!("validated")
                };
                Op::InverseCompare {
                    left: self.side(&c.left)?,
                    right: self.side(right)?,
                    request: match &c.using {
                        Some(Using::Relation(r)) => RelationRequest::Relation(*r),
                        Some(Using::Families(f)) => RelationRequest::Families(f.clone()),
                        None => RelationRequest::Families(Vec::new()),
                    },
                    all_pairs: c.all_pairs,
                }
            }
            Query::RelationSeek(s) => Op::RelationSeek {
                relation: s.relation,
                left: self.side(&s.left)?,
                right: self.side(&s.right)?,
                aux: s
                    .aux
                    .iter()
                    .map(|a| {
                        Ok(AuxRelation {
                            relation: a.relation,
                            negated: a.negated,
                            at: a.at.as_ref().map(|l| self.point(l)).transpose()?,
                        })
                    })
                    .collect::<Result<_>>()?,
            },
            Query::Connection { a, b, spec, time } => Op::FindConnection {
                a: a.clone(),
                b: b.clone(),
                t: self.point(time)?,
                spec: spec.clone(),
            },
            Query::ConnectedSearch { from: Some(a), spec, time } => {
                let (times, fixed) = self.points(time)?;
                Op::FindConnected {
                    a: a.clone(),
                    times,
                    fixed,
                    spec: spec.clone(),
                }
            }
            Query::ConnectedSearch { from: None, spec, time } => Op::FindConnectedPairs {
                times: self.points(time)?.0,
                spec: spec.clone(),
            },
            Query::ConnectionTimes { a, b, spec, within } => Op::ConnectionTimes {
                a: a.clone(),
                b: b.clone(),
                spec: spec.clone(),
                within: within.as_ref().map(|r| self.range(r)).transpose()?,
            },
            Query::Correlate(c) => Op::Correlate(self.correlate(c)?),
        })
    }
}

/// Binds a validated query against a dataset.
pub fn plan(query: &Query, graph: &TemporalGraph, config: &EngineConfig) -> Result<Plan> {
    let op = Planner { graph, config }.plan(query)?;
    Ok(Plan { query: query.clone(), op })
}

fn label(graph: &TemporalGraph, t: usize) -> Value {
    serde_json::to_value(graph.domain().label(t)).expect("label serializes")
}

fn outcome(relation: &RelationSpec, o: &RelationOutcome) -> Value {
    json!({"relation": relation, "holds": o.holds, "witness": o.witness})
}

fn compare_json(graph: &TemporalGraph, r: &CompareReport) -> Value {
    let side = |s: &Option<Resolved>| s.as_ref().map(|s| s.to_json(graph)).unwrap_or(Value::Null);
    json!({
        "left": side(&r.left),
        "right": side(&r.right),
        "variant": r.variant,
        "order": r.order,
        "similarity": r.similarity,
        "pattern_relation": r.pattern_relation,
        "relation": r.relation.as_ref().map(|(spec, o)| outcome(spec, o)),
    })
}

impl Plan {
    /// Name of the engine operation the query runs.
    pub fn op(&self) -> &'static str {
        match &self.op {
            Op::DirectLookup { .. } => "directLookup",
            Op::InverseLookup { .. } => "inverseLookup",
            Op::Characterize { structural: false, .. } => "characterize",
            Op::Characterize { structural: true, .. } => "structuralCharacterize",
            Op::PatternSearch { structural: false, .. } => "patternSearch",
            Op::PatternSearch { structural: true, .. } => "structuralSearch",
            Op::DirectCompare { .. } => "directCompare",
            Op::InverseCompare { .. } => "inverseCompare",
            Op::RelationSeek { .. } => "relationSeek",
            Op::FindConnection { .. } => "findConnection",
            Op::FindConnected { .. } => "findConnected",
            Op::FindConnectedPairs { .. } => "findConnectedPairs",
            Op::ConnectionTimes { .. } => "connectionTimes",
            Op::Correlate(Correlation::External { .. }) => "correlateWithExternal",
            Op::Correlate(Correlation::Homogeneous { .. }) => "correlateHomogeneous",
            Op::Correlate(_) => "correlateAttributes",
        }
    }

    pub fn execute(&self, graph: &TemporalGraph, config: &EngineConfig) -> Result<Envelope> {
        let start = Instant::now();
        let engine = Engine::new(graph, config.clone())?;
        let mut warnings = Vec::new();
        let bindings = self.bindings(&engine, &mut warnings)?;
        Ok(Envelope {
            query: self.query.to_string(),
            bindings,
            elapsed_ms: start.elapsed().as_millis() as u64,
            warnings,
        })
    }

    fn bindings(&self, engine: &Engine<'_>, warnings: &mut Vec<String>) -> Result<Vec<Value>> {
        let g = engine.graph();
        Ok(match &self.op {
            Op::DirectLookup { t, element, attr } => {
                let r = engine.direct_lookup(*t, element, attr)?;
                vec![json!({
                    "time": label(g, r.time),
                    "element": r.element,
                    "attr": r.attr,
                    "value": r.value,
                    "source": r.source,
                })]
            }
            Op::InverseLookup { predicate, elements, times, time, graph } => engine
                .inverse_lookup(predicate, elements, times)?
                .into_iter()
                .map(|h| {
                    let mut m = serde_json::Map::new();
                    if *time {
                        m.insert("time".into(), label(g, h.time));
                    }
                    if *graph {
                        m.insert("element".into(), json!(h.element));
                    }
                    m.insert("values".into(), json!(h.values));
                    Value::Object(m)
                })
                .collect(),
            Op::Characterize { scope, .. } => vec![engine.characterize(scope)?.to_json(g)],
            Op::PatternSearch { spec, scope, space, .. } => engine
                .pattern_search(spec, scope, space)?
                .into_iter()
                .map(|m| {
                    json!({
                        "time": m.binding.time.to_json(g),
                        "graph": m.binding.graph.to_json(),
                        "pattern": m.pattern,
                        "score": m.similarity.score,
                        "opposite": m.similarity.opposite,
                    })
                })
                .collect(),
            Op::DirectCompare { left, right, relation } => {
                vec![compare_json(g, &engine.direct_compare(left, right, relation.as_ref())?)]
            }
            Op::InverseCompare { left, right, request, all_pairs } => engine
                .inverse_compare(left, right, request, *all_pairs)?
                .into_iter()
                .map(|p| {
                    json!({
                        "left": p.left.to_json(g),
                        "right": p.right.to_json(g),
                        "relations": p.relations.iter().map(|r| outcome(&r.relation, &r.outcome)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
            Op::RelationSeek { relation, left, right, aux } => engine
                .relation_seek(relation, left, right, aux)?
                .into_iter()
                .map(|h| {
                    json!({
                        "left": h.left.to_json(g),
                        "right": h.right.to_json(g),
                        "outcome": outcome(relation, &h.outcome),
                        "aux": h.aux.iter().zip(aux).map(|(o, a)| outcome(&a.relation, o)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
            Op::FindConnection { a, b, t, spec } => {
                let c = find_connection(g, a, b, *t, spec)?;
                vec![json!({
                    "time": label(g, *t),
                    "source": format!("node:{a}"),
                    "target": format!("node:{b}"),
                    "connected": c.connected,
                    "distance": c.distance,
                    "path": c.path.iter().map(|n| format!("node:{n}")).collect::<Vec<_>>(),
                })]
            }
            Op::FindConnected { a, times, fixed, spec } => {
                let mut out = Vec::new();
                for &t in times {
                    let found = match find_connected(g, a, t, spec) {
                        Ok(f) => f,
                        Err(e) if !*fixed && e.is_undefined() => continue,
                        Err(e) => return Err(e.into()),
                    };
                    for (n, d) in found {
                        out.push(json!({"time": label(g, t), "node": format!("node:{n}"), "distance": d}));
                    }
                }
                out
            }
            Op::FindConnectedPairs { times, spec } => {
                let mut out = Vec::new();
                for &t in times {
                    for (a, b, d) in find_connected_pairs(g, t, spec)? {
                        out.push(json!({
                            "time": label(g, t),
                            "source": format!("node:{a}"),
                            "target": format!("node:{b}"),
                            "distance": d,
                        }));
                        if out.len() > engine.config().max_candidates {
                            return Err(tgq_core::Error::SearchSpaceExceeded {
                                limit: engine.config().max_candidates,
                            }
                            .into());
                        }
                    }
                }
                out
            }
            Op::ConnectionTimes { a, b, spec, within } => connection_times(g, a, b, spec, *within)?
                .into_iter()
                .map(|t| json!({"time": label(g, t)}))
                .collect(),
            Op::Correlate(c) => {
                let corr = engine.correlator();
                let bind = |t: &GraphTarget| engine.bind_target(t);
                let series = |s: &SeriesPlan| -> Result<GraphSeries> {
                    Ok(GraphSeries {
                        attr: s.attr.clone(),
                        graph: bind(&s.graph)?,
                        interval: s.interval,
                        aggregate: s.aggregate,
                    })
                };
                let report = match c {
                    Correlation::CrossSection { a, b, members, t } => corr.cross_section(a, b, &bind(members)?, *t)?,
                    Correlation::TwoTrends { a, b, element, interval, lag } => {
                        corr.two_trends(a, b, element, *interval, *lag)?
                    }
                    Correlation::Pooled { a, b, members, interval, lag, per_element: true } => {
                        let r = corr.per_element(a, b, &bind(members)?, *interval, *lag)?;
                        for s in &r.skipped {
                            warnings.push(format!("skipped {}: {}", s.element, s.reason));
                        }
                        return Ok(r.reports.iter().map(|r| json!(r)).collect());
                    }
                    Correlation::Pooled { a, b, members, interval, lag, per_element: false } => {
                        corr.pooled(a, b, &bind(members)?, *interval, *lag)?
                    }
                    Correlation::External { series: s, name, lag } => corr.external(&series(s)?, name, *lag)?,
                    Correlation::Homogeneous { left, right, lag } => corr.homogeneous(&series(left)?, &series(right)?, *lag)?,
                };
                vec![json!(report)]
            }
        })
    }
}
