//! Random well-formed queries for round-trip and fuzz testing. Every
//! generated query passes validation; names, ids and labels deliberately
//! include keywords and characters that force quoting.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use tgq_core::correlation::SeriesAggregate;
use tgq_core::graph::Direction;
use tgq_core::pattern::{
    ConfigMetric, DistClass, DistributionPattern, Motif, PatternSpec, PresenceClass, TrendClass,
};
use tgq_core::predicate::{Predicate, ValueConstraint};
use tgq_core::relation::{
    AllenRelation, PatternOp, PointRelation, RelationFamily, RelationSpec, SetOp, StructuralOp, ValueOp,
};
use tgq_core::structural::{ConnectionMode, ConnectionSpec};
use tgq_core::task::{GraphKind, TimeKind};
use tgq_core::{AttributeValue, ElementRef, TimeLabel};

use crate::ast::*;
use crate::validate::{behavior, pattern_behavior};

const NAMES: [&str; 8] = ["w", "x", "weight", "@degree", "of", "Value", "two words", "q\"uote"];
const IDS: [&str; 7] = ["a", "b", "c", "n-1", "e.2", "x y", "S1"];
const TEXT_LABELS: [&str; 5] = ["jan", "2020-01", "t0", "x y", "AT"];
const VARS: [&str; 4] = ["g", "t", "T", "v_1"];

fn pick<R: Rng, T: Clone>(rng: &mut R, items: &[T]) -> T {
    items.choose(rng).expect("non-empty").clone()
}

fn name<R: Rng>(rng: &mut R) -> String {
    pick(rng, &NAMES).to_string()
}

fn id<R: Rng>(rng: &mut R) -> String {
    pick(rng, &IDS).to_string()
}

fn var<R: Rng>(rng: &mut R) -> String {
    pick(rng, &VARS).to_string()
}

fn number<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(-50..50) as f64,
        1 => rng.gen_range(-100.0..100.0),
        2 => rng.gen_range(0.0..1.0),
        _ => rng.gen_range(-1.0e6..1.0e6),
    }
}

fn label<R: Rng>(rng: &mut R) -> TimeLabel {
    if rng.gen_bool(0.7) {
        TimeLabel::Int(rng.gen_range(-5..40))
    } else {
        TimeLabel::Text(pick(rng, &TEXT_LABELS).to_string())
    }
}

fn range<R: Rng>(rng: &mut R) -> Range {
    (label(rng), label(rng))
}

fn value<R: Rng>(rng: &mut R) -> AttributeValue {
    match rng.gen_range(0..4) {
        0 => AttributeValue::Boolean(rng.gen()),
        1 => AttributeValue::Categorical(pick(rng, &["red", "", "with space", "OF"]).to_string()),
        _ => AttributeValue::Numeric(number(rng)),
    }
}

fn relop<R: Rng>(rng: &mut R) -> ValueOp {
    pick(rng, &[ValueOp::Eq, ValueOp::Ne, ValueOp::Lt, ValueOp::Le, ValueOp::Gt, ValueOp::Ge])
}

pub fn constraint<R: Rng>(rng: &mut R) -> ValueConstraint {
    match rng.gen_range(0..4) {
        0 => ValueConstraint::Compare {
            op: ValueOp::Within(rng.gen_range(0.0..5.0)),
            value: AttributeValue::Numeric(number(rng)),
        },
        1 => ValueConstraint::Between {
            low: number(rng),
            high: number(rng),
        },
        2 => ValueConstraint::OneOf {
            values: (0..rng.gen_range(1..4)).map(|_| value(rng)).collect(),
        },
        _ => ValueConstraint::Compare {
            op: relop(rng),
            value: value(rng),
        },
    }
}

pub fn predicate<R: Rng>(rng: &mut R, depth: usize) -> Predicate {
    if depth == 0 || rng.gen_bool(0.4) {
        return Predicate::Atom {
            attr: name(rng),
            constraint: constraint(rng),
        };
    }
    let sub = |rng: &mut R| Box::new(predicate(rng, depth - 1));
    match rng.gen_range(0..3) {
        0 => Predicate::Not { inner: sub(rng) },
        1 => Predicate::And { left: sub(rng), right: sub(rng) },
        _ => Predicate::Or { left: sub(rng), right: sub(rng) },
    }
}

fn elem<R: Rng>(rng: &mut R) -> ElementRef {
    match rng.gen_range(0..3) {
        0 => ElementRef::Node(id(rng)),
        1 => ElementRef::Edge(id(rng)),
        _ => ElementRef::Object(id(rng)),
    }
}

fn family<R: Rng>(rng: &mut R, kind: GraphKind) -> FamilyExpr {
    match kind {
        GraphKind::Element => match rng.gen_range(0..4) {
            0 => FamilyExpr::Nodes,
            1 => FamilyExpr::Edges,
            2 => FamilyExpr::Elements,
            _ => FamilyExpr::Members(id(rng)),
        },
        GraphKind::Subset => match rng.gen_range(0..3) {
            0 => FamilyExpr::Subsets,
            1 => FamilyExpr::Components,
            _ => FamilyExpr::KHop {
                k: rng.gen_range(0..4),
                center: rng.gen_bool(0.5).then(|| id(rng)),
            },
        },
        GraphKind::Pair => FamilyExpr::Pairs(rng.gen_bool(0.5).then(|| id(rng))),
        GraphKind::Any => {
            let k = pick(rng, &[GraphKind::Element, GraphKind::Subset, GraphKind::Pair]);
            family(rng, k)
        }
    }
}

fn fixed_graph<R: Rng>(rng: &mut R, kind: GraphKind) -> GraphExpr {
    match kind {
        GraphKind::Element => GraphExpr::Ref(elem(rng)),
        GraphKind::Subset => match rng.gen_range(0..4) {
            0 => GraphExpr::Ref(ElementRef::Object(id(rng))),
            1 => GraphExpr::AllNodes,
            2 => GraphExpr::AllEdges,
            _ => GraphExpr::Literal((0..rng.gen_range(1..4)).map(|_| id(rng)).collect()),
        },
        GraphKind::Pair => GraphExpr::Pair(id(rng), id(rng)),
        GraphKind::Any => {
            let k = pick(rng, &[GraphKind::Element, GraphKind::Subset, GraphKind::Pair]);
            fixed_graph(rng, k)
        }
    }
}

fn free_graph<R: Rng>(rng: &mut R, kind: GraphKind) -> GraphExpr {
    GraphExpr::Free {
        var: var(rng),
        family: rng.gen_bool(0.8).then(|| family(rng, kind)),
    }
}

fn fixed_time<R: Rng>(rng: &mut R, kind: TimeKind) -> TimeExpr {
    let point = match kind {
        TimeKind::Point => true,
        TimeKind::Interval => false,
        TimeKind::Any => rng.gen(),
    };
    if point {
        TimeExpr::At(label(rng))
    } else if rng.gen_bool(0.3) {
        TimeExpr::DuringAll
    } else {
        let (a, b) = range(rng);
        TimeExpr::During(a, b)
    }
}

fn free_time<R: Rng>(rng: &mut R, kind: TimeKind) -> TimeExpr {
    let point = match kind {
        TimeKind::Point => true,
        TimeKind::Interval => false,
        TimeKind::Any => rng.gen(),
    };
    let within = rng.gen_bool(0.5).then(|| range(rng));
    if point {
        TimeExpr::AtFree { var: var(rng), within }
    } else {
        TimeExpr::DuringFree {
            var: var(rng),
            min_len: rng.gen_bool(0.5).then(|| rng.gen_range(1..5)),
            within,
        }
    }
}

fn scope<R: Rng>(rng: &mut R, kw: BehaviorKw, free_graph_ref: bool, free_time_ref: bool) -> Scope {
    let b = behavior(kw);
    Scope {
        behavior: kw,
        attr: b.needs_attr().then(|| name(rng)),
        graph: if free_graph_ref {
            free_graph(rng, b.graph_kind())
        } else {
            fixed_graph(rng, b.graph_kind())
        },
        time: if free_time_ref {
            free_time(rng, b.time_kind())
        } else {
            fixed_time(rng, b.time_kind())
        },
    }
}

fn trend<R: Rng>(rng: &mut R) -> TrendClass {
    pick(rng, &TrendClass::ALL)
}

fn presence<R: Rng>(rng: &mut R) -> PresenceClass {
    pick(rng, &PresenceClass::ALL)
}

/// A pattern literal the behaviour `kw` produces.
pub fn pattern<R: Rng>(rng: &mut R, kw: BehaviorKw) -> PatternSpec {
    match kw {
        BehaviorKw::Trend => PatternSpec::Trend { class: trend(rng) },
        BehaviorKw::Dist if rng.gen_bool(0.5) => PatternSpec::Distribution {
            class: pick(rng, &DistClass::ALL),
        },
        BehaviorKw::Dist => {
            let min = number(rng);
            PatternSpec::DistributionShape {
                shape: DistributionPattern::from_summary(
                    number(rng),
                    rng.gen_range(0.0..10.0),
                    min,
                    min + rng.gen_range(0.0..10.0),
                    (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0.0..1.0)).collect(),
                ),
            }
        }
        BehaviorKw::AspectTrends => PatternSpec::TrendsOverGraph {
            frequencies: (0..rng.gen_range(0..4)).map(|_| (trend(rng), rng.gen_range(0..9))).collect(),
        },
        BehaviorKw::AspectDists => {
            let (mean, stddev) = match rng.gen_range(0..3) {
                0 => (Some(trend(rng)), None),
                1 => (None, Some(trend(rng))),
                _ => (Some(trend(rng)), Some(trend(rng))),
            };
            PatternSpec::DistributionOverTime { mean, stddev }
        }
        BehaviorKw::Presence => PatternSpec::Presence { class: presence(rng) },
        BehaviorKw::Config => {
            let mut metrics = BTreeMap::new();
            for _ in 0..rng.gen_range(0..4) {
                metrics.insert(pick(rng, &ConfigMetric::ALL), number(rng));
            }
            let motif = (metrics.is_empty() || rng.gen_bool(0.4)).then(|| pick(rng, &Motif::ALL));
            PatternSpec::Configuration { metrics, motif }
        }
        BehaviorKw::Pairs => PatternSpec::PairsAggregate {
            frequencies: (0..rng.gen_range(0..4)).map(|_| (presence(rng), rng.gen_range(0..9))).collect(),
        },
        BehaviorKw::ConfigTrend => PatternSpec::ConfigurationTrend {
            trends: (0..rng.gen_range(1..4)).map(|_| (pick(rng, &ConfigMetric::ALL), trend(rng))).collect(),
        },
        BehaviorKw::Value | BehaviorKw::Ref => pattern(rng, BehaviorKw::Trend),
    }
}

pub fn relation<R: Rng>(rng: &mut R) -> RelationSpec {
    match rng.gen_range(0..6) {
        0 if rng.gen_bool(0.3) => RelationSpec::Value(ValueOp::Within(rng.gen_range(0.0..5.0))),
        0 => RelationSpec::Value(relop(rng)),
        1 => RelationSpec::Pattern(pick(rng, &[PatternOp::Same, PatternOp::Different, PatternOp::Opposite])),
        2 => RelationSpec::TemporalPoint(pick(rng, &[PointRelation::Before, PointRelation::Same, PointRelation::After])),
        3 => RelationSpec::TemporalInterval(pick(rng, &AllenRelation::ALL)),
        4 => RelationSpec::Set(pick(
            rng,
            &[SetOp::Equal, SetOp::Subset, SetOp::Superset, SetOp::Disjoint, SetOp::Overlapping],
        )),
        _ => RelationSpec::Structural(match rng.gen_range(0..4) {
            0 => StructuralOp::Adjacent,
            1 => StructuralOp::Connected,
            2 => StructuralOp::DistanceLe(rng.gen_range(0..6)),
            _ => StructuralOp::ConfigurationEqual,
        }),
    }
}

fn conn<R: Rng>(rng: &mut R) -> ConnectionSpec {
    let mode = if rng.gen() { ConnectionMode::Adjacent } else { ConnectionMode::Path };
    ConnectionSpec {
        mode,
        max_distance: (mode == ConnectionMode::Path && rng.gen()).then(|| rng.gen_range(1..6)),
        direction: pick(rng, &[Direction::Any, Direction::Out, Direction::In]),
        edge_predicate: rng.gen_bool(0.3).then(|| predicate(rng, 2)),
    }
}

fn point_sel<R: Rng>(rng: &mut R) -> PointSel {
    if rng.gen() {
        PointSel::At(label(rng))
    } else {
        PointSel::Free {
            var: var(rng),
            within: rng.gen_bool(0.5).then(|| range(rng)),
        }
    }
}

fn behavior_kw<R: Rng>(rng: &mut R, structural: Option<bool>) -> BehaviorKw {
    let all: Vec<BehaviorKw> = BehaviorKw::ALL
        .into_iter()
        .filter(|b| structural.is_none_or(|s| b.is_structural() == s))
        .collect();
    pick(rng, &all)
}

fn pattern_kw<R: Rng>(rng: &mut R, structural: bool) -> BehaviorKw {
    let all: Vec<BehaviorKw> = BehaviorKw::ALL
        .into_iter()
        .filter(|b| b.is_structural() == structural && behavior(*b).pattern_kind().is_some())
        .collect();
    pick(rng, &all)
}

fn having<R: Rng>(rng: &mut R, kw: BehaviorKw) -> Option<Having> {
    if kw == BehaviorKw::Value {
        Some(Having::Value(constraint(rng)))
    } else if behavior(kw).pattern_kind().is_some() {
        Some(Having::Pattern(pattern(rng, kw)))
    } else {
        None
    }
}

/// A side with at least one free reference or a constraint when `open`.
fn side<R: Rng>(rng: &mut R, open: bool) -> Side {
    let kw = behavior_kw(rng, None);
    let (fg, ft) = if open {
        match rng.gen_range(0..3) {
            0 => (true, false),
            1 => (false, true),
            _ => (true, true),
        }
    } else {
        (false, false)
    };
    let scope = scope(rng, kw, fg, ft);
    let having = if open && rng.gen_bool(0.4) { having(rng, kw) } else { None };
    Side { scope, having }
}

fn series<R: Rng>(rng: &mut R, interval: bool) -> Series {
    let kind = pick(rng, &[GraphKind::Element, GraphKind::Subset]);
    Series::Graph {
        aggregate: rng.gen_bool(0.3).then(|| {
            pick(rng, &[SeriesAggregate::Mean, SeriesAggregate::Sum, SeriesAggregate::Min, SeriesAggregate::Max])
        }),
        attr: name(rng),
        graph: fixed_graph(rng, kind),
        time: fixed_time(rng, if interval { TimeKind::Interval } else { TimeKind::Point }),
    }
}

fn correlate<R: Rng>(rng: &mut R) -> Correlate {
    let interval = rng.gen_bool(0.8);
    let lag = if interval && rng.gen() { rng.gen_range(-3..4) } else { 0 };
    match rng.gen_range(0..3) {
        0 => {
            let left = series(rng, interval);
            let external = Series::External(name(rng));
            let (left, right) = if rng.gen() { (left, external) } else { (external, left) };
            Correlate { left, right, lag, per_element: false }
        }
        1 if interval => {
            let graph = fixed_graph(rng, GraphKind::Subset);
            let time = fixed_time(rng, TimeKind::Interval);
            let a = name(rng);
            let b = NAMES.iter().find(|n| **n != a).expect("distinct names").to_string();
            let mk = |attr: String| Series::Graph {
                aggregate: None,
                attr,
                graph: graph.clone(),
                time: time.clone(),
            };
            Correlate {
                left: mk(a),
                right: mk(b),
                lag,
                per_element: true,
            }
        }
        _ => Correlate {
            left: series(rng, interval),
            right: series(rng, interval),
            lag,
            per_element: false,
        },
    }
}

fn find<R: Rng>(rng: &mut R) -> Find {
    let scope = match rng.gen_range(0..3) {
        0 => Some(FindScope::Element(elem(rng))),
        1 => Some(FindScope::Family(family(rng, GraphKind::Element))),
        _ => None,
    };
    let time = match rng.gen_range(0..4) {
        0 => Some(FindTime::At(label(rng))),
        1 => {
            let (a, b) = range(rng);
            Some(FindTime::During(a, b))
        }
        2 => Some(FindTime::DuringAll),
        _ => None,
    };
    let mut targets = Vec::new();
    if !matches!(time, Some(FindTime::At(_))) && rng.gen_bool(0.7) {
        targets.push(Target::Time);
    }
    if !matches!(scope, Some(FindScope::Element(_))) && (targets.is_empty() || rng.gen()) {
        targets.push(Target::Graph);
    }
    if targets.is_empty() {
        targets.push(Target::Time);
        return Find {
            targets,
            predicate: predicate(rng, 3),
            scope,
            time: None,
        };
    }
    if rng.gen_bool(0.2) {
        targets.reverse();
    }
    Find {
        targets,
        predicate: predicate(rng, 3),
        scope,
        time,
    }
}

/// One random query that passes validation.
pub fn query<R: Rng>(rng: &mut R) -> Query {
    match rng.gen_range(0..13) {
        0 => Query::Lookup {
            attr: name(rng),
            element: elem(rng),
            time: label(rng),
        },
        1 => Query::InverseLookup(find(rng)),
        2 => {
            let kw = behavior_kw(rng, Some(false));
            Query::Characterize(scope(rng, kw, false, false))
        }
        3 => {
            let kw = behavior_kw(rng, Some(true));
            Query::StructCharacterize(scope(rng, kw, false, false))
        }
        4 | 5 => {
            let structural = rng.gen_range(0..2) == 1;
            let kw = pattern_kw(rng, structural);
            let (fg, ft) = match rng.gen_range(0..3) {
                0 => (true, false),
                1 => (false, true),
                _ => (true, true),
            };
            let s = scope(rng, kw, fg, ft);
            let search = Search {
                pattern: pattern(rng, kw),
                attr: s.attr,
                graph: s.graph,
                time: s.time,
            };
            debug_assert_eq!(pattern_behavior(&search.pattern), Some(kw));
            if structural {
                Query::StructSearch(search)
            } else {
                Query::PatternSearch(search)
            }
        }
        6 => {
            let left = side(rng, false);
            let kw = left.scope.behavior;
            let right = match rng.gen_range(0..3) {
                0 if kw == BehaviorKw::Value => CompareRhs::Value(value(rng)),
                1 if behavior(kw).pattern_kind().is_some() => CompareRhs::Pattern(pattern(rng, kw)),
                _ => CompareRhs::Side(side(rng, false)),
            };
            Query::Compare(Compare {
                left,
                right,
                using: rng.gen_bool(0.5).then(|| Using::Relation(relation(rng))),
                all_pairs: false,
            })
        }
        7 => {
            let using = match rng.gen_range(0..3) {
                0 => Some(Using::Relation(relation(rng))),
                1 => Some(Using::Families(
                    (0..rng.gen_range(1..4)).map(|_| pick(rng, &RelationFamily::ALL)).collect(),
                )),
                _ => None,
            };
            Query::InverseCompare(Compare {
                left: side(rng, true),
                right: {
                    let open = rng.gen();
                    CompareRhs::Side(side(rng, open))
                },
                using,
                all_pairs: rng.gen(),
            })
        }
        8 => {
            let (left, right) = if rng.gen() {
                let open = rng.gen();
                (side(rng, true), side(rng, open))
            } else {
                (side(rng, false), side(rng, true))
            };
            Query::RelationSeek(Seek {
                left,
                right,
                relation: relation(rng),
                aux: (0..rng.gen_range(0..3))
                    .map(|_| Aux {
                        relation: relation(rng),
                        negated: rng.gen(),
                        at: rng.gen_bool(0.3).then(|| label(rng)),
                    })
                    .collect(),
            })
        }
        9 => Query::Connection {
            a: id(rng),
            b: id(rng),
            spec: conn(rng),
            time: label(rng),
        },
        10 => Query::ConnectedSearch {
            from: rng.gen_bool(0.5).then(|| id(rng)),
            spec: conn(rng),
            time: point_sel(rng),
        },
        11 => Query::ConnectionTimes {
            a: id(rng),
            b: id(rng),
            spec: conn(rng),
            within: rng.gen_bool(0.5).then(|| range(rng)),
        },
        _ => Query::Correlate(correlate(rng)),
    }
}
