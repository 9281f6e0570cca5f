//! Worked examples for each engine operation on small hand-built graphs.

use tgq_core::correlation::{GraphSeries, SeriesAggregate};
use tgq_core::pattern::{
    classify_trend, describe_distribution, histogram_similarity, similarity, AspectualPattern, DistClass,
    Pattern, PatternConfig, PatternSpec, PresenceClass, StructuralPattern, TrendClass,
};
use tgq_core::predicate::{Predicate, ValueConstraint};
use tgq_core::reference::{GraphRef, TimeRef};
use tgq_core::relation::{
    evaluate, AllenRelation, Operand, PatternOp, PointRelation, RelationContext, RelationSpec, SetOp,
    StructuralOp, ValueOp,
};
use tgq_core::structural::{connection_times, find_connected, find_connected_pairs, find_connection, ConnectionSpec};
use tgq_core::task::{
    AspectAxis, AuxRelation, Behavior, BehaviorScope, Characteristic, CompareOperand, CompareVariant,
    ElementSelection, Engine, EngineConfig, GraphFamily, GraphTarget, RelationRequest, SearchSpace, Side,
    SubsetRef, TimeFamily, TimeSelection,
};
use tgq_core::{AttributeValue, ElementRef, TemporalGraph, TimeInterval, ValueSource};

fn graph(lines: &[&str]) -> TemporalGraph {
    TemporalGraph::from_jsonl(&lines.join("\n")).unwrap()
}

fn iv(a: usize, b: usize) -> TimeInterval {
    TimeInterval { start: a, end: b }
}

fn node(id: &str) -> ElementRef {
    ElementRef::node(id)
}

/// Node `a` with w recorded at t0, t2 and t3, node `b` rising, node `c`
/// falling; edge a-b alive throughout, b-c from t1.
fn toy() -> TemporalGraph {
    graph(&[
        r#"{"type":"node","id":"a","start":0,"end":3}"#,
        r#"{"type":"node","id":"b","start":0,"end":3}"#,
        r#"{"type":"node","id":"c","start":0,"end":3}"#,
        r#"{"type":"edge","id":"ab","src":"a","dst":"b","start":0,"end":3}"#,
        r#"{"type":"edge","id":"bc","src":"b","dst":"c","start":1,"end":3}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":0,"value":1.0}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":2,"value":3.0}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":3,"value":0.5}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":0,"value":5.0}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":1,"value":6.0}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":2,"value":7.0}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":3,"value":8.0}"#,
        r#"{"type":"attr","elem":"node:c","name":"w","t":0,"value":9.0}"#,
        r#"{"type":"attr","elem":"node:c","name":"w","t":1,"value":6.5}"#,
        r#"{"type":"attr","elem":"node:c","name":"w","t":2,"value":4.5}"#,
        r#"{"type":"attr","elem":"node:c","name":"w","t":3,"value":2.0}"#,
        r#"{"type":"subset","name":"S1","members":["node:a","node:b"]}"#,
        r#"{"type":"subset","name":"S2","members":["node:c"]}"#,
        r#"{"type":"series","name":"ext","t":0,"value":1.0}"#,
        r#"{"type":"series","name":"ext","t":1,"value":3.0}"#,
        r#"{"type":"series","name":"ext","t":2,"value":4.0}"#,
        r#"{"type":"series","name":"ext","t":3,"value":6.0}"#,
    ])
}

fn engine(g: &TemporalGraph) -> Engine<'_> {
    Engine::new(g, EngineConfig::default()).unwrap()
}

#[test]
fn load_counts_and_errors() {
    let g = graph(&[
        r#"{"type":"node","id":"a","start":0}"#,
        r#"{"type":"node","id":"b","start":0}"#,
        r#"{"type":"node","id":"c","start":1}"#,
        r#"{"type":"edge","id":"e1","src":"a","dst":"b","start":0}"#,
        r#"{"type":"edge","id":"e2","src":"b","dst":"c","start":2}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":0,"value":1}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":2,"value":2}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":1,"value":3}"#,
        r#"{"type":"attr","elem":"node:c","name":"w","t":2,"value":4}"#,
    ]);
    assert_eq!((g.nodes().len(), g.edges().len(), g.domain().len()), (3, 2, 3));

    let empty = TemporalGraph::from_jsonl("").unwrap();
    assert_eq!((empty.nodes().len(), empty.domain().len()), (0, 0));

    let absent = TemporalGraph::from_jsonl(
        "{\"type\":\"node\",\"id\":\"a\",\"start\":1}\n{\"type\":\"attr\",\"elem\":\"node:a\",\"name\":\"w\",\"t\":0,\"value\":1}",
    )
    .unwrap_err();
    assert_eq!(absent.code(), "CONSISTENCY_ERROR");

    let mut lines = vec![r#"{"type":"node","id":"a","start":0}"#; 6];
    lines.push("{not json");
    let err = TemporalGraph::from_jsonl(&lines.join("\n")).unwrap_err();
    assert_eq!(err.code(), "SCHEMA_ERROR");
    assert!(err.to_string().contains("line 7"), "{err}");
}

#[test]
fn eval_carries_forward_and_rejects_absent() {
    let g = toy();
    let at = |t| g.eval(t, &node("a"), "w").unwrap();
    assert_eq!(at(0).value, AttributeValue::Numeric(1.0));
    assert_eq!(at(0).source, ValueSource::Recorded);
    assert_eq!(at(1).value, AttributeValue::Numeric(1.0));
    assert_eq!(at(1).source, ValueSource::CarriedForward);
    let g2 = graph(&[
        r#"{"type":"node","id":"a","start":0,"end":0}"#,
        r#"{"type":"node","id":"z","start":0,"end":1}"#,
        r#"{"type":"attr","elem":"node:z","name":"w","t":0,"value":1}"#,
    ]);
    assert_eq!(g2.eval(1, &node("a"), "w").unwrap_err().code(), "ABSENT_ELEMENT");
    assert_eq!(g2.eval(0, &node("a"), "w").unwrap_err().code(), "MISSING_VALUE");
}

#[test]
fn snapshot_membership_follows_existence() {
    let g = graph(&[
        r#"{"type":"node","id":"a","start":0,"end":3}"#,
        r#"{"type":"node","id":"b","start":0,"end":3}"#,
        r#"{"type":"edge","id":"e","src":"a","dst":"b","start":1,"end":3}"#,
    ]);
    assert!(g.snapshot(0).edges().is_empty());
    assert_eq!(g.snapshot(2).edges(), &[0]);
}

#[test]
fn trend_examples() {
    let s = |v: &[f64]| -> Vec<(f64, f64)> { v.iter().enumerate().map(|(i, &x)| (i as f64, x)).collect() };
    assert_eq!(classify_trend(&s(&[1.0, 2.0, 3.0, 4.0]), 0.05).class, TrendClass::Increasing);
    assert_eq!(classify_trend(&s(&[5.0, 5.0, 5.0]), 0.05).class, TrendClass::Constant);
    let peak = classify_trend(&s(&[1.0, 4.0, 2.0]), 0.05);
    assert_eq!(peak.class, TrendClass::Peak);
    assert_eq!(peak.extremum_pos, Some(0.5));
    assert_eq!(classify_trend(&s(&[3.0]), 0.05).class, TrendClass::Degenerate);
}

#[test]
fn distribution_examples() {
    let d = describe_distribution(&[2.0, 2.0, 2.0], 8).unwrap();
    assert_eq!((d.mean, d.stddev, d.class_hint), (2.0, 0.0, DistClass::Concentrated));
    let values: Vec<f64> = (1..=8).map(f64::from).collect();
    let u = describe_distribution(&values, 8).unwrap();
    assert!(u.histogram.iter().all(|&b| (b - 0.125).abs() < 1e-12));
    assert_eq!(u.class_hint, DistClass::Uniform);
    let one = describe_distribution(&[4.0], 8).unwrap();
    assert_eq!((one.count, one.min, one.max), (1, 4.0, 4.0));
    assert!((one.histogram.iter().sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn similarity_examples() {
    let cfg = PatternConfig::default();
    let s = |v: &[f64]| -> Vec<(f64, f64)> { v.iter().enumerate().map(|(i, &x)| (i as f64, x)).collect() };
    let up = Pattern::Trend(classify_trend(&s(&[1.0, 2.0, 3.0]), 0.05));
    let down = Pattern::Trend(classify_trend(&s(&[3.0, 2.0, 1.0]), 0.05));
    assert_eq!(similarity(&up, &up, &cfg).unwrap().score, 1.0);
    let sim = similarity(&up, &down, &cfg).unwrap();
    assert_eq!((sim.score, sim.opposite), (0.0, true));
    let a = [0.25, 0.25, 0.25, 0.25];
    let b = [0.5, 0.25, 0.25, 0.0];
    assert!((histogram_similarity(&a, &b).unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn aspectual_examples() {
    let g = toy();
    let e = engine(&g);
    let all_up = graph(&[
        r#"{"type":"node","id":"p","start":0,"end":2}"#,
        r#"{"type":"node","id":"q","start":0,"end":2}"#,
        r#"{"type":"node","id":"r","start":0,"end":2}"#,
        r#"{"type":"attr","elem":"node:p","name":"w","t":0,"value":1}"#,
        r#"{"type":"attr","elem":"node:p","name":"w","t":1,"value":2}"#,
        r#"{"type":"attr","elem":"node:p","name":"w","t":2,"value":3}"#,
        r#"{"type":"attr","elem":"node:q","name":"w","t":0,"value":0}"#,
        r#"{"type":"attr","elem":"node:q","name":"w","t":1,"value":5}"#,
        r#"{"type":"attr","elem":"node:q","name":"w","t":2,"value":9}"#,
        r#"{"type":"attr","elem":"node:r","name":"w","t":0,"value":2}"#,
        r#"{"type":"attr","elem":"node:r","name":"w","t":1,"value":3}"#,
        r#"{"type":"attr","elem":"node:r","name":"w","t":2,"value":4}"#,
    ]);
    let e2 = engine(&all_up);
    let scope = BehaviorScope::new(
        Behavior::Aspect(AspectAxis::TrendsOverGraph),
        Some("w"),
        Some(GraphTarget::Subset(SubsetRef::AllNodes)),
        Some(TimeRef::Interval(iv(0, 2))),
    );
    let r = e2.characterize(&scope).unwrap();
    match r.characteristic {
        Characteristic::Pattern(Pattern::Aspectual(AspectualPattern::TrendsOverGraph { frequencies, total })) => {
            assert_eq!(total, 3);
            assert_eq!(frequencies.get(&TrendClass::Increasing), Some(&3));
        }
        other => panic!("{other:?}"),
    }

    let flat = graph(&[
        r#"{"type":"time","t":1}"#,
        r#"{"type":"node","id":"p","start":0,"end":2}"#,
        r#"{"type":"node","id":"q","start":0,"end":2}"#,
        r#"{"type":"attr","elem":"node:p","name":"w","t":0,"value":1}"#,
        r#"{"type":"attr","elem":"node:q","name":"w","t":0,"value":3}"#,
    ]);
    let e3 = engine(&flat);
    let scope = BehaviorScope::new(
        Behavior::Aspect(AspectAxis::DistributionOverTime),
        Some("w"),
        Some(GraphTarget::Subset(SubsetRef::AllNodes)),
        Some(TimeRef::Interval(iv(0, 2))),
    );
    match e3.characterize(&scope).unwrap().characteristic {
        Characteristic::Pattern(Pattern::Aspectual(AspectualPattern::DistributionOverTime {
            mean_trend,
            stddev_trend,
            ..
        })) => {
            assert_eq!(mean_trend.class, TrendClass::Constant);
            assert_eq!(stddev_trend.class, TrendClass::Constant);
        }
        other => panic!("{other:?}"),
    }

    // Mixed toy graph: frequency table equals per-node trends.
    let scope = BehaviorScope::new(
        Behavior::Aspect(AspectAxis::TrendsOverGraph),
        Some("w"),
        Some(GraphTarget::Subset(SubsetRef::AllNodes)),
        Some(TimeRef::Interval(iv(0, 3))),
    );
    let Characteristic::Pattern(Pattern::Aspectual(AspectualPattern::TrendsOverGraph { frequencies, .. })) =
        e.characterize(&scope).unwrap().characteristic
    else {
        panic!()
    };
    let mut expected = std::collections::BTreeMap::new();
    for id in ["a", "b", "c"] {
        let s = BehaviorScope::new(
            Behavior::Trend,
            Some("w"),
            Some(GraphTarget::Element(node(id))),
            Some(TimeRef::Interval(iv(0, 3))),
        );
        let Characteristic::Pattern(Pattern::Trend(t)) = e.characterize(&s).unwrap().characteristic else {
            panic!()
        };
        *expected.entry(t.class).or_insert(0) += 1;
    }
    assert_eq!(frequencies, expected);
}

#[test]
fn relation_examples() {
    let g = toy();
    let cfg = PatternConfig::default();
    let c = RelationContext { graph: &g, patterns: &cfg, time: None };
    let t = |a, b| Operand::Time(TimeRef::Interval(iv(a, b)));
    assert_eq!(AllenRelation::between(iv(0, 2), iv(3, 5)), AllenRelation::Before);
    assert_eq!(AllenRelation::between(iv(0, 4), iv(2, 6)), AllenRelation::Overlaps);
    let out = evaluate(&RelationSpec::TemporalInterval(AllenRelation::Before), t(0, 1), t(2, 3), &c).unwrap();
    assert!(out.holds);

    let s1 = GraphRef::Subset(tgq_core::Subset::nodes("X", ["a".to_string(), "b".to_string()]));
    let s2 = GraphRef::Subset(tgq_core::Subset::nodes("Y", ["a".to_string(), "b".to_string()]));
    let eq = evaluate(&RelationSpec::Set(SetOp::Equal), Operand::Graph(&s1), Operand::Graph(&s2), &c).unwrap();
    assert!(eq.holds);

    let a = GraphRef::Element(node("a"));
    let cc = GraphRef::Element(node("c"));
    let c2 = RelationContext { graph: &g, patterns: &cfg, time: Some(2) };
    let conn = evaluate(&RelationSpec::Structural(StructuralOp::Connected), Operand::Graph(&a), Operand::Graph(&cc), &c2).unwrap();
    assert!(conn.holds);
    let d2 = evaluate(&RelationSpec::Structural(StructuralOp::DistanceLe(2)), Operand::Graph(&a), Operand::Graph(&cc), &c2).unwrap();
    assert!(d2.holds);
    let d1 = evaluate(&RelationSpec::Structural(StructuralOp::DistanceLe(1)), Operand::Graph(&a), Operand::Graph(&cc), &c2).unwrap();
    assert!(!d1.holds);
    let missing = evaluate(&RelationSpec::Structural(StructuralOp::Adjacent), Operand::Graph(&a), Operand::Graph(&cc), &c).unwrap_err();
    assert_eq!(missing.code(), "MISSING_TIME_CONTEXT");
    let wrong = evaluate(&RelationSpec::Set(SetOp::Equal), t(0, 1), t(0, 1), &c).unwrap_err();
    assert_eq!(wrong.code(), "FAMILY_MISMATCH");
}

#[test]
fn lookups() {
    let g = toy();
    let e = engine(&g);
    assert_eq!(e.direct_lookup(2, &node("a"), "w").unwrap().value, AttributeValue::Numeric(3.0));
    let absent = graph(&[
        r#"{"type":"node","id":"a","start":0,"end":0}"#,
        r#"{"type":"node","id":"b","start":0,"end":1}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":0,"value":1}"#,
    ]);
    assert_eq!(engine(&absent).direct_lookup(1, &node("a"), "w").unwrap_err().code(), "ABSENT_ELEMENT");

    let eq1 = Predicate::atom("w", ValueConstraint::Compare { op: ValueOp::Eq, value: 1.0.into() });
    let hits = e
        .inverse_lookup(&eq1, &ElementSelection::Family(GraphFamily::Nodes), &TimeSelection::Within(None))
        .unwrap();
    let found: Vec<(usize, ElementRef)> = hits.into_iter().map(|h| (h.time, h.element)).collect();
    assert_eq!(found, vec![(0, node("a")), (1, node("a"))]);

    let big = Predicate::atom("w", ValueConstraint::Compare { op: ValueOp::Gt, value: 50.0.into() });
    assert!(e
        .inverse_lookup(&big, &ElementSelection::Family(GraphFamily::Nodes), &TimeSelection::Within(None))
        .unwrap()
        .is_empty());
}

fn trend_scope(id: Option<&str>, span: Option<(usize, usize)>) -> BehaviorScope {
    BehaviorScope::new(
        Behavior::Trend,
        Some("w"),
        id.map(|i| GraphTarget::Element(node(i))),
        span.map(|(a, b)| TimeRef::Interval(iv(a, b))),
    )
}

#[test]
fn characterize_and_search() {
    let g = toy();
    let e = engine(&g);
    let r = e.characterize(&trend_scope(Some("b"), Some((0, 3)))).unwrap();
    let Characteristic::Pattern(Pattern::Trend(t)) = &r.characteristic else { panic!() };
    assert_eq!(t.class, TrendClass::Increasing);

    let eq = graph(&[
        r#"{"type":"node","id":"a","start":0,"end":0}"#,
        r#"{"type":"node","id":"b","start":0,"end":0}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":0,"value":2}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":0,"value":2}"#,
    ]);
    let q2 = BehaviorScope::new(
        Behavior::Distribution,
        Some("w"),
        Some(GraphTarget::Subset(SubsetRef::AllNodes)),
        Some(TimeRef::Point(0)),
    );
    let Characteristic::Pattern(Pattern::Distribution(d)) = engine(&eq).characterize(&q2).unwrap().characteristic else {
        panic!()
    };
    assert_eq!(d.class_hint, DistClass::Concentrated);

    let space = SearchSpace { graph: Some(GraphFamily::Nodes), time: None };
    let hits = e
        .pattern_search(&PatternSpec::Trend { class: TrendClass::Increasing }, &trend_scope(None, Some((0, 3))), &space)
        .unwrap();
    let ids: Vec<String> = hits.iter().map(|h| h.binding.graph.label()).collect();
    assert_eq!(ids, vec!["node:b"]);

    let mut cfg = EngineConfig::default();
    cfg.patterns.similarity_threshold = 0.0;
    let loose = Engine::new(&g, cfg).unwrap();
    let all = loose
        .pattern_search(&PatternSpec::Trend { class: TrendClass::Increasing }, &trend_scope(None, Some((0, 3))), &space)
        .unwrap();
    assert_eq!(all.len(), 3);
}

#[test]
fn search_space_cap() {
    let g = toy();
    let mut cfg = EngineConfig::default();
    cfg.max_candidates = 2;
    let e = Engine::new(&g, cfg).unwrap();
    let space = SearchSpace {
        graph: Some(GraphFamily::Nodes),
        time: Some(TimeFamily::Windows { min_len: 2, within: None }),
    };
    let err = e
        .pattern_search(&PatternSpec::Trend { class: TrendClass::Increasing }, &trend_scope(None, None), &space)
        .unwrap_err();
    assert_eq!(err.code(), "SEARCH_SPACE_EXCEEDED");
}

fn value_scope(id: &str, t: usize) -> BehaviorScope {
    BehaviorScope::new(Behavior::Value, Some("w"), Some(GraphTarget::Element(node(id))), Some(TimeRef::Point(t)))
}

#[test]
fn direct_comparisons() {
    let g = toy();
    let e = engine(&g);
    let r = e
        .direct_compare(&CompareOperand::Scope(value_scope("a", 0)), &CompareOperand::Scope(value_scope("a", 2)), None)
        .unwrap();
    assert_eq!(r.order, Some(ValueOp::Lt));
    assert_eq!(r.variant, CompareVariant::Evolutionary);

    let same = e
        .direct_compare(
            &CompareOperand::Scope(trend_scope(Some("b"), Some((0, 3)))),
            &CompareOperand::Scope(trend_scope(Some("b"), Some((0, 3)))),
            None,
        )
        .unwrap();
    assert_eq!(same.similarity.unwrap().score, 1.0);
    let v = e
        .direct_compare(&CompareOperand::Scope(value_scope("b", 1)), &CompareOperand::Scope(value_scope("b", 1)), None)
        .unwrap();
    assert_eq!((v.order, v.variant), (Some(ValueOp::Eq), CompareVariant::Static));

    let lit = e
        .direct_compare(
            &CompareOperand::Scope(trend_scope(Some("b"), Some((0, 2)))),
            &CompareOperand::Pattern(PatternSpec::Trend { class: TrendClass::Increasing }),
            Some(&RelationSpec::Pattern(PatternOp::Same)),
        )
        .unwrap();
    assert_eq!(lit.pattern_relation, Some(PatternOp::Same));
    assert!(lit.relation.unwrap().1.holds);

    let ctx = e
        .direct_compare(&CompareOperand::Scope(value_scope("a", 1)), &CompareOperand::Scope(value_scope("b", 1)), None)
        .unwrap();
    assert_eq!(ctx.variant, CompareVariant::ContextualSameTime);
}

fn value_side(constraint: f64, id: &str) -> Side {
    Side {
        scope: BehaviorScope::new(Behavior::Value, Some("w"), Some(GraphTarget::Element(node(id))), None),
        space: SearchSpace { graph: None, time: Some(TimeFamily::Points { within: None }) },
        constraint: Some(tgq_core::task::Constraint::Value(ValueConstraint::Compare {
            op: ValueOp::Eq,
            value: constraint.into(),
        })),
    }
}

#[test]
fn inverse_comparisons() {
    let g = toy();
    let e = engine(&g);
    let r = e
        .inverse_compare(
            &value_side(1.0, "a"),
            &value_side(3.0, "a"),
            &RelationRequest::Families(vec![tgq_core::relation::RelationFamily::TemporalPoint]),
            false,
        )
        .unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].relations[0].relation, RelationSpec::TemporalPoint(PointRelation::Before));

    let same = e
        .inverse_compare(
            &value_side(3.0, "a"),
            &value_side(3.0, "a"),
            &RelationRequest::Families(vec![tgq_core::relation::RelationFamily::TemporalPoint]),
            true,
        )
        .unwrap();
    assert!(same.iter().all(|p| p.left.binding != p.right.binding));

    let none = e
        .inverse_compare(&value_side(42.0, "a"), &value_side(3.0, "a"), &RelationRequest::Families(vec![]), false)
        .unwrap_err();
    assert_eq!(none.code(), "UNRESOLVED_SIDE");

    // Pattern over named subsets at a fixed time: report the set relation.
    let side = Side {
        scope: BehaviorScope::new(Behavior::Distribution, Some("w"), None, Some(TimeRef::Point(1))),
        space: SearchSpace { graph: Some(GraphFamily::NamedSubsets), time: None },
        constraint: None,
    };
    let pairs = e
        .inverse_compare(&side, &side, &RelationRequest::Families(vec![tgq_core::relation::RelationFamily::Set]), true)
        .unwrap();
    assert!(pairs
        .iter()
        .any(|p| p.relations.iter().any(|r| r.relation == RelationSpec::Set(SetOp::Disjoint))));
}

#[test]
fn relation_seeking() {
    let g = graph(&[
        r#"{"type":"node","id":"a","start":0,"end":2}"#,
        r#"{"type":"node","id":"b","start":0,"end":2}"#,
        r#"{"type":"node","id":"c","start":0,"end":2}"#,
        r#"{"type":"edge","id":"ab","src":"a","dst":"b","start":0,"end":2}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":0,"value":1}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":1,"value":2}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":2,"value":3}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":0,"value":1}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":1,"value":0}"#,
        r#"{"type":"attr","elem":"node:b","name":"w","t":2,"value":-1}"#,
        r#"{"type":"attr","elem":"node:c","name":"w","t":0,"value":7}"#,
        r#"{"type":"attr","elem":"node:c","name":"w","t":1,"value":8}"#,
        r#"{"type":"attr","elem":"node:c","name":"w","t":2,"value":6}"#,
    ]);
    let e = engine(&g);
    let side = Side {
        scope: BehaviorScope::new(Behavior::Value, Some("w"), None, Some(TimeRef::Point(0))),
        space: SearchSpace { graph: Some(GraphFamily::Nodes), time: None },
        constraint: None,
    };
    let hits = e.relation_seek(&RelationSpec::Value(ValueOp::Eq), &side, &side, &[]).unwrap();
    let pairs: Vec<(String, String)> = hits.iter().map(|h| (h.left.binding.graph.label(), h.right.binding.graph.label())).collect();
    assert_eq!(pairs, vec![("node:a".to_string(), "node:b".to_string())]);

    let single = graph(&[
        r#"{"type":"node","id":"a","start":0,"end":1}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":0,"value":1}"#,
    ]);
    let es = engine(&single);
    let free = Side {
        scope: BehaviorScope::new(Behavior::Value, Some("w"), None, None),
        space: SearchSpace { graph: Some(GraphFamily::Nodes), time: Some(TimeFamily::Points { within: None }) },
        constraint: None,
    };
    let aux = [AuxRelation {
        relation: RelationSpec::TemporalPoint(PointRelation::Same),
        negated: false,
        at: None,
    }];
    assert!(es.relation_seek(&RelationSpec::Value(ValueOp::Lt), &free, &free, &aux).unwrap().is_empty());

    let trends = Side {
        scope: trend_scope(None, Some((0, 2))),
        space: SearchSpace { graph: Some(GraphFamily::Nodes), time: None },
        constraint: None,
    };
    let aux = [AuxRelation {
        relation: RelationSpec::Structural(StructuralOp::Adjacent),
        negated: false,
        at: Some(0),
    }];
    let hits = e.relation_seek(&RelationSpec::Pattern(PatternOp::Opposite), &trends, &trends, &aux).unwrap();
    let pairs: Vec<(String, String)> = hits.iter().map(|h| (h.left.binding.graph.label(), h.right.binding.graph.label())).collect();
    assert_eq!(pairs, vec![("node:a".to_string(), "node:b".to_string())]);
}

#[test]
fn structural_examples() {
    let g = toy();
    let adj = ConnectionSpec::adjacent();
    let path = ConnectionSpec::path();
    let c = find_connection(&g, "a", "b", 1, &adj).unwrap();
    assert_eq!((c.connected, c.distance), (true, Some(1)));
    let c = find_connection(&g, "a", "c", 1, &path).unwrap();
    assert_eq!(c.distance, Some(2));
    assert_eq!(c.path, vec!["a", "b", "c"]);
    assert!(!find_connection(&g, "a", "c", 0, &path).unwrap().connected);

    assert_eq!(find_connected(&g, "a", 0, &adj).unwrap(), vec![("b".to_string(), 1)]);
    let mut within2 = ConnectionSpec::path();
    within2.max_distance = Some(2);
    assert_eq!(find_connected(&g, "a", 1, &within2).unwrap().len(), 2);

    let heavy = ConnectionSpec {
        edge_predicate: Some(Predicate::atom("w", ValueConstraint::Compare { op: ValueOp::Gt, value: 4.0.into() })),
        ..ConnectionSpec::adjacent()
    };
    assert!(find_connected(&g, "a", 1, &heavy).unwrap().is_empty());

    let pairs = find_connected_pairs(&g, 0, &adj).unwrap();
    assert_eq!(pairs, vec![("a".to_string(), "b".to_string(), 1)]);
    assert_eq!(connection_times(&g, "b", "c", &adj, None).unwrap(), vec![1, 2, 3]);
    assert!(connection_times(&g, "a", "c", &adj, None).unwrap().is_empty());
}

#[test]
fn structural_patterns() {
    let g = graph(&[
        r#"{"type":"node","id":"a","start":0,"end":2}"#,
        r#"{"type":"node","id":"b","start":0,"end":2}"#,
        r#"{"type":"node","id":"c","start":0,"end":2}"#,
        r#"{"type":"edge","id":"ab","src":"a","dst":"b","start":0,"end":2}"#,
        r#"{"type":"edge","id":"bc","src":"b","dst":"c","start":1,"end":2}"#,
        r#"{"type":"edge","id":"ac","src":"a","dst":"c","start":2,"end":2}"#,
    ]);
    let e = engine(&g);
    let pair = BehaviorScope::new(
        Behavior::Presence,
        None,
        Some(GraphTarget::Pair("a".into(), "b".into())),
        Some(TimeRef::Interval(iv(0, 2))),
    );
    let Characteristic::Pattern(Pattern::Structural(StructuralPattern::Presence(p))) = e.characterize(&pair).unwrap().characteristic else {
        panic!()
    };
    assert_eq!((p.class, p.bits.as_str()), (PresenceClass::Always, "111"));

    let config = BehaviorScope::new(
        Behavior::Configuration,
        None,
        Some(GraphTarget::Subset(SubsetRef::AllNodes)),
        Some(TimeRef::Point(2)),
    );
    let Characteristic::Pattern(Pattern::Structural(StructuralPattern::Configuration(cfg))) = e.characterize(&config).unwrap().characteristic else {
        panic!()
    };
    use tgq_core::pattern::ConfigMetric;
    assert_eq!(cfg.metrics[&ConfigMetric::Density], 1.0);
    assert_eq!(cfg.metrics[&ConfigMetric::Triangles], 1.0);

    let growth = BehaviorScope::new(
        Behavior::ConfigurationTrend,
        None,
        Some(GraphTarget::Subset(SubsetRef::AllNodes)),
        Some(TimeRef::Interval(iv(0, 2))),
    );
    let Characteristic::Pattern(Pattern::Structural(StructuralPattern::ConfigurationTrend(ct))) = e.characterize(&growth).unwrap().characteristic else {
        panic!()
    };
    assert_eq!(ct.trends[&ConfigMetric::Density].class, TrendClass::Increasing);

    let appearing = Side {
        scope: BehaviorScope::new(Behavior::Presence, None, None, Some(TimeRef::Interval(iv(0, 2)))),
        space: SearchSpace { graph: Some(GraphFamily::NodePairs(None)), time: None },
        constraint: None,
    };
    let hits = e
        .pattern_search(&PatternSpec::Presence { class: PresenceClass::Appearing }, &appearing.scope, &appearing.space)
        .unwrap();
    let labels: Vec<String> = hits.iter().map(|h| h.binding.graph.label()).collect();
    assert_eq!(labels, vec!["(node:a, node:c)", "(node:b, node:c)"]);

    let cliques = e
        .pattern_search(
            &PatternSpec::Configuration { metrics: [(ConfigMetric::Density, 1.0)].into(), motif: None },
            &BehaviorScope::new(Behavior::Configuration, None, None, Some(TimeRef::Point(0))),
            &SearchSpace { graph: Some(GraphFamily::Components), time: None },
        )
        .unwrap();
    let labels: Vec<String> = cliques.iter().map(|h| h.binding.graph.label()).collect();
    assert!(labels.contains(&"subset:component:a".to_string()), "{labels:?}");
}

#[test]
fn correlations() {
    let g = toy();
    let e = engine(&g);
    let c = e.correlator();
    let b = c.two_trends("w", "w", &node("b"), iv(0, 3), 0).unwrap();
    assert!((b.r - 1.0).abs() < 1e-12);
    let everything = GraphRef::Subset(tgq_core::Subset::nodes("all", ["b".to_string(), "c".to_string()]));
    let series = |graph: GraphRef| GraphSeries {
        attr: "w".into(),
        graph,
        interval: iv(0, 3),
        aggregate: SeriesAggregate::Mean,
    };
    let ext = c.external(&series(GraphRef::Element(node("b"))), "ext", 0).unwrap();
    assert!(ext.r > 0.9);
    let neg = c
        .homogeneous(&series(GraphRef::Element(node("b"))), &series(GraphRef::Element(node("c"))), 0)
        .unwrap();
    assert!(neg.r < -0.9);
    assert!(c.pooled("w", "w", &everything, iv(0, 3), 0).unwrap().r > 0.999);

    let flat = graph(&[
        r#"{"type":"node","id":"a","start":0,"end":3}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":0,"value":1}"#,
        r#"{"type":"series","name":"k","t":0,"value":2}"#,
        r#"{"type":"series","name":"k","t":1,"value":2}"#,
        r#"{"type":"series","name":"k","t":2,"value":2}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":1,"value":2}"#,
        r#"{"type":"attr","elem":"node:a","name":"w","t":2,"value":3}"#,
    ]);
    let ef = engine(&flat);
    let err = ef.correlator().external(&series(GraphRef::Element(node("a"))), "k", 0).unwrap_err();
    assert_eq!(err.code(), "VARIANCE_ZERO");
    let err = ef.correlator().external(&series(GraphRef::Element(node("a"))), "nope", 0).unwrap_err();
    assert_eq!(err.code(), "UNKNOWN_SERIES");
}
