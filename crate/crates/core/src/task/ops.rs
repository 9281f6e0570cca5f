//! The task operations exposed by the engine.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    Behavior, BehaviorScope, Characteristic, Engine, GraphFamily, GraphKind, Resolved,
    SearchSpace, Side,
};
use crate::correlation::Correlator;
use crate::error::{Error, Result};
use crate::graph::{ElementRef, ValueSource};
use crate::pattern::{Pattern, PatternSpec, Similarity};
use crate::predicate::Predicate;
use crate::reference::{Binding, GraphRef, TimeRef};
use crate::relation::{
    evaluate, AllenRelation, Operand, PatternOp, PointRelation, RelationContext, RelationFamily,
    RelationOutcome, RelationSpec, SetOp, StructuralOp, ValueOp,
};
use crate::time::TimeInterval;
use crate::value::AttributeValue;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LookupResult {
    pub time: usize,
    pub element: ElementRef,
    pub attr: String,
    pub value: AttributeValue,
    pub source: ValueSource,
}

/// Elements an inverse lookup scans: one fixed element or an element family.
#[derive(Clone, Debug, PartialEq)]
pub enum ElementSelection {
    One(ElementRef),
    Family(GraphFamily),
}

/// Times an inverse lookup scans: one point or every point of a range
/// (the whole domain when `None`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeSelection {
    Point(usize),
    Within(Option<TimeInterval>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LookupHit {
    pub time: usize,
    pub element: ElementRef,
    pub values: BTreeMap<String, AttributeValue>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternMatch {
    pub binding: Binding,
    pub pattern: Pattern,
    pub similarity: Similarity,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompareOperand {
    Scope(BehaviorScope),
    Value(AttributeValue),
    Pattern(PatternSpec),
}

/// How the two compared references relate in graph and time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareVariant {
    /// Same reference, or a literal.
    Static,
    /// Same graph reference at different times.
    Evolutionary,
    /// Different graph references at the same time.
    ContextualSameTime,
    /// Different graph references at different times.
    ContextualDifferentTime,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub left: Option<Resolved>,
    pub right: Option<Resolved>,
    pub variant: CompareVariant,
    /// `<`, `=` or `>` between two values.
    pub order: Option<ValueOp>,
    pub similarity: Option<Similarity>,
    pub pattern_relation: Option<PatternOp>,
    pub relation: Option<(RelationSpec, RelationOutcome)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelationRequest {
    /// Report every applicable relation of these families (all when empty).
    Families(Vec<RelationFamily>),
    /// Keep pairs for which this relation holds.
    Relation(RelationSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportedRelation {
    pub relation: RelationSpec,
    pub outcome: RelationOutcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    pub left: Resolved,
    pub right: Resolved,
    pub relations: Vec<ReportedRelation>,
}

/// An additional relation both sides of a relation-seeking task must satisfy.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxRelation {
    pub relation: RelationSpec,
    pub negated: bool,
    /// Time point for structural relations.
    pub at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeekHit {
    pub left: Resolved,
    pub right: Resolved,
    pub outcome: RelationOutcome,
    pub aux: Vec<RelationOutcome>,
}

fn shared_point(a: &Binding, b: &Binding) -> Option<usize> {
    match (a.time, b.time) {
        (TimeRef::Point(x), TimeRef::Point(y)) if x == y => Some(x),
        _ => None,
    }
}

impl Engine<'_> {
    pub fn correlator(&self) -> Correlator<'_> {
        Correlator {
            graph: self.graph,
            threshold: self.config.correlation_threshold,
        }
    }

    /// The value of an attribute for one element at one time point.
    pub fn direct_lookup(&self, t: usize, elem: &ElementRef, attr: &str) -> Result<LookupResult> {
        let v = self.graph.eval(t, elem, attr)?;
        Ok(LookupResult {
            time: t,
            element: elem.clone(),
            attr: attr.to_string(),
            value: v.value,
            source: v.source,
        })
    }

    /// Every `(time, element)` at which the predicate is definitely true,
    /// ordered by time then element.
    pub fn inverse_lookup(
        &self,
        predicate: &Predicate,
        elements: &ElementSelection,
        times: &TimeSelection,
    ) -> Result<Vec<LookupHit>> {
        let g = self.graph;
        predicate.check(g)?;
        let span = match *times {
            TimeSelection::Point(t) => {
                if t >= g.domain().len() {
                    return Err(Error::UnknownTime(t.to_string()));
                }
                TimeInterval::point(t)
            }
            TimeSelection::Within(Some(iv)) => {
                if iv.end >= g.domain().len() {
                    return Err(Error::UnknownTime(iv.end.to_string()));
                }
                iv
            }
            TimeSelection::Within(None) => match g.domain().full_interval() {
                Some(iv) => iv,
                None => return Ok(Vec::new()),
            },
        };
        let candidates: Vec<ElementRef> = match elements {
            ElementSelection::One(e) => {
                g.check_element(e)?;
                vec![e.clone()]
            }
            ElementSelection::Family(f) => {
                let side = Side {
                    scope: BehaviorScope::new(Behavior::Reference, None, None, Some(TimeRef::Interval(span))),
                    space: SearchSpace {
                        graph: Some(f.clone()),
                        time: None,
                    },
                    constraint: None,
                };
                if f.kind() != GraphKind::Element {
                    return Err(Error::InvalidScope("inverse lookup ranges over elements".to_string()));
                }
                self.graph_candidates(&side, &TimeRef::Interval(span))?
                    .into_iter()
                    .filter_map(|r| match r {
                        GraphRef::Element(e) => Some(e),
                        _ => None,
                    })
                    .collect()
            }
        };
        let attrs = predicate.attributes();
        let mut hits = Vec::new();
        for t in span.iter() {
            for e in &candidates {
                if !g.exists(e, t)? || predicate.eval(g, t, e)? != Some(true) {
                    continue;
                }
                let mut values = BTreeMap::new();
                for a in &attrs {
                    if let Ok(v) = g.eval(t, e, a) {
                        values.insert(a.clone(), v.value);
                    }
                }
                hits.push(LookupHit {
                    time: t,
                    element: e.clone(),
                    values,
                });
            }
        }
        hits.sort_by(|a, b| (a.time, &a.element).cmp(&(b.time, &b.element)));
        Ok(hits)
    }

    /// The characteristic of a fully specified scope.
    pub fn characterize(&self, scope: &BehaviorScope) -> Result<Resolved> {
        if !scope.is_fixed() {
            return Err(Error::InvalidScope(
                "characterisation needs a fixed graph and time reference".to_string(),
            ));
        }
        let mut resolved = self.resolve(&Side::fixed(scope.clone()))?;
        Ok(resolved.remove(0))
    }

    /// Bindings of `scope` whose pattern matches `spec` with a score at or
    /// above the similarity threshold, best first then in canonical order.
    pub fn pattern_search(&self, spec: &PatternSpec, scope: &BehaviorScope, space: &SearchSpace) -> Result<Vec<PatternMatch>> {
        let kind = scope.behavior.pattern_kind().ok_or_else(|| {
            Error::KindMismatch(format!("{:?} does not produce patterns", scope.behavior))
        })?;
        if !spec.accepts_kind(kind) {
            return Err(Error::KindMismatch(format!("a {kind} search needs a {kind} pattern")));
        }
        let side = Side {
            scope: scope.clone(),
            space: space.clone(),
            constraint: None,
        };
        let bindings = self.bindings(&side)?;
        let free = side.is_free();
        let mut out = Vec::new();
        for binding in bindings {
            let pattern = match self.characteristic(scope.behavior, scope.attr.as_deref(), &binding) {
                Ok(Characteristic::Pattern(p)) => p,
                Ok(_) => unreachable!("pattern behaviours yield patterns"),
                Err(e) if free && e.is_undefined() => continue,
                Err(e) => return Err(e),
            };
            let similarity = spec.score(&pattern, &self.config.patterns)?;
            if similarity.score >= self.config.patterns.similarity_threshold {
                out.push(PatternMatch {
                    binding,
                    pattern,
                    similarity,
                });
            }
        }
        out.sort_by(|a, b| {
            b.similarity
                .score
                .total_cmp(&a.similarity.score)
                .then_with(|| a.binding.cmp(&b.binding))
        });
        Ok(out)
    }

    fn resolve_fixed(&self, scope: &BehaviorScope) -> Result<Resolved> {
        if scope.behavior == Behavior::Reference {
            return Err(Error::InvalidScope("a bare reference has nothing to compare".to_string()));
        }
        self.characterize(scope)
    }

    fn pattern_verdict(&self, sim: &Similarity) -> PatternOp {
        if sim.opposite {
            PatternOp::Opposite
        } else if sim.score >= self.config.patterns.similarity_threshold {
            PatternOp::Same
        } else {
            PatternOp::Different
        }
    }

    /// Compares two fully specified characteristics, or one against a literal.
    pub fn direct_compare(
        &self,
        lhs: &CompareOperand,
        rhs: &CompareOperand,
        relation: Option<&RelationSpec>,
    ) -> Result<CompareReport> {
        let resolve = |op: &CompareOperand, side: &str| -> Result<Option<Resolved>> {
            match op {
                CompareOperand::Scope(s) => self.resolve_fixed(s).map(Some).map_err(|e| e.on_side(side)),
                _ => Ok(None),
            }
        };
        let left = resolve(lhs, "left")?;
        let right = resolve(rhs, "right")?;
        let variant = match (&left, &right) {
            (Some(l), Some(r)) => {
                let same_g = l.binding.graph == r.binding.graph;
                let same_t = l.binding.time == r.binding.time;
                match (same_g, same_t) {
                    (true, true) => CompareVariant::Static,
                    (true, false) => CompareVariant::Evolutionary,
                    (false, true) => CompareVariant::ContextualSameTime,
                    (false, false) => CompareVariant::ContextualDifferentTime,
                }
            }
            (None, None) => {
                return Err(Error::InvalidScope("at least one side must reference the data".to_string()))
            }
            _ => CompareVariant::Static,
        };

        enum Item<'a> {
            Value(&'a AttributeValue),
            Pattern(&'a Pattern),
            Spec(&'a PatternSpec),
        }
        fn item<'a>(op: &'a CompareOperand, res: &'a Option<Resolved>) -> Result<Item<'a>> {
            match (op, res) {
                (_, Some(r)) => match &r.characteristic {
                    Characteristic::Value(v) => Ok(Item::Value(&v.value)),
                    Characteristic::Pattern(p) => Ok(Item::Pattern(p)),
                    Characteristic::Reference => Err(Error::InvalidScope("nothing to compare".to_string())),
                },
                (CompareOperand::Value(v), None) => Ok(Item::Value(v)),
                (CompareOperand::Pattern(p), None) => Ok(Item::Spec(p)),
                (CompareOperand::Scope(_), None) => unreachable!(),
            }
        }
        let li = item(lhs, &left)?;
        let ri = item(rhs, &right)?;

        let mut report = CompareReport {
            left: left.clone(),
            right: right.clone(),
            variant,
            order: None,
            similarity: None,
            pattern_relation: None,
            relation: None,
        };
        let cfg = &self.config.patterns;
        match (&li, &ri) {
            (Item::Value(a), Item::Value(b)) => {
                let ord = a.compare(b).ok_or_else(|| {
                    Error::TypeError(format!("cannot compare {} value {a} with {} value {b}", a.kind(), b.kind()))
                })?;
                report.order = Some(match ord {
                    std::cmp::Ordering::Less => ValueOp::Lt,
                    std::cmp::Ordering::Equal => ValueOp::Eq,
                    std::cmp::Ordering::Greater => ValueOp::Gt,
                });
            }
            (Item::Pattern(a), Item::Pattern(b)) => {
                report.similarity = Some(crate::pattern::similarity(a, b, cfg)?);
            }
            (Item::Pattern(p), Item::Spec(s)) | (Item::Spec(s), Item::Pattern(p)) => {
                report.similarity = Some(s.score(p, cfg)?);
            }
            _ => {
                return Err(Error::KindMismatch(
                    "compared sides must both be values or both be patterns".to_string(),
                ))
            }
        }
        if let Some(sim) = &report.similarity {
            report.pattern_relation = Some(self.pattern_verdict(sim));
        }

        if let Some(rel) = relation {
            let outcome = match (rel, &li, &ri) {
                (RelationSpec::Pattern(op), _, _) if report.similarity.is_some() => {
                    let sim = report.similarity.expect("checked");
                    if let (Item::Pattern(a), Item::Pattern(b)) = (&li, &ri) {
                        self.evaluate_relation(rel, Operand::Pattern(a), Operand::Pattern(b), None)?
                    } else {
                        RelationOutcome {
                            holds: match op {
                                PatternOp::Same => sim.score >= cfg.similarity_threshold,
                                PatternOp::Different => sim.score < cfg.similarity_threshold,
                                PatternOp::Opposite => sim.opposite,
                            },
                            witness: crate::relation::Witness::Similarity {
                                score: sim.score,
                                opposite: sim.opposite,
                                threshold: cfg.similarity_threshold,
                            },
                        }
                    }
                }
                (RelationSpec::Value(_), Item::Value(a), Item::Value(b)) => {
                    self.evaluate_relation(rel, Operand::Value(a), Operand::Value(b), None)?
                }
                (_, _, _) => match (&left, &right) {
                    (Some(l), Some(r)) => self.relation_on_pair(rel, l, r, None)?,
                    _ => {
                        return Err(Error::FamilyMismatch(format!(
                            "{} relations need references on both sides",
                            rel.family().name()
                        )))
                    }
                },
            };
            report.relation = Some((*rel, outcome));
        }
        Ok(report)
    }

    fn evaluate_relation(&self, rel: &RelationSpec, a: Operand<'_>, b: Operand<'_>, time: Option<usize>) -> Result<RelationOutcome> {
        evaluate(
            rel,
            a,
            b,
            &RelationContext {
                graph: self.graph,
                patterns: &self.config.patterns,
                time,
            },
        )
    }

    /// Evaluates a relation between two resolved bindings, choosing the
    /// operands by relation family.
    pub fn relation_on_pair(&self, rel: &RelationSpec, l: &Resolved, r: &Resolved, at: Option<usize>) -> Result<RelationOutcome> {
        fn characteristic<'a>(c: &'a Characteristic, rel: &RelationSpec) -> Result<Operand<'a>> {
            match c {
                Characteristic::Value(v) => Ok(Operand::Value(&v.value)),
                Characteristic::Pattern(p) => Ok(Operand::Pattern(p)),
                Characteristic::Reference => Err(Error::FamilyMismatch(format!(
                    "{} relation needs characterised sides",
                    rel.family().name()
                ))),
            }
        }
        match rel.family() {
            RelationFamily::Value | RelationFamily::Pattern => self.evaluate_relation(
                rel,
                characteristic(&l.characteristic, rel)?,
                characteristic(&r.characteristic, rel)?,
                None,
            ),
            RelationFamily::TemporalPoint | RelationFamily::TemporalInterval => self.evaluate_relation(
                rel,
                Operand::Time(l.binding.time),
                Operand::Time(r.binding.time),
                None,
            ),
            RelationFamily::Set => {
                self.evaluate_relation(rel, Operand::Graph(&l.binding.graph), Operand::Graph(&r.binding.graph), None)
            }
            RelationFamily::Structural => {
                let t = at.or_else(|| shared_point(&l.binding, &r.binding));
                self.evaluate_relation(rel, Operand::Graph(&l.binding.graph), Operand::Graph(&r.binding.graph), t)
            }
        }
    }

    /// Every applicable relation of the requested families between two bindings.
    fn describe_pair(&self, l: &Resolved, r: &Resolved, families: &[RelationFamily]) -> Result<Vec<ReportedRelation>> {
        let wants = |f: RelationFamily| families.is_empty() || families.contains(&f);
        let mut out = Vec::new();
        let mut push = |relation: RelationSpec, outcome: Result<RelationOutcome>| -> Result<()> {
            match outcome {
                Ok(outcome) => {
                    out.push(ReportedRelation { relation, outcome });
                    Ok(())
                }
                Err(e) if e.is_undefined() => Ok(()),
                Err(e) => Err(e),
            }
        };
        if wants(RelationFamily::Value) {
            if let (Characteristic::Value(a), Characteristic::Value(b)) = (&l.characteristic, &r.characteristic) {
                if let Some(ord) = a.value.compare(&b.value) {
                    let op = match ord {
                        std::cmp::Ordering::Less => ValueOp::Lt,
                        std::cmp::Ordering::Equal => ValueOp::Eq,
                        std::cmp::Ordering::Greater => ValueOp::Gt,
                    };
                    let rel = RelationSpec::Value(op);
                    push(rel, self.relation_on_pair(&rel, l, r, None))?;
                }
            }
        }
        if wants(RelationFamily::Pattern) {
            if let (Characteristic::Pattern(a), Characteristic::Pattern(b)) = (&l.characteristic, &r.characteristic) {
                let sim = crate::pattern::similarity(a, b, &self.config.patterns)?;
                let rel = RelationSpec::Pattern(self.pattern_verdict(&sim));
                push(rel, self.relation_on_pair(&rel, l, r, None))?;
            }
        }
        let points = match (l.binding.time, r.binding.time) {
            (TimeRef::Point(a), TimeRef::Point(b)) => Some((a, b)),
            _ => None,
        };
        let explicit_interval = families.contains(&RelationFamily::TemporalInterval);
        match points {
            Some((a, b)) if wants(RelationFamily::TemporalPoint) && !explicit_interval => {
                let rel = RelationSpec::TemporalPoint(PointRelation::between(a, b));
                push(rel, self.relation_on_pair(&rel, l, r, None))?;
            }
            _ if wants(RelationFamily::TemporalInterval) && (points.is_none() || explicit_interval) => {
                let rel = RelationSpec::TemporalInterval(AllenRelation::between(
                    l.binding.time.as_interval(),
                    r.binding.time.as_interval(),
                ));
                push(rel, self.relation_on_pair(&rel, l, r, None))?;
            }
            _ => {}
        }
        let not_pair = |g: &GraphRef| !matches!(g, GraphRef::Pair(..));
        let graphs_ok = not_pair(&l.binding.graph) && not_pair(&r.binding.graph);
        if wants(RelationFamily::Set) && graphs_ok {
            let a = l.binding.graph.members(self.graph)?;
            let b = r.binding.graph.members(self.graph)?;
            let rel = RelationSpec::Set(SetOp::most_specific(&a, &b));
            push(rel, self.relation_on_pair(&rel, l, r, None))?;
        }
        if wants(RelationFamily::Structural) && graphs_ok {
            if let Some(t) = shared_point(&l.binding, &r.binding) {
                let grouped = |g: &GraphRef| {
                    matches!(g, GraphRef::Subset(_) | GraphRef::Element(ElementRef::Object(_)))
                };
                let mut ops = vec![StructuralOp::Adjacent, StructuralOp::Connected];
                if grouped(&l.binding.graph) && grouped(&r.binding.graph) {
                    ops.push(StructuralOp::ConfigurationEqual);
                }
                for op in ops {
                    let rel = RelationSpec::Structural(op);
                    push(rel, self.relation_on_pair(&rel, l, r, Some(t)))?;
                }
            }
        }
        Ok(out)
    }

    /// Resolves both sides and reports how their bindings relate. By
    /// default only the first qualifying pair (canonical order) is reported.
    pub fn inverse_compare(&self, lhs: &Side, rhs: &Side, request: &RelationRequest, all_pairs: bool) -> Result<Vec<PairReport>> {
        let left = self.resolve(lhs).map_err(|e| e.on_side("left"))?;
        if left.is_empty() {
            return Err(Error::UnresolvedSide { side: "left".into() });
        }
        let right = self.resolve(rhs).map_err(|e| e.on_side("right"))?;
        if right.is_empty() {
            return Err(Error::UnresolvedSide { side: "right".into() });
        }
        let mut out = Vec::new();
        for l in &left {
            for r in &right {
                if l.binding == r.binding {
                    continue;
                }
                let relations = match request {
                    RelationRequest::Relation(rel) => match self.relation_on_pair(rel, l, r, None) {
                        Ok(o) if o.holds => vec![ReportedRelation {
                            relation: *rel,
                            outcome: o,
                        }],
                        Ok(_) => continue,
                        Err(e) if e.is_undefined() => continue,
                        Err(e) => return Err(e),
                    },
                    RelationRequest::Families(f) => self.describe_pair(l, r, f)?,
                };
                out.push(PairReport {
                    left: l.clone(),
                    right: r.clone(),
                    relations,
                });
                if !all_pairs {
                    return Ok(out);
                }
            }
        }
        Ok(out)
    }

    fn needs_time_context(&self, rel: &RelationSpec, at: Option<usize>, lhs: &Side, rhs: &Side) -> Result<()> {
        if rel.family() == RelationFamily::Structural && at.is_none() && !(lhs.has_point_times() && rhs.has_point_times()) {
            return Err(Error::MissingTimeContext(rel.tag().to_string()));
        }
        Ok(())
    }

    /// All binding pairs whose characteristics (or references) satisfy
    /// `relation` and every auxiliary relation, ordered by
    /// `(t1, t2, g1, g2)`. A pair never relates a binding to itself, and
    /// symmetric queries over identical sides report each pair once.
    pub fn relation_seek(&self, relation: &RelationSpec, lhs: &Side, rhs: &Side, aux: &[AuxRelation]) -> Result<Vec<SeekHit>> {
        self.needs_time_context(relation, None, lhs, rhs)?;
        for a in aux {
            self.needs_time_context(&a.relation, a.at, lhs, rhs)?;
        }
        let left = self.resolve(lhs).map_err(|e| e.on_side("left"))?;
        let right = self.resolve(rhs).map_err(|e| e.on_side("right"))?;
        let symmetric = lhs == rhs && relation.is_symmetric() && aux.iter().all(|a| a.relation.is_symmetric());
        let structural_ok = |rel: &RelationSpec, at: Option<usize>, l: &Resolved, r: &Resolved| {
            rel.family() != RelationFamily::Structural || at.is_some() || shared_point(&l.binding, &r.binding).is_some()
        };
        let mut hits = Vec::new();
        for l in &left {
            for r in &right {
                if l.binding == r.binding || (symmetric && l.binding > r.binding) {
                    continue;
                }
                if !structural_ok(relation, None, l, r) {
                    continue;
                }
                let outcome = match self.relation_on_pair(relation, l, r, None) {
                    Ok(o) if o.holds => o,
                    Ok(_) => continue,
                    Err(e) if e.is_undefined() => continue,
                    Err(e) => return Err(e),
                };
                let mut aux_outcomes = Vec::with_capacity(aux.len());
                let mut ok = true;
                for a in aux {
                    if !structural_ok(&a.relation, a.at, l, r) {
                        ok = false;
                        break;
                    }
                    match self.relation_on_pair(&a.relation, l, r, a.at) {
                        Ok(o) if o.holds != a.negated => aux_outcomes.push(o),
                        Ok(_) => {
                            ok = false;
                            break;
                        }
                        Err(e) if e.is_undefined() => {
                            ok = false;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
                if ok {
                    hits.push(SeekHit {
                        left: l.clone(),
                        right: r.clone(),
                        outcome,
                        aux: aux_outcomes,
                    });
                }
            }
        }
        hits.sort_by(|a, b| {
            (a.left.binding.time, a.right.binding.time, &a.left.binding.graph, &a.right.binding.graph).cmp(&(
                b.left.binding.time,
                b.right.binding.time,
                &b.left.binding.graph,
                &b.right.binding.graph,
            ))
        });
        Ok(hits)
    }
}
