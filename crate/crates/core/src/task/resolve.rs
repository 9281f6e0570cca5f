//! Enumeration of candidate bindings and their characteristics.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{
    AspectAxis, Behavior, Characteristic, Constraint, Engine, GraphFamily, GraphKind, GraphTarget,
    Resolved, Side, SubsetRef, TimeFamily, TimeKind,
};
use crate::correlation::element_series;
use crate::error::{Error, Result};
use crate::graph::{ElementRef, MemberKind, Subset, TemporalGraph};
use crate::pattern::{
    classify_trend, describe_distribution, AspectualPattern, Pattern, StructuralPattern, TrendClass,
};
use crate::reference::{Binding, GraphRef, TimeRef};
use crate::structural::{configuration, configuration_trend, pairs_aggregate, presence};
use crate::time::TimeInterval;

fn overlaps(existence: &[TimeInterval], span: &TimeInterval) -> bool {
    existence.iter().any(|iv| iv.start <= span.end && span.start <= iv.end)
}

/// Adjacency of the union of all snapshots in `span`: alive nodes and
/// undirected neighbour sets by node index.
fn union_graph(graph: &TemporalGraph, span: &TimeInterval) -> (Vec<usize>, BTreeMap<usize, BTreeSet<usize>>) {
    let nodes: Vec<usize> = (0..graph.nodes().len())
        .filter(|&i| overlaps(&graph.nodes()[i].existence, span))
        .collect();
    let mut adjacency: BTreeMap<usize, BTreeSet<usize>> = nodes.iter().map(|&n| (n, BTreeSet::new())).collect();
    for e in graph.edges() {
        if overlaps(&e.existence, span) {
            let (a, b) = e.endpoints();
            adjacency.entry(a).or_default().insert(b);
            adjacency.entry(b).or_default().insert(a);
        }
    }
    (nodes, adjacency)
}

fn hop_ball(adjacency: &BTreeMap<usize, BTreeSet<usize>>, center: usize, k: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([center]);
    let mut queue = VecDeque::from([(center, 0)]);
    while let Some((u, d)) = queue.pop_front() {
        if d == k {
            continue;
        }
        for &v in adjacency.get(&u).into_iter().flatten() {
            if seen.insert(v) {
                queue.push_back((v, d + 1));
            }
        }
    }
    seen
}

fn node_subset(graph: &TemporalGraph, name: String, nodes: impl IntoIterator<Item = usize>) -> Subset {
    Subset {
        name,
        kind: MemberKind::Nodes,
        members: nodes.into_iter().map(|i| graph.nodes()[i].id.clone()).collect(),
    }
}

impl Engine<'_> {
    pub fn bind_target(&self, target: &GraphTarget) -> Result<GraphRef> {
        match target {
            GraphTarget::Element(e) => {
                self.graph.check_element(e)?;
                Ok(GraphRef::Element(e.clone()))
            }
            GraphTarget::Subset(s) => Ok(GraphRef::Subset(s.resolve(self.graph)?)),
            GraphTarget::Pair(a, b) => {
                self.graph.require_node(a)?;
                self.graph.require_node(b)?;
                if a == b {
                    return Err(Error::InvalidScope("a node pair needs two distinct nodes".to_string()));
                }
                Ok(GraphRef::Pair(a.clone(), b.clone()))
            }
        }
    }

    fn time_family(&self, side: &Side) -> Result<TimeFamily> {
        let kind = side.scope.behavior.time_kind();
        let family = side.space.time.unwrap_or(match kind {
            TimeKind::Interval => TimeFamily::Windows {
                min_len: self.config.min_window,
                within: None,
            },
            _ => TimeFamily::Points { within: None },
        });
        match (kind, &family) {
            (TimeKind::Point, TimeFamily::Windows { .. }) => Err(Error::InvalidScope(
                "a point behaviour cannot range over windows".to_string(),
            )),
            (TimeKind::Interval, TimeFamily::Points { .. }) => Err(Error::InvalidScope(
                "an interval behaviour cannot range over time points".to_string(),
            )),
            _ => Ok(family),
        }
    }

    /// Time references a side ranges over.
    pub fn time_candidates(&self, side: &Side) -> Result<Vec<TimeRef>> {
        if let Some(t) = side.scope.time {
            return Ok(vec![t]);
        }
        let Some(full) = self.graph.domain().full_interval() else {
            return Ok(Vec::new());
        };
        let clip = |within: Option<TimeInterval>| -> Result<TimeInterval> {
            match within {
                Some(w) if w.end >= self.graph.domain().len() => Err(Error::UnknownTime(w.end.to_string())),
                Some(w) => Ok(w),
                None => Ok(full),
            }
        };
        Ok(match self.time_family(side)? {
            TimeFamily::Points { within } => clip(within)?.iter().map(TimeRef::Point).collect(),
            TimeFamily::Windows { min_len, within } => {
                let range = clip(within)?;
                let min_len = min_len.max(1);
                let mut out = Vec::new();
                for s in range.iter() {
                    for e in s..=range.end {
                        if e - s + 1 >= min_len {
                            out.push(TimeRef::Interval(TimeInterval { start: s, end: e }));
                        }
                    }
                }
                out
            }
        })
    }

    /// Graph references a side ranges over at one time reference.
    pub fn graph_candidates(&self, side: &Side, time: &TimeRef) -> Result<Vec<GraphRef>> {
        if let Some(g) = &side.scope.graph {
            return Ok(vec![self.bind_target(g)?]);
        }
        let family = side.space.graph.as_ref().ok_or_else(|| {
            Error::InvalidScope("a free graph reference needs a family to range over".to_string())
        })?;
        let want = side.scope.behavior.graph_kind();
        if want != GraphKind::Any && family.kind() != want {
            return Err(Error::InvalidScope(format!(
                "{:?} cannot range over {:?}",
                side.scope.behavior, family
            )));
        }
        let g = self.graph;
        let span = time.as_interval();
        let nodes = || {
            g.nodes()
                .iter()
                .filter(|n| overlaps(&n.existence, &span))
                .map(|n| GraphRef::Element(ElementRef::Node(n.id.clone())))
        };
        let edges = || {
            g.edges()
                .iter()
                .filter(|e| overlaps(&e.existence, &span))
                .map(|e| GraphRef::Element(ElementRef::Edge(e.id.clone())))
        };
        Ok(match family {
            GraphFamily::Nodes => nodes().collect(),
            GraphFamily::Edges => edges().collect(),
            GraphFamily::Elements => nodes().chain(edges()).collect(),
            GraphFamily::MembersOf(s) => {
                let subset = s.resolve(g)?;
                subset
                    .member_refs()
                    .into_iter()
                    .filter(|m| span.iter().any(|t| g.exists(m, t).unwrap_or(false)))
                    .map(GraphRef::Element)
                    .collect()
            }
            GraphFamily::NamedSubsets => g
                .subsets()
                .filter(|s| span.iter().any(|t| g.subset_exists(s, t)))
                .map(|s| GraphRef::Subset(s.clone()))
                .collect(),
            GraphFamily::Components => {
                let (alive, adjacency) = union_graph(g, &span);
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                for &n in &alive {
                    if seen.contains(&n) {
                        continue;
                    }
                    let comp = hop_ball(&adjacency, n, usize::MAX);
                    seen.extend(comp.iter().copied());
                    let name = format!("component:{}", g.nodes()[n].id);
                    out.push(GraphRef::Subset(node_subset(g, name, comp)));
                }
                out.sort();
                out
            }
            GraphFamily::KHop { k, center } => {
                let (alive, adjacency) = union_graph(g, &span);
                let centers: Vec<usize> = match center {
                    Some(c) => {
                        let i = g.require_node(c)?;
                        if alive.contains(&i) {
                            vec![i]
                        } else {
                            vec![]
                        }
                    }
                    None => alive,
                };
                let mut out: Vec<GraphRef> = centers
                    .into_iter()
                    .map(|c| {
                        let name = format!("khop:{}:{k}", g.nodes()[c].id);
                        GraphRef::Subset(node_subset(g, name, hop_ball(&adjacency, c, *k)))
                    })
                    .collect();
                out.sort();
                out
            }
            GraphFamily::NodePairs(scope) => {
                let ids: Vec<String> = match scope {
                    None => g.nodes().iter().map(|n| n.id.clone()).collect(),
                    Some(s) => {
                        let subset = s.resolve(g)?;
                        let (nodes, _) = g.subset_parts(&subset);
                        nodes.into_iter().map(|i| g.nodes()[i].id.clone()).collect()
                    }
                };
                let mut out = Vec::new();
                for (i, a) in ids.iter().enumerate() {
                    for b in &ids[i + 1..] {
                        out.push(GraphRef::Pair(a.clone(), b.clone()));
                    }
                }
                out
            }
        })
    }

    /// All bindings of a side in canonical order. Sides with free
    /// references fail once they exceed the candidate cap.
    pub fn bindings(&self, side: &Side) -> Result<Vec<Binding>> {
        side.scope.validate(self.graph)?;
        let free = side.is_free();
        let mut out = Vec::new();
        for t in self.time_candidates(side)? {
            for g in self.graph_candidates(side, &t)? {
                out.push(Binding::new(t, g));
                if free && out.len() > self.config.max_candidates {
                    return Err(Error::SearchSpaceExceeded {
                        limit: self.config.max_candidates,
                    });
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn check_constraint(&self, side: &Side) -> Result<()> {
        match (&side.constraint, side.scope.behavior) {
            (None, _) => Ok(()),
            (Some(Constraint::Value(c)), Behavior::Value) => {
                let attr = side.scope.attr.as_deref().expect("validated");
                c.check_kind(attr, self.graph.attribute_kind(attr)?)
            }
            (Some(Constraint::Value(_)), b) => Err(Error::KindMismatch(format!(
                "a value constraint cannot filter {b:?}"
            ))),
            (Some(Constraint::Pattern(spec)), b) => match b.pattern_kind() {
                Some(kind) if spec.accepts_kind(kind) => Ok(()),
                _ => Err(Error::KindMismatch(format!(
                    "pattern constraint does not apply to {b:?}"
                ))),
            },
        }
    }

    /// Binds every candidate of a side, characterises it and keeps those
    /// passing the side's constraint. Candidates without a defined
    /// characteristic are skipped on free sides and reported on fixed ones.
    pub fn resolve(&self, side: &Side) -> Result<Vec<Resolved>> {
        self.check_constraint(side)?;
        let bindings = self.bindings(side)?;
        let free = side.is_free();
        let mut out = Vec::new();
        for binding in bindings {
            let characteristic = match self.characteristic(side.scope.behavior, side.scope.attr.as_deref(), &binding) {
                Ok(c) => c,
                Err(e) if free && e.is_undefined() => continue,
                Err(e) => return Err(e),
            };
            let mut score = None;
            match (&side.constraint, &characteristic) {
                (Some(Constraint::Value(c)), Characteristic::Value(v)) => {
                    if !c.satisfied_by(&v.value) {
                        continue;
                    }
                }
                (Some(Constraint::Pattern(spec)), Characteristic::Pattern(p)) => {
                    let s = spec.score(p, &self.config.patterns)?.score;
                    if s < self.config.patterns.similarity_threshold {
                        continue;
                    }
                    score = Some(s);
                }
                _ => {}
            }
            out.push(Resolved {
                binding,
                characteristic,
                score,
            });
        }
        Ok(out)
    }

    fn numeric_values_at(&self, members: &[ElementRef], attr: &str, t: usize) -> Result<Vec<f64>> {
        let mut values = Vec::new();
        for m in members {
            match self.graph.eval(t, m, attr) {
                Ok(v) => values.extend(v.value.as_f64()),
                Err(e) if e.is_undefined() => {}
                Err(e) => return Err(e),
            }
        }
        Ok(values)
    }

    fn absent(&self, g: &GraphRef, time: &TimeRef) -> Error {
        let label = match *time {
            TimeRef::Point(t) => self.graph.domain().label(t).to_string(),
            TimeRef::Interval(iv) => format!(
                "[{}, {}]",
                self.graph.domain().label(iv.start),
                self.graph.domain().label(iv.end)
            ),
        };
        Error::AbsentElement {
            element: g.label(),
            time: label,
        }
    }

    /// The characteristic of `behavior` for one binding.
    pub fn characteristic(&self, behavior: Behavior, attr: Option<&str>, binding: &Binding) -> Result<Characteristic> {
        let g = self.graph;
        let cfg = &self.config.patterns;
        let attr_name = || attr.ok_or_else(|| Error::InvalidScope(format!("{behavior:?} needs an attribute")));
        let wrong_shape = || Error::InvalidScope(format!("{behavior:?} does not apply to {}", binding.graph.label()));
        let span = binding.time.as_interval();
        if behavior == Behavior::Reference {
            return if span.iter().any(|t| binding.graph.exists_at(g, t).unwrap_or(false)) {
                Ok(Characteristic::Reference)
            } else {
                Err(self.absent(&binding.graph, &binding.time))
            };
        }
        let subset = || match &binding.graph {
            GraphRef::Subset(s) => Ok(s),
            _ => Err(wrong_shape()),
        };
        let pattern = match behavior {
            Behavior::Value => {
                let (TimeRef::Point(t), GraphRef::Element(e)) = (&binding.time, &binding.graph) else {
                    return Err(wrong_shape());
                };
                return Ok(Characteristic::Value(g.eval(*t, e, attr_name()?)?));
            }
            Behavior::Distribution => {
                let TimeRef::Point(t) = binding.time else {
                    return Err(wrong_shape());
                };
                let s = subset()?;
                let members = g.subset_alive_members(s, t);
                if members.is_empty() {
                    return Err(self.absent(&binding.graph, &binding.time));
                }
                let values = self.numeric_values_at(&members, attr_name()?, t)?;
                Pattern::Distribution(describe_distribution(&values, cfg.histogram_bins).ok_or_else(|| {
                    Error::EmptyScope(format!("no values of '{}' in {} at this time", attr.unwrap_or(""), s.name))
                })?)
            }
            Behavior::Trend => {
                let GraphRef::Element(e) = &binding.graph else {
                    return Err(wrong_shape());
                };
                if !span.iter().any(|t| g.exists(e, t).unwrap_or(false)) {
                    g.check_element(e)?;
                    return Err(self.absent(&binding.graph, &binding.time));
                }
                let series = element_series(g, e, attr_name()?, span)?;
                let samples: Vec<(f64, f64)> = series.into_iter().map(|(t, v)| (t as f64, v)).collect();
                Pattern::Trend(classify_trend(&samples, cfg.slope_epsilon))
            }
            Behavior::Aspect(AspectAxis::TrendsOverGraph) => {
                let s = subset()?;
                let a = attr_name()?;
                let mut frequencies = BTreeMap::new();
                for m in s.member_refs() {
                    let series = element_series(g, &m, a, span)?;
                    let samples: Vec<(f64, f64)> = series.into_iter().map(|(t, v)| (t as f64, v)).collect();
                    let class = if samples.len() < 2 {
                        TrendClass::Degenerate
                    } else {
                        classify_trend(&samples, cfg.slope_epsilon).class
                    };
                    *frequencies.entry(class).or_insert(0) += 1;
                }
                Pattern::Aspectual(AspectualPattern::TrendsOverGraph {
                    total: s.members.len(),
                    frequencies,
                })
            }
            Behavior::Aspect(AspectAxis::DistributionOverTime) => {
                let s = subset()?;
                let a = attr_name()?;
                let mut means = Vec::new();
                let mut stddevs = Vec::new();
                for t in span.iter() {
                    let members = g.subset_alive_members(s, t);
                    let values = self.numeric_values_at(&members, a, t)?;
                    if let Some(d) = describe_distribution(&values, cfg.histogram_bins) {
                        means.push((t as f64, d.mean));
                        stddevs.push((t as f64, d.stddev));
                    }
                }
                if means.is_empty() {
                    return Err(Error::EmptyScope(format!(
                        "no values of '{a}' in {} during the interval",
                        s.name
                    )));
                }
                Pattern::Aspectual(AspectualPattern::DistributionOverTime {
                    points: means.len(),
                    mean_trend: classify_trend(&means, cfg.slope_epsilon),
                    stddev_trend: classify_trend(&stddevs, cfg.slope_epsilon),
                })
            }
            Behavior::Presence => {
                let GraphRef::Pair(a, b) = &binding.graph else {
                    return Err(wrong_shape());
                };
                Pattern::Structural(StructuralPattern::Presence(presence(g, a, b, span)?))
            }
            Behavior::Configuration => {
                let TimeRef::Point(t) = binding.time else {
                    return Err(wrong_shape());
                };
                let nodes = g.subset_alive_nodes(subset()?, t);
                if nodes.is_empty() {
                    return Err(self.absent(&binding.graph, &binding.time));
                }
                Pattern::Structural(StructuralPattern::Configuration(configuration(g, &nodes, t)))
            }
            Behavior::PairsAggregate => {
                let (nodes, _) = g.subset_parts(subset()?);
                Pattern::Structural(StructuralPattern::PairsAggregate(pairs_aggregate(g, &nodes, span)?))
            }
            Behavior::ConfigurationTrend => {
                let s = subset()?;
                let nodes_at = |t: usize| Ok(g.subset_alive_nodes(s, t));
                Pattern::Structural(StructuralPattern::ConfigurationTrend(configuration_trend(
                    g,
                    span,
                    cfg.slope_epsilon,
                    &nodes_at,
                )?))
            }
            Behavior::Reference => unreachable!(),
        };
        Ok(Characteristic::Pattern(pattern))
    }
}

/// Literal node subsets used by queries such as `{a, b, c}`.
pub fn literal_subset(ids: impl IntoIterator<Item = String>) -> SubsetRef {
    let members: BTreeSet<String> = ids.into_iter().collect();
    let name = format!("{{{}}}", members.iter().cloned().collect::<Vec<_>>().join(","));
    SubsetRef::Literal(Subset {
        name,
        kind: MemberKind::Nodes,
        members,
    })
}
