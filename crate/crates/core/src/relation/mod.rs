//! Relation families between values, patterns, time references and graph
//! references. Every evaluation returns a witness explaining the outcome.

mod allen;
pub mod iso;

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Direction, TemporalGraph};
use crate::pattern::{similarity, Pattern, PatternConfig};
use crate::reference::{GraphRef, TimeRef};
use crate::structural::{reach, SimpleGraph};
use crate::time::TimeInterval;
use crate::value::AttributeValue;

pub use allen::AllenRelation;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    /// `|a - b| <= tolerance`, numeric only.
    Within(f64),
}

impl ValueOp {
    /// Applies `a op b`; `None` when the kinds cannot be compared this way.
    pub fn apply(&self, a: &AttributeValue, b: &AttributeValue) -> Option<bool> {
        use std::cmp::Ordering::*;
        if let ValueOp::Within(tol) = self {
            return Some((a.as_f64()? - b.as_f64()?).abs() <= *tol);
        }
        let ord = a.compare(b)?;
        Some(match self {
            ValueOp::Eq => ord == Equal,
            ValueOp::Ne => ord != Equal,
            ValueOp::Lt => ord == Less,
            ValueOp::Le => ord != Greater,
            ValueOp::Gt => ord == Greater,
            ValueOp::Ge => ord != Less,
            ValueOp::Within(_) => unreachable!(),
        })
    }

    pub fn symbol(&self) -> String {
        match self {
            ValueOp::Eq => "=".into(),
            ValueOp::Ne => "!=".into(),
            ValueOp::Lt => "<".into(),
            ValueOp::Le => "<=".into(),
            ValueOp::Gt => ">".into(),
            ValueOp::Ge => ">=".into(),
            ValueOp::Within(d) => format!("within {d}"),
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            ValueOp::Eq => "eq",
            ValueOp::Ne => "ne",
            ValueOp::Lt => "lt",
            ValueOp::Le => "le",
            ValueOp::Gt => "gt",
            ValueOp::Ge => "ge",
            ValueOp::Within(_) => "within",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternOp {
    Same,
    Different,
    Opposite,
}

impl PatternOp {
    pub fn name(self) -> &'static str {
        match self {
            PatternOp::Same => "same",
            PatternOp::Different => "different",
            PatternOp::Opposite => "opposite",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointRelation {
    Before,
    Same,
    After,
}

impl PointRelation {
    pub fn between(a: usize, b: usize) -> PointRelation {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => PointRelation::Before,
            std::cmp::Ordering::Equal => PointRelation::Same,
            std::cmp::Ordering::Greater => PointRelation::After,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PointRelation::Before => "before",
            PointRelation::Same => "same",
            PointRelation::After => "after",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetOp {
    Equal,
    Subset,
    Superset,
    Disjoint,
    Overlapping,
}

impl SetOp {
    pub fn name(self) -> &'static str {
        match self {
            SetOp::Equal => "equal",
            SetOp::Subset => "subset",
            SetOp::Superset => "superset",
            SetOp::Disjoint => "disjoint",
            SetOp::Overlapping => "overlapping",
        }
    }

    pub fn holds<T: Ord>(self, a: &BTreeSet<T>, b: &BTreeSet<T>) -> bool {
        match self {
            SetOp::Equal => a == b,
            SetOp::Subset => a.is_subset(b),
            SetOp::Superset => a.is_superset(b),
            SetOp::Disjoint => a.is_disjoint(b),
            SetOp::Overlapping => !a.is_disjoint(b),
        }
    }

    /// The most specific relation between two sets.
    pub fn most_specific<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> SetOp {
        [SetOp::Equal, SetOp::Subset, SetOp::Superset, SetOp::Disjoint, SetOp::Overlapping]
            .into_iter()
            .find(|op| op.holds(a, b))
            .expect("disjoint or overlapping always holds")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructuralOp {
    Adjacent,
    Connected,
    DistanceLe(usize),
    ConfigurationEqual,
}

impl StructuralOp {
    pub fn name(self) -> &'static str {
        match self {
            StructuralOp::Adjacent => "adjacent",
            StructuralOp::Connected => "connected",
            StructuralOp::DistanceLe(_) => "distance_le",
            StructuralOp::ConfigurationEqual => "configuration_equal",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationFamily {
    Value,
    Pattern,
    TemporalPoint,
    TemporalInterval,
    Set,
    Structural,
}

impl RelationFamily {
    pub const ALL: [RelationFamily; 6] = [
        RelationFamily::Value,
        RelationFamily::Pattern,
        RelationFamily::TemporalPoint,
        RelationFamily::TemporalInterval,
        RelationFamily::Set,
        RelationFamily::Structural,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationFamily::Value => "value",
            RelationFamily::Pattern => "pattern",
            RelationFamily::TemporalPoint => "temporal_point",
            RelationFamily::TemporalInterval => "temporal_interval",
            RelationFamily::Set => "set",
            RelationFamily::Structural => "structural",
        }
    }

    pub fn from_name(name: &str) -> Option<RelationFamily> {
        RelationFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
    }
}

/// One relation from one family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RelationSpec {
    Value(ValueOp),
    Pattern(PatternOp),
    TemporalPoint(PointRelation),
    TemporalInterval(AllenRelation),
    Set(SetOp),
    Structural(StructuralOp),
}

impl RelationSpec {
    pub fn family(&self) -> RelationFamily {
        match self {
            RelationSpec::Value(_) => RelationFamily::Value,
            RelationSpec::Pattern(_) => RelationFamily::Pattern,
            RelationSpec::TemporalPoint(_) => RelationFamily::TemporalPoint,
            RelationSpec::TemporalInterval(_) => RelationFamily::TemporalInterval,
            RelationSpec::Set(_) => RelationFamily::Set,
            RelationSpec::Structural(_) => RelationFamily::Structural,
        }
    }

    /// Lowercase relation tag, e.g. `overlaps` or `distance_le`.
    pub fn tag(&self) -> &'static str {
        match self {
            RelationSpec::Value(op) => op.tag(),
            RelationSpec::Pattern(op) => op.name(),
            RelationSpec::TemporalPoint(op) => op.name(),
            RelationSpec::TemporalInterval(op) => op.name(),
            RelationSpec::Set(op) => op.name(),
            RelationSpec::Structural(op) => op.name(),
        }
    }

    /// True when `r(a, b)` always equals `r(b, a)`.
    pub fn is_symmetric(&self) -> bool {
        match self {
            RelationSpec::Value(op) => matches!(op, ValueOp::Eq | ValueOp::Ne | ValueOp::Within(_)),
            RelationSpec::Pattern(_) => true,
            RelationSpec::TemporalPoint(op) => *op == PointRelation::Same,
            RelationSpec::TemporalInterval(op) => *op == AllenRelation::Equals,
            RelationSpec::Set(op) => matches!(op, SetOp::Equal | SetOp::Disjoint | SetOp::Overlapping),
            RelationSpec::Structural(_) => true,
        }
    }
}

impl fmt::Display for RelationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationSpec::Value(op) => f.write_str(&op.symbol()),
            RelationSpec::Structural(StructuralOp::DistanceLe(k)) => write!(f, "distance_le {k}"),
            other => f.write_str(other.tag()),
        }
    }
}

impl Serialize for RelationSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("family", self.family().name())?;
        map.serialize_entry("relation", self.tag())?;
        match self {
            RelationSpec::Value(ValueOp::Within(d)) => map.serialize_entry("tolerance", d)?,
            RelationSpec::Structural(StructuralOp::DistanceLe(k)) => map.serialize_entry("k", k)?,
            _ => {}
        }
        map.end()
    }
}

/// Why a relation holds or fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum Witness {
    Values {
        left: AttributeValue,
        right: AttributeValue,
    },
    Similarity {
        score: f64,
        opposite: bool,
        threshold: f64,
    },
    Points {
        left: usize,
        right: usize,
        relation: PointRelation,
    },
    Intervals {
        left: TimeInterval,
        right: TimeInterval,
        relation: AllenRelation,
    },
    Sets {
        shared: Vec<String>,
        left_only: Vec<String>,
        right_only: Vec<String>,
    },
    Edge {
        edge: String,
    },
    Path {
        nodes: Vec<String>,
        distance: usize,
    },
    Unreachable,
    Isomorphism {
        exact: bool,
        equal: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationOutcome {
    pub holds: bool,
    pub witness: Witness,
}

/// Something a relation can be evaluated on.
#[derive(Clone, Copy, Debug)]
pub enum Operand<'a> {
    Value(&'a AttributeValue),
    Pattern(&'a Pattern),
    Time(TimeRef),
    Graph(&'a GraphRef),
}

impl Operand<'_> {
    fn describe(&self) -> &'static str {
        match self {
            Operand::Value(_) => "a value",
            Operand::Pattern(_) => "a pattern",
            Operand::Time(_) => "a time reference",
            Operand::Graph(_) => "a graph reference",
        }
    }
}

pub struct RelationContext<'a> {
    pub graph: &'a TemporalGraph,
    pub patterns: &'a PatternConfig,
    /// Time point for structural relations.
    pub time: Option<usize>,
}

/// Evaluates `lhs relation rhs`.
pub fn evaluate(
    relation: &RelationSpec,
    lhs: Operand<'_>,
    rhs: Operand<'_>,
    ctx: &RelationContext<'_>,
) -> Result<RelationOutcome> {
    let family_error = || {
        Error::FamilyMismatch(format!(
            "{} relation '{}' cannot relate {} and {}",
            relation.family().name(),
            relation.tag(),
            lhs.describe(),
            rhs.describe()
        ))
    };
    match (relation, lhs, rhs) {
        (RelationSpec::Value(op), Operand::Value(a), Operand::Value(b)) => {
            let holds = op.apply(a, b).ok_or_else(|| {
                Error::TypeError(format!("cannot compare {} value {a} with {} value {b}", a.kind(), b.kind()))
            })?;
            Ok(RelationOutcome {
                holds,
                witness: Witness::Values {
                    left: a.clone(),
                    right: b.clone(),
                },
            })
        }
        (RelationSpec::Pattern(op), Operand::Pattern(a), Operand::Pattern(b)) => {
            let sim = similarity(a, b, ctx.patterns)?;
            let threshold = ctx.patterns.similarity_threshold;
            let holds = match op {
                PatternOp::Same => sim.score >= threshold,
                PatternOp::Different => sim.score < threshold,
                PatternOp::Opposite => sim.opposite,
            };
            Ok(RelationOutcome {
                holds,
                witness: Witness::Similarity {
                    score: sim.score,
                    opposite: sim.opposite,
                    threshold,
                },
            })
        }
        (RelationSpec::TemporalPoint(op), Operand::Time(TimeRef::Point(a)), Operand::Time(TimeRef::Point(b))) => {
            let relation = PointRelation::between(a, b);
            Ok(RelationOutcome {
                holds: relation == *op,
                witness: Witness::Points { left: a, right: b, relation },
            })
        }
        (RelationSpec::TemporalInterval(op), Operand::Time(a), Operand::Time(b)) => {
            let (a, b) = (a.as_interval(), b.as_interval());
            let relation = AllenRelation::between(a, b);
            Ok(RelationOutcome {
                holds: relation == *op,
                witness: Witness::Intervals {
                    left: a,
                    right: b,
                    relation,
                },
            })
        }
        (RelationSpec::Set(op), Operand::Graph(a), Operand::Graph(b)) => {
            let sa = a.members(ctx.graph)?;
            let sb = b.members(ctx.graph)?;
            let names = |it: &mut dyn Iterator<Item = &crate::graph::ElementRef>| {
                it.map(ToString::to_string).collect::<Vec<_>>()
            };
            Ok(RelationOutcome {
                holds: op.holds(&sa, &sb),
                witness: Witness::Sets {
                    shared: names(&mut sa.intersection(&sb)),
                    left_only: names(&mut sa.difference(&sb)),
                    right_only: names(&mut sb.difference(&sa)),
                },
            })
        }
        (RelationSpec::Structural(op), Operand::Graph(a), Operand::Graph(b)) => {
            let t = ctx
                .time
                .ok_or_else(|| Error::MissingTimeContext(op.name().to_string()))?;
            structural(ctx.graph, *op, a, b, t)
        }
        _ => Err(family_error()),
    }
}

fn structural(graph: &TemporalGraph, op: StructuralOp, a: &GraphRef, b: &GraphRef, t: usize) -> Result<RelationOutcome> {
    let absent = |r: &GraphRef| Error::AbsentElement {
        element: r.label(),
        time: graph.domain().label(t).to_string(),
    };
    let na = a.nodes_at(graph, t)?;
    if na.is_empty() {
        return Err(absent(a));
    }
    let nb = b.nodes_at(graph, t)?;
    if nb.is_empty() {
        return Err(absent(b));
    }
    let node_id = |i: usize| graph.nodes()[i].id.clone();
    match op {
        StructuralOp::Adjacent => {
            let snap = graph.snapshot(t);
            let targets: BTreeSet<usize> = nb.iter().copied().collect();
            for &u in &na {
                if let Some((_, e)) = snap
                    .neighbors(u, Direction::Any)
                    .into_iter()
                    .find(|(v, _)| targets.contains(v))
                {
                    return Ok(RelationOutcome {
                        holds: true,
                        witness: Witness::Edge {
                            edge: graph.edges()[e].id.clone(),
                        },
                    });
                }
            }
            Ok(RelationOutcome {
                holds: false,
                witness: Witness::Unreachable,
            })
        }
        StructuralOp::Connected | StructuralOp::DistanceLe(_) => {
            let snap = graph.snapshot(t);
            let r = reach(snap, graph.nodes().len(), &na, Direction::Any, None, &|_| Ok(true))?;
            let nearest = nb
                .iter()
                .filter_map(|&v| r.distance[v].map(|d| (d, v)))
                .min();
            Ok(match nearest {
                Some((d, v)) => RelationOutcome {
                    holds: match op {
                        StructuralOp::DistanceLe(k) => d <= k,
                        _ => true,
                    },
                    witness: Witness::Path {
                        nodes: r.path_to(v).expect("reached").into_iter().map(node_id).collect(),
                        distance: d,
                    },
                },
                None => RelationOutcome {
                    holds: false,
                    witness: Witness::Unreachable,
                },
            })
        }
        StructuralOp::ConfigurationEqual => {
            let ga = SimpleGraph::induced(graph, t, &na);
            let gb = SimpleGraph::induced(graph, t, &nb);
            if ga.node_count() <= iso::EXACT_LIMIT && gb.node_count() <= iso::EXACT_LIMIT {
                let equal = iso::isomorphic(&ga, &gb);
                Ok(RelationOutcome {
                    holds: equal,
                    witness: Witness::Isomorphism {
                        exact: true,
                        equal,
                        note: None,
                    },
                })
            } else {
                let equal = a.members(graph)? == b.members(graph)?;
                Ok(RelationOutcome {
                    holds: equal,
                    witness: Witness::Isomorphism {
                        exact: false,
                        equal,
                        note: Some(format!(
                            "more than {} nodes: compared member sets instead of shapes",
                            iso::EXACT_LIMIT
                        )),
                    },
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_interval_examples() {
        let iv = |a, b| TimeInterval::new(a, b).unwrap();
        assert_eq!(AllenRelation::between(iv(0, 2), iv(3, 5)), AllenRelation::Before);
        assert_eq!(AllenRelation::between(iv(0, 4), iv(2, 6)), AllenRelation::Overlaps);
        assert_eq!(AllenRelation::between(iv(0, 2), iv(2, 6)), AllenRelation::Meets);
        assert_eq!(AllenRelation::between(iv(2, 2), iv(2, 6)), AllenRelation::Starts);
        assert_eq!(AllenRelation::between(iv(6, 6), iv(2, 6)), AllenRelation::Finishes);
    }

    #[test]
    fn set_specificity() {
        let a: BTreeSet<u8> = [1, 2].into();
        let b: BTreeSet<u8> = [1, 2, 3].into();
        let c: BTreeSet<u8> = [4].into();
        assert_eq!(SetOp::most_specific(&a, &b), SetOp::Subset);
        assert_eq!(SetOp::most_specific(&b, &a), SetOp::Superset);
        assert_eq!(SetOp::most_specific(&a, &c), SetOp::Disjoint);
        assert_eq!(SetOp::most_specific(&a, &a), SetOp::Equal);
    }

    #[test]
    fn value_ops_respect_kinds() {
        let one = AttributeValue::Numeric(1.0);
        let two = AttributeValue::Numeric(2.0);
        assert_eq!(ValueOp::Lt.apply(&one, &two), Some(true));
        assert_eq!(ValueOp::Within(1.0).apply(&one, &two), Some(true));
        assert_eq!(ValueOp::Eq.apply(&one, &AttributeValue::from("x")), None);
    }

    #[test]
    fn relation_tags_serialize_lowercase() {
        let r = RelationSpec::Structural(StructuralOp::DistanceLe(2));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"family":"structural","relation":"distance_le","k":2}"#);
    }
}
