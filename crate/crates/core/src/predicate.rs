//! Constraints on attribute values and boolean predicates over them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ElementRef, TemporalGraph};
use crate::relation::ValueOp;
use crate::value::{AttributeValue, ValueKind};

/// A constraint a single value may satisfy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum ValueConstraint {
    Compare { op: ValueOp, value: AttributeValue },
    /// Inclusive numeric range.
    Between { low: f64, high: f64 },
    OneOf { values: Vec<AttributeValue> },
}

impl ValueConstraint {
    /// `None` when the value's kind does not fit the constraint.
    pub fn test(&self, v: &AttributeValue) -> Option<bool> {
        match self {
            ValueConstraint::Compare { op, value } => op.apply(v, value),
            ValueConstraint::Between { low, high } => v.as_f64().map(|x| *low <= x && x <= *high),
            ValueConstraint::OneOf { values } => {
                if values.iter().any(|c| c.kind() == v.kind()) {
                    Some(values.iter().any(|c| c == v))
                } else {
                    None
                }
            }
        }
    }

    pub fn satisfied_by(&self, v: &AttributeValue) -> bool {
        self.test(v).unwrap_or(false)
    }

    /// Rejects constraints that can never apply to values of `kind`.
    pub fn check_kind(&self, attr: &str, kind: ValueKind) -> Result<()> {
        let fits = match self {
            ValueConstraint::Compare { op, value } => {
                value.kind() == kind && (!matches!(op, ValueOp::Within(_)) || kind == ValueKind::Numeric)
            }
            ValueConstraint::Between { .. } => kind == ValueKind::Numeric,
            ValueConstraint::OneOf { values } => values.iter().all(|v| v.kind() == kind),
        };
        if fits {
            Ok(())
        } else {
            Err(Error::TypeError(format!(
                "constraint does not apply to {kind} attribute '{attr}'"
            )))
        }
    }
}

/// Boolean combination of attribute constraints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Predicate {
    Atom {
        attr: String,
        constraint: ValueConstraint,
    },
    Not {
        inner: Box<Predicate>,
    },
    And {
        left: Box<Predicate>,
        right: Box<Predicate>,
    },
    Or {
        left: Box<Predicate>,
        right: Box<Predicate>,
    },
}

impl Predicate {
    pub fn atom(attr: &str, constraint: ValueConstraint) -> Predicate {
        Predicate::Atom {
            attr: attr.to_string(),
            constraint,
        }
    }

    pub fn attributes(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_attributes(&mut out);
        out
    }

    fn collect_attributes(&self, out: &mut BTreeSet<String>) {
        match self {
            Predicate::Atom { attr, .. } => {
                out.insert(attr.clone());
            }
            Predicate::Not { inner } => inner.collect_attributes(out),
            Predicate::And { left, right } | Predicate::Or { left, right } => {
                left.collect_attributes(out);
                right.collect_attributes(out);
            }
        }
    }

    /// Verifies attribute names and constraint kinds against the dataset.
    pub fn check(&self, graph: &TemporalGraph) -> Result<()> {
        match self {
            Predicate::Atom { attr, constraint } => {
                constraint.check_kind(attr, graph.attribute_kind(attr)?)
            }
            Predicate::Not { inner } => inner.check(graph),
            Predicate::And { left, right } | Predicate::Or { left, right } => {
                left.check(graph)?;
                right.check(graph)
            }
        }
    }

    /// Three-valued evaluation: `None` when an undefined value leaves the
    /// outcome undecided.
    pub fn eval(&self, graph: &TemporalGraph, t: usize, elem: &ElementRef) -> Result<Option<bool>> {
        match self {
            Predicate::Atom { attr, constraint } => match graph.eval(t, elem, attr) {
                Ok(v) => Ok(constraint.test(&v.value)),
                Err(e) if e.is_undefined() => Ok(None),
                Err(e) => Err(e),
            },
            Predicate::Not { inner } => Ok(inner.eval(graph, t, elem)?.map(|b| !b)),
            Predicate::And { left, right } => {
                let l = left.eval(graph, t, elem)?;
                if l == Some(false) {
                    return Ok(Some(false));
                }
                let r = right.eval(graph, t, elem)?;
                Ok(match (l, r) {
                    (_, Some(false)) => Some(false),
                    (Some(true), Some(true)) => Some(true),
                    _ => None,
                })
            }
            Predicate::Or { left, right } => {
                let l = left.eval(graph, t, elem)?;
                if l == Some(true) {
                    return Ok(Some(true));
                }
                let r = right.eval(graph, t, elem)?;
                Ok(match (l, r) {
                    (_, Some(true)) => Some(true),
                    (Some(false), Some(false)) => Some(false),
                    _ => None,
                })
            }
        }
    }
}
