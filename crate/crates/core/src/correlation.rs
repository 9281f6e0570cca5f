//! Pearson correlation between attribute series, optionally lagged, and
//! between graph series and external series.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ElementRef, TemporalGraph};
use crate::reference::GraphRef;
use crate::time::TimeInterval;
use crate::value::ValueKind;

/// Pearson's r by the two-pass formula, clamped to `[-1, 1]`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientSamples { found: n });
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::VarianceZero("first".to_string()));
    }
    if syy == 0.0 {
        return Err(Error::VarianceZero("second".to_string()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pairs `x[t]` with `y[t + lag]` wherever both are present.
pub fn lagged_pairs(x: &BTreeMap<usize, f64>, y: &BTreeMap<usize, f64>, lag: i64) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &xv) in x {
        let shifted = t as i64 + lag;
        if shifted < 0 {
            continue;
        }
        if let Some(&yv) = y.get(&(shifted as usize)) {
            xs.push(xv);
            ys.push(yv);
        }
    }
    (xs, ys)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SeriesAggregate {
    #[default]
    Mean,
    Sum,
    Min,
    Max,
}

impl SeriesAggregate {
    pub fn name(self) -> &'static str {
        match self {
            SeriesAggregate::Mean => "MEAN",
            SeriesAggregate::Sum => "SUM",
            SeriesAggregate::Min => "MIN",
            SeriesAggregate::Max => "MAX",
        }
    }

    fn apply(self, values: &[f64]) -> f64 {
        match self {
            SeriesAggregate::Mean => values.iter().sum::<f64>() / values.len() as f64,
            SeriesAggregate::Sum => values.iter().sum(),
            SeriesAggregate::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
            SeriesAggregate::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// A numeric attribute followed over an interval, on one element or
/// aggregated over the alive members of a subset.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSeries {
    pub attr: String,
    pub graph: GraphRef,
    pub interval: TimeInterval,
    pub aggregate: SeriesAggregate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Association {
    Positive,
    Negative,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub variant: String,
    pub r: f64,
    pub samples: usize,
    pub lag: i64,
    pub association: Association,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedElement {
    pub element: String,
    pub reason: String,
}

/// Per-element correlations plus the elements that could not be scored.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerElementReport {
    pub reports: Vec<CorrelationReport>,
    pub skipped: Vec<SkippedElement>,
}

fn numeric(graph: &TemporalGraph, attr: &str) -> Result<()> {
    match graph.attribute_kind(attr)? {
        ValueKind::Numeric => Ok(()),
        kind => Err(Error::TypeError(format!(
            "correlation needs a numeric attribute, '{attr}' is {kind}"
        ))),
    }
}

fn numeric_value(graph: &TemporalGraph, t: usize, elem: &ElementRef, attr: &str) -> Result<Option<f64>> {
    match graph.eval(t, elem, attr) {
        Ok(v) => Ok(v.value.as_f64()),
        Err(e) if e.is_undefined() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Values of one element over an interval, keyed by time index.
pub fn element_series(graph: &TemporalGraph, elem: &ElementRef, attr: &str, interval: TimeInterval) -> Result<BTreeMap<usize, f64>> {
    numeric(graph, attr)?;
    graph.check_element(elem)?;
    let mut out = BTreeMap::new();
    for t in interval.iter() {
        if let Some(v) = numeric_value(graph, t, elem, attr)? {
            out.insert(t, v);
        }
    }
    Ok(out)
}

fn alive_members(graph: &TemporalGraph, g: &GraphRef, t: usize) -> Result<Vec<ElementRef>> {
    match g {
        GraphRef::Subset(s) => Ok(graph.subset_alive_members(s, t)),
        GraphRef::Element(ElementRef::Object(name)) => Ok(graph.subset_alive_members(graph.subset(name)?, t)),
        GraphRef::Element(e) => Ok(if graph.exists(e, t)? { vec![e.clone()] } else { vec![] }),
        GraphRef::Pair(..) => Err(Error::FamilyMismatch("cannot correlate over a node pair".to_string())),
    }
}

fn all_members(graph: &TemporalGraph, g: &GraphRef) -> Result<Vec<ElementRef>> {
    match g {
        GraphRef::Pair(..) => Err(Error::FamilyMismatch("cannot correlate over a node pair".to_string())),
        other => Ok(other.members(graph)?.into_iter().collect()),
    }
}

/// The series a [`GraphSeries`] describes, skipping undefined time points.
pub fn graph_series(graph: &TemporalGraph, series: &GraphSeries) -> Result<BTreeMap<usize, f64>> {
    numeric(graph, &series.attr)?;
    if let GraphRef::Element(e) = &series.graph {
        if !matches!(e, ElementRef::Object(_)) {
            return element_series(graph, e, &series.attr, series.interval);
        }
    }
    let mut out = BTreeMap::new();
    for t in series.interval.iter() {
        let mut values = Vec::new();
        for m in alive_members(graph, &series.graph, t)? {
            if let Some(v) = numeric_value(graph, t, &m, &series.attr)? {
                values.push(v);
            }
        }
        if !values.is_empty() {
            out.insert(t, series.aggregate.apply(&values));
        }
    }
    Ok(out)
}

pub struct Correlator<'a> {
    pub graph: &'a TemporalGraph,
    pub threshold: f64,
}

impl Correlator<'_> {
    fn report(&self, variant: &str, xs: &[f64], ys: &[f64], lag: i64, element: Option<String>) -> Result<CorrelationReport> {
        let r = pearson(xs, ys)?;
        let association = if r >= self.threshold {
            Association::Positive
        } else if r <= -self.threshold {
            Association::Negative
        } else {
            Association::None
        };
        Ok(CorrelationReport {
            variant: variant.to_string(),
            r,
            samples: xs.len(),
            lag,
            association,
            element,
        })
    }

    /// Two attributes across the alive members of a subset at one time point.
    pub fn cross_section(&self, a: &str, b: &str, members: &GraphRef, t: usize) -> Result<CorrelationReport> {
        numeric(self.graph, a)?;
        numeric(self.graph, b)?;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for m in alive_members(self.graph, members, t)? {
            if let (Some(x), Some(y)) = (
                numeric_value(self.graph, t, &m, a)?,
                numeric_value(self.graph, t, &m, b)?,
            ) {
                xs.push(x);
                ys.push(y);
            }
        }
        self.report("cross_section", &xs, &ys, 0, None)
    }

    /// Two attributes of one element over an interval.
    pub fn two_trends(&self, a: &str, b: &str, elem: &ElementRef, interval: TimeInterval, lag: i64) -> Result<CorrelationReport> {
        let x = element_series(self.graph, elem, a, interval)?;
        let y = element_series(self.graph, elem, b, interval)?;
        let (xs, ys) = lagged_pairs(&x, &y, lag);
        self.report("two_trends", &xs, &ys, lag, None)
    }

    /// Two attributes over an interval, pooling the lagged pairs of every
    /// member of a subset into one sample.
    pub fn pooled(&self, a: &str, b: &str, members: &GraphRef, interval: TimeInterval, lag: i64) -> Result<CorrelationReport> {
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for m in all_members(self.graph, members)? {
            let x = element_series(self.graph, &m, a, interval)?;
            let y = element_series(self.graph, &m, b, interval)?;
            let (px, py) = lagged_pairs(&x, &y, lag);
            xs.extend(px);
            ys.extend(py);
        }
        self.report("pooled", &xs, &ys, lag, None)
    }

    /// One correlation per member of a subset.
    pub fn per_element(&self, a: &str, b: &str, members: &GraphRef, interval: TimeInterval, lag: i64) -> Result<PerElementReport> {
        let mut reports = Vec::new();
        let mut skipped = Vec::new();
        for m in all_members(self.graph, members)? {
            let x = element_series(self.graph, &m, a, interval)?;
            let y = element_series(self.graph, &m, b, interval)?;
            let (xs, ys) = lagged_pairs(&x, &y, lag);
            match self.report("per_element", &xs, &ys, lag, Some(m.to_string())) {
                Ok(r) => reports.push(r),
                Err(e @ (Error::InsufficientSamples { .. } | Error::VarianceZero(_))) => skipped.push(SkippedElement {
                    element: m.to_string(),
                    reason: e.code().to_string(),
                }),
                Err(e) => return Err(e),
            }
        }
        Ok(PerElementReport { reports, skipped })
    }

    /// A graph series against an external series aligned by time point.
    pub fn external(&self, series: &GraphSeries, external: &str, lag: i64) -> Result<CorrelationReport> {
        let ext = self.graph.series(external)?;
        let x = graph_series(self.graph, series)?;
        let ext_in_range: BTreeMap<usize, f64> = ext
            .range(series.interval.start..=series.interval.end)
            .map(|(&t, &v)| (t, v))
            .collect();
        let (xs, ys) = lagged_pairs(&x, &ext_in_range, lag);
        self.report("external", &xs, &ys, lag, None)
    }

    /// Two graph series of equal length, aligned by offset from their
    /// interval starts.
    pub fn homogeneous(&self, a: &GraphSeries, b: &GraphSeries, lag: i64) -> Result<CorrelationReport> {
        if a.interval.len() != b.interval.len() {
            return Err(Error::LengthMismatch {
                left: a.interval.len(),
                right: b.interval.len(),
            });
        }
        let rebase = |s: BTreeMap<usize, f64>, start: usize| -> BTreeMap<usize, f64> {
            s.into_iter().map(|(t, v)| (t - start, v)).collect()
        };
        let x = rebase(graph_series(self.graph, a)?, a.interval.start);
        let y = rebase(graph_series(self.graph, b)?, b.interval.start);
        let (xs, ys) = lagged_pairs(&x, &y, lag);
        let variant = match (a.graph == b.graph, a.interval == b.interval) {
            (true, true) => "homogeneous_identical",
            (false, true) => "homogeneous_across_graph",
            (true, false) => "homogeneous_across_time",
            (false, false) => "homogeneous_across_both",
        };
        self.report(variant, &xs, &ys, lag, None)
    }
}
