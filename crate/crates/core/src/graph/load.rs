//! Event-record ingest (JSON lines or CSV) and canonical export.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{AttributeInfo, Edge, ElementRef, MemberKind, Node, Subset, TemporalGraph};
use crate::error::{Error, Result};
use crate::time::{TimeDomain, TimeInterval, TimeLabel};
use crate::value::AttributeValue;

/// One input event. `end` defaults to the last timestamp of the dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Record {
    Time {
        t: TimeLabel,
    },
    Node {
        id: String,
        start: TimeLabel,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        end: Option<TimeLabel>,
    },
    Edge {
        id: String,
        src: String,
        dst: String,
        #[serde(default)]
        directed: bool,
        start: TimeLabel,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        end: Option<TimeLabel>,
    },
    Attr {
        elem: String,
        name: String,
        t: TimeLabel,
        value: AttributeValue,
    },
    Subset {
        name: String,
        members: Vec<String>,
    },
    Series {
        name: String,
        t: TimeLabel,
        value: f64,
    },
}

fn schema(line: usize, message: impl Into<String>) -> Error {
    Error::Schema {
        line,
        message: message.into(),
    }
}

fn consistency(line: usize, message: impl Into<String>) -> Error {
    Error::Consistency {
        line,
        message: message.into(),
    }
}

/// Parses JSON-lines records, skipping blank lines. Line numbers are 1-based.
pub fn parse_jsonl(text: &str) -> Result<Vec<(usize, Record)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let record: Record =
            serde_json::from_str(trimmed).map_err(|e| schema(i + 1, e.to_string()))?;
        out.push((i + 1, record));
    }
    Ok(out)
}

fn csv_value(token: &str) -> AttributeValue {
    match token {
        "true" => AttributeValue::Boolean(true),
        "false" => AttributeValue::Boolean(false),
        _ => match token.parse::<f64>() {
            Ok(v) if v.is_finite() => AttributeValue::Numeric(v),
            _ => AttributeValue::Categorical(token.to_string()),
        },
    }
}

/// Parses CSV records with a header row naming the same fields as the JSON
/// form. Subset members are separated by `;`.
pub fn parse_csv(text: &str) -> Result<Vec<(usize, Record)>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| schema(1, e.to_string()))?
        .clone();
    let column: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    if !column.contains_key("type") {
        return Err(schema(1, "missing 'type' column"));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            schema(line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let get = |name: &str| -> Option<&str> {
            column
                .get(name)
                .and_then(|&i| row.get(i))
                .filter(|s| !s.is_empty())
        };
        let need = |name: &str| -> Result<&str> {
            get(name).ok_or_else(|| schema(line, format!("missing field `{name}`")))
        };
        let label = |name: &str| -> Result<TimeLabel> { need(name).map(TimeLabel::parse_token) };
        let record = match need("type")? {
            "time" => Record::Time { t: label("t")? },
            "node" => Record::Node {
                id: need("id")?.to_string(),
                start: label("start")?,
                end: get("end").map(TimeLabel::parse_token),
            },
            "edge" => Record::Edge {
                id: need("id")?.to_string(),
                src: need("src")?.to_string(),
                dst: need("dst")?.to_string(),
                directed: match get("directed") {
                    None | Some("false") => false,
                    Some("true") => true,
                    Some(other) => {
                        return Err(schema(line, format!("invalid `directed` value '{other}'")))
                    }
                },
                start: label("start")?,
                end: get("end").map(TimeLabel::parse_token),
            },
            "attr" => Record::Attr {
                elem: need("elem")?.to_string(),
                name: need("name")?.to_string(),
                t: label("t")?,
                value: csv_value(need("value")?),
            },
            "subset" => Record::Subset {
                name: need("name")?.to_string(),
                members: need("members")?
                    .split(';')
                    .map(|m| m.trim().to_string())
                    .filter(|m| !m.is_empty())
                    .collect(),
            },
            "series" => {
                let raw = need("value")?;
                let value = raw
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| schema(line, format!("series value '{raw}' is not numeric")))?;
                Record::Series {
                    name: need("name")?.to_string(),
                    t: label("t")?,
                    value,
                }
            }
            other => return Err(schema(line, format!("unknown record type '{other}'"))),
        };
        out.push((line, record));
    }
    Ok(out)
}

fn merge_intervals(mut intervals: Vec<TimeInterval>) -> Vec<TimeInterval> {
    intervals.sort();
    let mut merged: Vec<TimeInterval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match merged.last_mut() {
            Some(last) if iv.start <= last.end + 1 => last.end = last.end.max(iv.end),
            _ => merged.push(iv),
        }
    }
    merged
}

fn covered(existence: &[TimeInterval], iv: &TimeInterval) -> bool {
    existence.iter().any(|e| e.contains_interval(iv))
}

struct EdgeDraft {
    line: usize,
    src: String,
    dst: String,
    directed: bool,
    spans: Vec<(usize, TimeInterval)>,
}

impl TemporalGraph {
    /// Builds a graph from parsed records. All records are collected before
    /// validation, so record order does not matter.
    pub fn from_records(records: Vec<(usize, Record)>) -> Result<TemporalGraph> {
        let mut labels = Vec::new();
        for (_, r) in &records {
            match r {
                Record::Time { t } | Record::Attr { t, .. } | Record::Series { t, .. } => {
                    labels.push(t.clone())
                }
                Record::Node { start, end, .. } | Record::Edge { start, end, .. } => {
                    labels.push(start.clone());
                    labels.extend(end.clone());
                }
                Record::Subset { .. } => {}
            }
        }
        let domain = TimeDomain::from_labels(labels);
        let span = |line: usize, start: &TimeLabel, end: &Option<TimeLabel>| -> Result<TimeInterval> {
            let s = domain.index_of(start).expect("label collected");
            let e = match end {
                Some(end) => domain.index_of(end).expect("label collected"),
                None => domain.len() - 1,
            };
            if s > e {
                return Err(schema(line, format!("start {start} is after end")));
            }
            Ok(TimeInterval { start: s, end: e })
        };

        let mut node_spans: BTreeMap<String, Vec<TimeInterval>> = BTreeMap::new();
        let mut edge_drafts: BTreeMap<String, EdgeDraft> = BTreeMap::new();
        for (line, r) in &records {
            match r {
                Record::Node { id, start, end } => {
                    if id.is_empty() {
                        return Err(schema(*line, "empty node id"));
                    }
                    node_spans
                        .entry(id.clone())
                        .or_default()
                        .push(span(*line, start, end)?);
                }
                Record::Edge {
                    id,
                    src,
                    dst,
                    directed,
                    start,
                    end,
                } => {
                    if id.is_empty() {
                        return Err(schema(*line, "empty edge id"));
                    }
                    if src == dst {
                        return Err(consistency(*line, format!("edge {id} is a self-loop")));
                    }
                    let iv = span(*line, start, end)?;
                    let draft = edge_drafts.entry(id.clone()).or_insert_with(|| EdgeDraft {
                        line: *line,
                        src: src.clone(),
                        dst: dst.clone(),
                        directed: *directed,
                        spans: Vec::new(),
                    });
                    if draft.src != *src || draft.dst != *dst || draft.directed != *directed {
                        return Err(consistency(
                            *line,
                            format!("edge {id} redefined with different endpoints (first seen on line {})", draft.line),
                        ));
                    }
                    draft.spans.push((*line, iv));
                }
                _ => {}
            }
        }

        let nodes: Vec<Node> = node_spans
            .into_iter()
            .map(|(id, spans)| Node {
                id,
                existence: merge_intervals(spans),
            })
            .collect();
        let node_index: HashMap<String, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();

        let mut edges = Vec::with_capacity(edge_drafts.len());
        for (id, draft) in edge_drafts {
            let endpoint = |name: &str| -> Result<usize> {
                node_index.get(name).copied().ok_or_else(|| {
                    consistency(draft.line, format!("edge {id} references unknown node {name}"))
                })
            };
            let s = endpoint(&draft.src)?;
            let d = endpoint(&draft.dst)?;
            for (line, iv) in &draft.spans {
                if !covered(&nodes[s].existence, iv) || !covered(&nodes[d].existence, iv) {
                    return Err(consistency(
                        *line,
                        format!("edge {id} exists while an endpoint does not"),
                    ));
                }
            }
            edges.push(Edge {
                id,
                source: draft.src,
                target: draft.dst,
                directed: draft.directed,
                existence: merge_intervals(draft.spans.into_iter().map(|(_, iv)| iv).collect()),
                source_idx: s,
                target_idx: d,
            });
        }
        let edge_index: HashMap<String, usize> =
            edges.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();

        let mut subsets = BTreeMap::new();
        for (line, r) in &records {
            let Record::Subset { name, members } = r else {
                continue;
            };
            if name.is_empty() {
                return Err(schema(*line, "empty subset name"));
            }
            if subsets.contains_key(name) {
                return Err(schema(*line, format!("subset {name} defined twice")));
            }
            if members.is_empty() {
                return Err(schema(*line, format!("subset {name} has no members")));
            }
            let mut kind = None;
            let mut ids = BTreeSet::new();
            for m in members {
                let elem: ElementRef = m
                    .parse()
                    .map_err(|_| schema(*line, format!("invalid member reference '{m}'")))?;
                let (k, known) = match &elem {
                    ElementRef::Node(id) => (MemberKind::Nodes, node_index.contains_key(id)),
                    ElementRef::Edge(id) => (MemberKind::Edges, edge_index.contains_key(id)),
                    ElementRef::Object(_) => {
                        return Err(schema(*line, "subsets cannot contain subsets"))
                    }
                };
                if *kind.get_or_insert(k) != k {
                    return Err(schema(*line, format!("subset {name} mixes nodes and edges")));
                }
                if !known {
                    return Err(consistency(*line, format!("subset {name} references unknown {m}")));
                }
                ids.insert(elem.id().to_string());
            }
            subsets.insert(
                name.clone(),
                Subset {
                    name: name.clone(),
                    kind: kind.expect("non-empty"),
                    members: ids,
                },
            );
        }

        let alive_nodes: Vec<Vec<usize>> = domain
            .labels()
            .iter()
            .enumerate()
            .map(|(t, _)| {
                (0..nodes.len())
                    .filter(|&i| covered(&nodes[i].existence, &TimeInterval::point(t)))
                    .collect()
            })
            .collect();
        let alive_edges: Vec<Vec<usize>> = (0..domain.len())
            .map(|t| {
                (0..edges.len())
                    .filter(|&i| covered(&edges[i].existence, &TimeInterval::point(t)))
                    .collect()
            })
            .collect();
        let snapshots = (0..domain.len()).map(|_| OnceLock::new()).collect();

        let mut graph = TemporalGraph {
            domain,
            nodes,
            node_index,
            edges,
            edge_index,
            subsets,
            attributes: BTreeMap::new(),
            values: BTreeMap::new(),
            series: BTreeMap::new(),
            alive_nodes,
            alive_edges,
            snapshots,
        };

        for (line, r) in &records {
            match r {
                Record::Attr {
                    elem,
                    name,
                    t,
                    value,
                } => graph.insert_attr(*line, elem, name, t, value)?,
                Record::Series { name, t, value } => {
                    if !value.is_finite() {
                        return Err(schema(*line, "series value must be finite"));
                    }
                    let ti = graph.domain.index_of(t).expect("label collected");
                    let slot = graph.series.entry(name.clone()).or_default();
                    if let Some(prev) = slot.insert(ti, *value) {
                        if prev != *value {
                            return Err(consistency(
                                *line,
                                format!("series {name} has two values at {t}"),
                            ));
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(graph)
    }

    fn insert_attr(
        &mut self,
        line: usize,
        elem: &str,
        name: &str,
        t: &TimeLabel,
        value: &AttributeValue,
    ) -> Result<()> {
        if name.is_empty() || name.starts_with('@') {
            return Err(schema(line, format!("invalid attribute name '{name}'")));
        }
        if let AttributeValue::Numeric(v) = value {
            if !v.is_finite() {
                return Err(schema(line, "numeric values must be finite"));
            }
        }
        let elem: ElementRef = elem
            .parse()
            .map_err(|_| schema(line, format!("invalid element reference '{elem}'")))?;
        let ti = self.domain.index_of(t).expect("label collected");
        match self.exists(&elem, ti) {
            Ok(true) => {}
            Ok(false) => {
                return Err(consistency(line, format!("attribute on {elem} at {t}, where it does not exist")))
            }
            Err(_) => return Err(consistency(line, format!("attribute on unknown element {elem}"))),
        }
        let info = self
            .attributes
            .entry(name.to_string())
            .or_insert(AttributeInfo {
                kind: value.kind(),
                carry_forward: true,
            });
        if info.kind != value.kind() {
            return Err(schema(
                line,
                format!("attribute {name} is {} but value {value} is {}", info.kind, value.kind()),
            ));
        }
        let history = self
            .values
            .entry(name.to_string())
            .or_default()
            .entry(elem.clone())
            .or_default();
        if let Some(prev) = history.insert(ti, value.clone()) {
            if prev != *value {
                return Err(consistency(line, format!("{elem} has two values of {name} at {t}")));
            }
        }
        Ok(())
    }

    pub fn from_jsonl(text: &str) -> Result<TemporalGraph> {
        TemporalGraph::from_records(parse_jsonl(text)?)
    }

    pub fn from_csv(text: &str) -> Result<TemporalGraph> {
        TemporalGraph::from_records(parse_csv(text)?)
    }

    /// Loads a file; `.csv` files are read as CSV, everything else as JSON lines.
    pub fn load_path(path: &Path) -> Result<TemporalGraph> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            TemporalGraph::from_csv(&text)
        } else {
            TemporalGraph::from_jsonl(&text)
        }
    }

    /// Canonical record list: reloading it yields the same graph.
    pub fn records(&self) -> Vec<Record> {
        let label = |i: usize| self.domain.label(i).clone();
        let mut out: Vec<Record> = self
            .domain
            .labels()
            .iter()
            .map(|t| Record::Time { t: t.clone() })
            .collect();
        for n in &self.nodes {
            for iv in &n.existence {
                out.push(Record::Node {
                    id: n.id.clone(),
                    start: label(iv.start),
                    end: Some(label(iv.end)),
                });
            }
        }
        for e in &self.edges {
            for iv in &e.existence {
                out.push(Record::Edge {
                    id: e.id.clone(),
                    src: e.source.clone(),
                    dst: e.target.clone(),
                    directed: e.directed,
                    start: label(iv.start),
                    end: Some(label(iv.end)),
                });
            }
        }
        for s in self.subsets.values() {
            out.push(Record::Subset {
                name: s.name.clone(),
                members: s.member_refs().iter().map(ToString::to_string).collect(),
            });
        }
        for (name, per_elem) in &self.values {
            for (elem, history) in per_elem {
                for (&t, value) in history {
                    out.push(Record::Attr {
                        elem: elem.to_string(),
                        name: name.clone(),
                        t: label(t),
                        value: value.clone(),
                    });
                }
            }
        }
        for (name, points) in &self.series {
            for (&t, &value) in points {
                out.push(Record::Series {
                    name: name.clone(),
                    t: label(t),
                    value,
                });
            }
        }
        out
    }

    pub fn to_jsonl(&self) -> String {
        let mut text = String::new();
        for r in self.records() {
            text.push_str(&serde_json::to_string(&r).expect("records serialize"));
            text.push('\n');
        }
        text
    }
}
