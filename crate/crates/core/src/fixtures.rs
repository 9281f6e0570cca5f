//! Seeded random temporal graphs for property tests and the `gen` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{Record, TemporalGraph};
use crate::time::TimeLabel;
use crate::value::AttributeValue;

/// Shape limits for generated graphs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixtureParams {
    pub max_nodes: usize,
    pub max_times: usize,
    pub edge_prob: f64,
    pub value_prob: f64,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            max_nodes: 12,
            max_times: 8,
            edge_prob: 0.3,
            value_prob: 0.6,
        }
    }
}

fn label(t: usize) -> TimeLabel {
    TimeLabel::Int(t as i64)
}

fn random_span(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> (usize, usize) {
    let a = rng.gen_range(lo..=hi);
    let b = rng.gen_range(lo..=hi);
    (a.min(b), a.max(b))
}

/// Node ids are `n0..`, edge ids `e0..`; attributes `w` (small integers, so
/// ties are common) and `x` (half steps in `[0, 10]`) on nodes and edges;
/// subsets `S1`, `S2`; external series `ext`.
pub fn random_records(seed: u64, params: FixtureParams) -> Vec<Record> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let times = rng.gen_range(1..=params.max_times.max(1));
    let n = rng.gen_range(1..=params.max_nodes.max(1));
    let last = times - 1;
    let mut records: Vec<Record> = (0..times).map(|t| Record::Time { t: label(t) }).collect();

    let mut alive = vec![vec![false; times]; n];
    for (i, row) in alive.iter_mut().enumerate() {
        let mut spans = Vec::new();
        if rng.gen_bool(0.6) {
            spans.push((0, last));
        } else if times >= 4 && rng.gen_bool(0.3) {
            let cut = rng.gen_range(1..last);
            spans.push(random_span(&mut rng, 0, cut - 1));
            spans.push(random_span(&mut rng, cut + 1, last));
        } else {
            spans.push(random_span(&mut rng, 0, last));
        }
        for (s, e) in spans {
            row[s..=e].iter_mut().for_each(|a| *a = true);
            records.push(Record::Node {
                id: format!("n{i}"),
                start: label(s),
                end: Some(label(e)),
            });
        }
    }

    let mut edge_alive = Vec::new();
    let mut next_edge = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !rng.gen_bool(params.edge_prob) {
                continue;
            }
            let common: Vec<usize> = (0..times).filter(|&t| alive[a][t] && alive[b][t]).collect();
            let Some(&first) = common.first() else { continue };
            let run_end = common
                .iter()
                .zip(first..)
                .take_while(|(t, want)| **t == *want)
                .last()
                .map(|(t, _)| *t)
                .unwrap_or(first);
            let (s, e) = random_span(&mut rng, first, run_end);
            let (src, dst) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            let id = format!("e{next_edge}");
            next_edge += 1;
            records.push(Record::Edge {
                id: id.clone(),
                src: format!("n{src}"),
                dst: format!("n{dst}"),
                directed: rng.gen_bool(0.2),
                start: label(s),
                end: Some(label(e)),
            });
            edge_alive.push((id, s, e));
        }
    }

    let mut value_records = |elem: String, is_alive: &dyn Fn(usize) -> bool, rng: &mut ChaCha8Rng| {
        for t in 0..times {
            if !is_alive(t) {
                continue;
            }
            if rng.gen_bool(params.value_prob) {
                records.push(Record::Attr {
                    elem: elem.clone(),
                    name: "w".into(),
                    t: label(t),
                    value: AttributeValue::Numeric(rng.gen_range(0..5) as f64),
                });
            }
            if rng.gen_bool(params.value_prob) {
                records.push(Record::Attr {
                    elem: elem.clone(),
                    name: "x".into(),
                    t: label(t),
                    value: AttributeValue::Numeric(rng.gen_range(0..=20) as f64 / 2.0),
                });
            }
        }
    };
    for (i, row) in alive.iter().enumerate() {
        value_records(format!("node:n{i}"), &|t| row[t], &mut rng);
    }
    for (id, s, e) in &edge_alive {
        let (s, e) = (*s, *e);
        value_records(format!("edge:{id}"), &|t| s <= t && t <= e, &mut rng);
    }

    let ids: Vec<usize> = (0..n).collect();
    for name in ["S1", "S2"] {
        let k = rng.gen_range(1..=n);
        let mut members: Vec<usize> = ids.choose_multiple(&mut rng, k).copied().collect();
        members.sort_unstable();
        records.push(Record::Subset {
            name: name.into(),
            members: members.iter().map(|m| format!("node:n{m}")).collect(),
        });
    }
    for t in 0..times {
        if rng.gen_bool(0.8) {
            records.push(Record::Series {
                name: "ext".into(),
                t: label(t),
                value: rng.gen_range(-10..=10) as f64,
            });
        }
    }
    records
}

pub fn random_graph(seed: u64, params: FixtureParams) -> Result<TemporalGraph> {
    TemporalGraph::from_records(random_records(seed, params).into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect())
}

pub fn records_to_jsonl(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialise"));
        out.push('\n');
    }
    out
}
