//! Acceptance suite. Each criterion prints one PASS/FAIL line; run with
//! `cargo test --offline -p tgq-cli --test acceptance -- --nocapture`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use tgq_core::correlation::{lagged_pairs, pearson};
use tgq_core::fixtures::{random_graph, random_records, FixtureParams};
use tgq_core::graph::{Direction, Record};
use tgq_core::pattern::{classify_trend, PresenceClass, TrendClass};
use tgq_core::relation::AllenRelation;
use tgq_core::structural::{find_connected_pairs, ConnectionSpec, SimpleGraph};
use tgq_core::task::EngineConfig;
use tgq_core::{TemporalGraph, TimeInterval, TimeLabel};
use tgq_dsl::{corpus, gen, parse, parse_bytes, plan};

const SEEDS: u64 = 50;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn network() -> TemporalGraph {
    TemporalGraph::load_path(&corpus_dir().join("network.jsonl")).unwrap()
}

fn queries() -> Vec<corpus::Entry> {
    corpus::read(&std::fs::read_to_string(corpus_dir().join("queries.tgq")).unwrap())
}

fn bindings(g: &TemporalGraph, src: &str) -> Vec<Value> {
    let env = tgq_dsl::run(src, g, &EngineConfig::default()).unwrap_or_else(|e| panic!("`{src}`: {e}"));
    match serde_json::to_value(env).unwrap()["bindings"].take() {
        Value::Array(b) => b,
        other => panic!("`{src}`: bindings are {other}"),
    }
}

fn s(v: &Value) -> String {
    v.as_str().unwrap_or_else(|| panic!("not a string: {v}")).to_string()
}

fn u(v: &Value) -> usize {
    v.as_u64().unwrap_or_else(|| panic!("not an index: {v}")) as usize
}

fn check_sets<T: Ord + std::fmt::Debug>(what: &str, got: BTreeSet<T>, want: BTreeSet<T>) {
    if got != want {
        let extra: Vec<_> = got.difference(&want).take(5).collect();
        let missing: Vec<_> = want.difference(&got).take(5).collect();
        panic!("{what}: engine-only {extra:?}, oracle-only {missing:?}");
    }
}

/// Brute-force view of a fixture, built from its raw records.
struct Model {
    times: usize,
    nodes: Vec<String>,
    node_alive: Vec<Vec<bool>>,
    edges: Vec<ModelEdge>,
    values: BTreeMap<(String, String), BTreeMap<usize, f64>>,
    subsets: BTreeMap<String, Vec<String>>,
}

struct ModelEdge {
    src: usize,
    dst: usize,
    directed: bool,
    alive: Vec<bool>,
    elem: String,
}

fn idx(l: &TimeLabel) -> usize {
    match l {
        TimeLabel::Int(i) => *i as usize,
        other => panic!("fixture label {other}"),
    }
}

impl Model {
    fn new(records: &[Record]) -> Model {
        let times = records.iter().filter(|r| matches!(r, Record::Time { .. })).count();
        let mut m = Model {
            times,
            nodes: Vec::new(),
            node_alive: Vec::new(),
            edges: Vec::new(),
            values: BTreeMap::new(),
            subsets: BTreeMap::new(),
        };
        for r in records {
            match r {
                Record::Time { .. } | Record::Series { .. } => {}
                Record::Node { id, start, end } => {
                    let i = m.node(id);
                    let end = end.as_ref().map_or(times - 1, idx);
                    (idx(start)..=end).for_each(|t| m.node_alive[i][t] = true);
                }
                Record::Edge { id, src, dst, directed, start, end } => {
                    let end = end.as_ref().map_or(times - 1, idx);
                    let (src, dst) = (m.node(src), m.node(dst));
                    m.edges.push(ModelEdge {
                        src,
                        dst,
                        directed: *directed,
                        alive: (0..times).map(|t| idx(start) <= t && t <= end).collect(),
                        elem: format!("edge:{id}"),
                    });
                }
                Record::Attr { elem, name, t, value } => {
                    let v = value.as_f64().unwrap();
                    m.values.entry((elem.clone(), name.clone())).or_default().insert(idx(t), v);
                }
                Record::Subset { name, members } => {
                    m.subsets.insert(name.clone(), members.clone());
                }
            }
        }
        m
    }

    fn node(&mut self, id: &str) -> usize {
        if let Some(i) = self.nodes.iter().position(|n| n == id) {
            return i;
        }
        self.nodes.push(id.to_string());
        self.node_alive.push(vec![false; self.times]);
        self.nodes.len() - 1
    }

    fn elements(&self) -> Vec<String> {
        let mut out: Vec<String> = self.nodes.iter().map(|n| format!("node:{n}")).collect();
        out.extend(self.edges.iter().map(|e| e.elem.clone()));
        out
    }

    fn alive(&self, elem: &str, t: usize) -> bool {
        if let Some(n) = elem.strip_prefix("node:") {
            let i = self.nodes.iter().position(|x| x == n).unwrap();
            return self.node_alive[i][t];
        }
        self.edges.iter().find(|e| e.elem == elem).unwrap().alive[t]
    }

    /// Recorded value, else the latest earlier one from the same unbroken run
    /// of existence.
    fn value(&self, elem: &str, attr: &str, t: usize) -> Option<f64> {
        if !self.alive(elem, t) {
            return None;
        }
        let series = self.values.get(&(elem.to_string(), attr.to_string()))?;
        let mut r = t;
        loop {
            if let Some(v) = series.get(&r) {
                return Some(*v);
            }
            if r == 0 || !self.alive(elem, r - 1) {
                return None;
            }
            r -= 1;
        }
    }

    fn samples(&self, elem: &str, attr: &str, a: usize, b: usize) -> Vec<(f64, f64)> {
        (a..=b).filter_map(|t| self.value(elem, attr, t).map(|v| (t as f64, v))).collect()
    }

    /// One-step successors of node `u` at `t`.
    fn step(&self, u: usize, t: usize, dir: Direction, via: &dyn Fn(&ModelEdge) -> bool) -> Vec<usize> {
        let mut out = Vec::new();
        for e in self.edges.iter().filter(|e| e.alive[t] && via(e)) {
            let fwd = e.src == u && (!e.directed || dir != Direction::In);
            let back = e.dst == u && (!e.directed || dir != Direction::Out);
            if fwd {
                out.push(e.dst);
            }
            if back {
                out.push(e.src);
            }
        }
        out
    }

    fn bfs(&self, a: usize, t: usize, dir: Direction, limit: Option<usize>, via: &dyn Fn(&ModelEdge) -> bool) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        if !self.node_alive[a][t] {
            return dist;
        }
        dist[a] = Some(0);
        let mut q = VecDeque::from([a]);
        while let Some(x) = q.pop_front() {
            let d = dist[x].unwrap();
            if limit.is_some_and(|l| d >= l) {
                continue;
            }
            for y in self.step(x, t, dir, via) {
                if dist[y].is_none() && self.node_alive[y][t] {
                    dist[y] = Some(d + 1);
                    q.push_back(y);
                }
            }
        }
        dist
    }
}

fn fixture(seed: u64) -> (TemporalGraph, Model) {
    let records = random_records(seed, FixtureParams::default());
    let g = random_graph(seed, FixtureParams::default()).unwrap();
    (g, Model::new(&records))
}

/// `(time, element)` hits; queries at a fixed time omit the time column.
fn hits_tg(b: &[Value], fixed: Option<usize>) -> BTreeSet<(usize, String)> {
    b.iter()
        .map(|h| (fixed.unwrap_or_else(|| u(&h["time"])), s(&h["element"])))
        .collect()
}

// ---- 1. matrix coverage

fn expected_cells() -> BTreeMap<String, &'static str> {
    let mut cells = BTreeMap::new();
    cells.insert("lookup.q1.lookup".to_string(), "directLookup");
    for c in ["find_g", "find_t", "find_tg"] {
        cells.insert(format!("lookup.q1.{c}"), "inverseLookup");
    }
    for q in ["q2", "q3"] {
        cells.insert(format!("lookup.{q}.characterize"), "characterize");
        for c in ["search_g", "search_t", "search_gt"] {
            cells.insert(format!("lookup.{q}.{c}"), "patternSearch");
        }
    }
    for v in ["i", "ii"] {
        cells.insert(format!("lookup.q4.characterize.{v}"), "characterize");
        for c in ["search_g", "search_t", "search_gt"] {
            cells.insert(format!("lookup.q4.{c}.{v}"), "patternSearch");
        }
    }
    let axes = ["same", "diff", "one", "none"];
    for q in 1..=4 {
        for row in axes {
            for col in axes {
                let direct = matches!(row, "same" | "diff") && matches!(col, "same" | "diff");
                cells.insert(
                    format!("compare.q{q}.{row}.{col}"),
                    if direct { "directCompare" } else { "inverseCompare" },
                );
                if !(row == "same" && col == "same") {
                    cells.insert(format!("seek.q{q}.{row}.{col}"), "relationSeek");
                }
            }
        }
    }
    for (cell, op) in [
        ("connect.point.both", "findConnection"),
        ("connect.point.one", "findConnected"),
        ("connect.point.none", "findConnectedPairs"),
        ("connect.free.both", "connectionTimes"),
        ("connect.free.one", "findConnected"),
        ("connect.free.none", "findConnectedPairs"),
    ] {
        cells.insert(cell.to_string(), op);
    }
    for b in ["value", "distribution", "trend", "aspectual"] {
        cells.insert(format!("behavior.{b}"), "characterize");
    }
    for b in ["presence", "configuration", "pairs", "config_trend"] {
        cells.insert(format!("structural.{b}"), "structuralCharacterize");
    }
    cells
}

fn matrix_coverage() -> String {
    let g = network();
    let cfg = EngineConfig::default();
    let table = expected_cells();
    let mut covered: BTreeMap<&str, usize> = BTreeMap::new();
    let entries = queries();
    for e in &entries {
        let cell = e.cell.as_deref().unwrap_or_else(|| panic!("untagged query on line {}", e.line));
        let q = parse(&e.source).unwrap_or_else(|err| panic!("{cell}: {err}"));
        let p = plan(&q, &g, &cfg).unwrap_or_else(|err| panic!("{cell}: {err}"));
        p.execute(&g, &cfg).unwrap_or_else(|err| panic!("{cell}: {err}"));
        match table.get_key_value(cell) {
            Some((k, op)) => {
                assert_eq!(p.op(), *op, "{cell} plans to {} instead of {op}", p.op());
                *covered.entry(k.as_str()).or_default() += 1;
            }
            None => assert!(cell.starts_with("extra."), "cell {cell} is not in the matrix"),
        }
    }
    let missing: Vec<&String> = table.keys().filter(|c| !covered.contains_key(c.as_str())).collect();
    assert!(missing.is_empty(), "uncovered cells: {missing:?}");
    format!("{} cells covered by {} queries", table.len(), entries.len())
}

// ---- 2. oracle equivalence

const PREDICATES: [(&str, &str, f64); 4] = [("w", "=", 2.0), ("w", ">=", 3.0), ("x", "<", 4.5), ("x", ">", 7.0)];

fn holds(op: &str, v: f64, c: f64) -> bool {
    match op {
        "=" => v == c,
        ">=" => v >= c,
        "<" => v < c,
        ">" => v > c,
        _ => unreachable!(),
    }
}

fn oracle_inverse_lookup(g: &TemporalGraph, m: &Model) -> usize {
    let last = m.times - 1;
    let mid = m.times / 2;
    let spans = [
        ("DURING ALL".to_string(), 0, last),
        (format!("AT t={mid}"), mid, mid),
        (format!("DURING [{}, {}]", last.min(1), last.min(3)), last.min(1), last.min(3)),
    ];
    let mut n = 0;
    for (attr, op, c) in PREDICATES {
        for (family, prefix) in [("IN NODES", "node:"), ("IN EDGES", "edge:"), ("", "")] {
            for (time, a, b) in &spans {
                let fixed = time.starts_with("AT").then_some(*a);
                let select = if fixed.is_some() { "g" } else { "t, g" };
                let q = format!("FIND {select} WHERE {attr} {op} {c} {family} {time}");
                let got = hits_tg(&bindings(g, &q), fixed);
                let mut want = BTreeSet::new();
                for e in m.elements().into_iter().filter(|e| e.starts_with(prefix)) {
                    for t in *a..=*b {
                        if m.value(&e, attr, t).is_some_and(|v| holds(op, v, c)) {
                            want.insert((t, e.clone()));
                        }
                    }
                }
                n += want.len();
                check_sets(&q, got, want);
            }
        }
    }
    n
}

const CLASSES: [TrendClass; 7] = [
    TrendClass::Increasing,
    TrendClass::Decreasing,
    TrendClass::Constant,
    TrendClass::Peak,
    TrendClass::Trough,
    TrendClass::Fluctuating,
    TrendClass::Degenerate,
];

fn oracle_pattern_search(g: &TemporalGraph, m: &Model) -> usize {
    let eps = EngineConfig::default().patterns.slope_epsilon;
    let last = m.times - 1;
    let mut n = 0;
    for attr in ["w", "x"] {
        // classes of every node over every window, by brute force
        let mut class: BTreeMap<(usize, usize, String), TrendClass> = BTreeMap::new();
        for a in 0..m.times {
            for b in a..m.times {
                for (i, id) in m.nodes.iter().enumerate() {
                    if (a..=b).any(|t| m.node_alive[i][t]) {
                        let c = classify_trend(&m.samples(&format!("node:{id}"), attr, a, b), eps).class;
                        class.insert((a, b, format!("node:{id}")), c);
                    }
                }
            }
        }
        for c in CLASSES {
            for (a, b) in [(0, last), (last / 3, last)] {
                let q = format!("SEARCH TREND {} ON {attr} OVER ?g IN NODES DURING [{a}, {b}]", c.name());
                let got: BTreeSet<String> = bindings(g, &q).iter().map(|h| s(&h["graph"])).collect();
                let want: BTreeSet<String> =
                    class.iter().filter(|((x, y, _), k)| (*x, *y) == (a, b) && **k == c).map(|(k, _)| k.2.clone()).collect();
                n += want.len();
                check_sets(&q, got, want);
            }
            let q = format!("SEARCH TREND {} ON {attr} OVER ?g IN NODES DURING ?T MINLEN 2", c.name());
            let got: BTreeSet<(usize, usize, String)> = bindings(g, &q)
                .iter()
                .map(|h| (u(&h["time"][0]), u(&h["time"][1]), s(&h["graph"])))
                .collect();
            let want: BTreeSet<(usize, usize, String)> =
                class.iter().filter(|((x, y, _), k)| y > x && **k == c).map(|(k, _)| k.clone()).collect();
            n += want.len();
            check_sets(&q, got, want);
        }
    }
    n
}

fn oracle_relation_seek(g: &TemporalGraph, m: &Model) -> usize {
    let k = m.times / 2;
    let adjacent = |a: usize, b: usize| m.node_alive[a][k] && m.node_alive[b][k] && m.step(a, k, Direction::Any, &|_| true).contains(&b);
    let mut n = 0;
    for attr in ["w", "x"] {
        let base = format!("SEEK VALUE {attr} OF ?g1 IN NODES AT ?t1, VALUE {attr} OF ?g2 IN NODES AT ?t2 WHERE VALUE <");
        let variants: [(String, &dyn Fn(usize, usize, usize, usize) -> bool); 3] = [
            (base.clone(), &|_, _, _, _| true),
            (format!("{base} AND POINT BEFORE"), &|t1, _, t2, _| t1 < t2),
            (format!("{base} AND STRUCT ADJACENT AT t={k}"), &|_, a, _, b| adjacent(a, b)),
        ];
        for (q, aux) in variants {
            let got: BTreeSet<(usize, String, usize, String)> = bindings(g, &q)
                .iter()
                .map(|h| (u(&h["left"]["time"]), s(&h["left"]["graph"]), u(&h["right"]["time"]), s(&h["right"]["graph"])))
                .collect();
            let mut want = BTreeSet::new();
            for (a, ia) in m.nodes.iter().enumerate() {
                for (b, ib) in m.nodes.iter().enumerate() {
                    for t1 in 0..m.times {
                        for t2 in 0..m.times {
                            let (ea, eb) = (format!("node:{ia}"), format!("node:{ib}"));
                            let (Some(x), Some(y)) = (m.value(&ea, attr, t1), m.value(&eb, attr, t2)) else { continue };
                            if x < y && aux(t1, a, t2, b) {
                                want.insert((t1, ea, t2, eb));
                            }
                        }
                    }
                }
            }
            n += want.len();
            check_sets(&q, got, want);
        }
    }
    n
}

const SPECS: [(&str, Option<usize>, Direction, bool); 6] = [
    ("ADJACENT", Some(1), Direction::Any, false),
    ("PATH", None, Direction::Any, false),
    ("PATH <= 2", Some(2), Direction::Any, false),
    ("PATH DIR OUT", None, Direction::Out, false),
    ("ADJACENT DIR IN", Some(1), Direction::In, false),
    ("ADJACENT VIA w >= 2", Some(1), Direction::Any, true),
];

fn oracle_pairs(g: &TemporalGraph, m: &Model) -> usize {
    let mut n = 0;
    for (spec, limit, dir, filtered) in SPECS {
        let q = format!("PAIRS({spec})");
        let got: BTreeSet<(usize, String, String, usize)> = bindings(g, &q)
            .iter()
            .map(|h| {
                let (a, b) = (s(&h["source"]), s(&h["target"]));
                let (a, b) = if dir == Direction::Any && b < a { (b, a) } else { (a, b) };
                (u(&h["time"]), a, b, u(&h["distance"]))
            })
            .collect();
        let mut want = BTreeSet::new();
        for t in 0..m.times {
            let via = |e: &ModelEdge| !filtered || m.value(&e.elem, "w", t).is_some_and(|v| v >= 2.0);
            for a in 0..m.nodes.len() {
                for (b, d) in m.bfs(a, t, dir, limit, &via).into_iter().enumerate() {
                    let Some(d) = d.filter(|_| a != b) else { continue };
                    let (x, y) = (format!("node:{}", m.nodes[a]), format!("node:{}", m.nodes[b]));
                    let (x, y) = if dir == Direction::Any && y < x { (y, x) } else { (x, y) };
                    want.insert((t, x, y, d));
                }
            }
        }
        n += want.len();
        check_sets(&q, got, want);
    }
    n
}

fn oracle_connection_times(g: &TemporalGraph, m: &Model) -> usize {
    let mut n = 0;
    for (spec, limit, dir, _) in SPECS.into_iter().filter(|s| !s.3) {
        for a in 0..m.nodes.len() {
            for b in 0..m.nodes.len() {
                if a == b || (dir == Direction::Any && b < a) {
                    continue;
                }
                let q = format!("TIMES WHERE CONNECTED(node:{}, node:{}, {spec})", m.nodes[a], m.nodes[b]);
                let got: BTreeSet<usize> = bindings(g, &q).iter().map(|h| u(&h["time"])).collect();
                let want: BTreeSet<usize> = (0..m.times)
                    .filter(|&t| m.node_alive[b][t] && m.bfs(a, t, dir, limit, &|_| true)[b].is_some())
                    .collect();
                n += want.len();
                check_sets(&q, got, want);
            }
        }
    }
    n
}

fn oracle_equivalence() -> String {
    let mut counts = [0usize; 5];
    for seed in 0..SEEDS {
        let (g, m) = fixture(seed);
        let ctx = |name: &str| format!("seed {seed} {name}");
        let run = |name: &str, f: &dyn Fn() -> usize| {
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| panic!("{}: {}", ctx(name), panic_text(&e)))
        };
        counts[0] += run("inverseLookup", &|| oracle_inverse_lookup(&g, &m));
        counts[1] += run("patternSearch", &|| oracle_pattern_search(&g, &m));
        counts[2] += run("relationSeek", &|| oracle_relation_seek(&g, &m));
        counts[3] += run("findConnectedPairs", &|| oracle_pairs(&g, &m));
        counts[4] += run("connectionTimes", &|| oracle_connection_times(&g, &m));
    }
    format!(
        "{SEEDS} graphs; hits lookup={} search={} seek={} pairs={} times={}",
        counts[0], counts[1], counts[2], counts[3], counts[4]
    )
}

// ---- 3. lookup duality

fn lookup_duality() -> String {
    let mut checked = 0;
    for seed in 0..SEEDS {
        let (g, m) = fixture(seed);
        let mut by_value: BTreeMap<(String, String), BTreeSet<(usize, String)>> = BTreeMap::new();
        for e in m.elements() {
            for attr in ["w", "x"] {
                for t in 0..m.times {
                    if m.value(&e, attr, t).is_none() {
                        continue;
                    }
                    let b = bindings(&g, &format!("LOOKUP {attr} OF {e} AT t={t}"));
                    let v = b[0]["value"].as_f64().unwrap_or_else(|| panic!("seed {seed}: {e}.{attr}@{t} = {}", b[0]));
                    by_value.entry((attr.to_string(), v.to_string())).or_default().insert((t, e.clone()));
                    checked += 1;
                }
            }
        }
        for ((attr, v), refs) in by_value {
            let got = hits_tg(&bindings(&g, &format!("FIND t, g WHERE {attr} = {v} DURING ALL")), None);
            check_sets(&format!("seed {seed}: {attr} = {v}"), got, refs);
        }
    }
    format!("{checked} defined references, 0 mismatches")
}

// ---- 4. characterize/search duality

fn score_is_one(h: &Value) -> bool {
    h["score"].as_f64() == Some(1.0)
}

fn characterize_search_duality() -> String {
    let (mut q2, mut q3) = (0, 0);
    for seed in 0..SEEDS {
        let (g, m) = fixture(seed);
        for attr in ["w", "x"] {
            for name in m.subsets.keys() {
                for t in 0..m.times {
                    let c = format!("CHARACTERIZE DIST {attr} OF subset:{name} AT t={t}");
                    let Ok(env) = tgq_dsl::run(&c, &g, &EngineConfig::default()) else { continue };
                    let p = &serde_json::to_value(env).unwrap()["bindings"][0]["pattern"];
                    let num = |k: &str| p[k].as_f64().unwrap().to_string();
                    let hist: Vec<String> = p["histogram"].as_array().unwrap().iter().map(|h| h.as_f64().unwrap().to_string()).collect();
                    let shape = format!(
                        "DIST(mean={}, stddev={}, min={}, max={}, hist=[{}])",
                        num("mean"),
                        num("stddev"),
                        num("min"),
                        num("max"),
                        hist.join(", ")
                    );
                    let over_g = format!("SEARCH {shape} ON {attr} OVER ?G IN SUBSETS AT t={t}");
                    assert!(
                        bindings(&g, &over_g).iter().any(|h| h["graph"]["subset"] == name.as_str() && score_is_one(h)),
                        "seed {seed}: `{over_g}` misses {name}"
                    );
                    let over_t = format!("SEARCH {shape} ON {attr} OVER subset:{name} AT ?t");
                    assert!(
                        bindings(&g, &over_t).iter().any(|h| h["time"] == t && score_is_one(h)),
                        "seed {seed}: `{over_t}` misses t={t}"
                    );
                    q2 += 1;
                }
            }
        }
        let mut searches: BTreeMap<String, Vec<Value>> = BTreeMap::new();
        for id in &m.nodes {
            for a in 0..m.times {
                for b in a..m.times {
                    let c = format!("CHARACTERIZE TREND w OF node:{id} DURING [{a}, {b}]");
                    let Ok(env) = tgq_dsl::run(&c, &g, &EngineConfig::default()) else { continue };
                    let class = s(&serde_json::to_value(env).unwrap()["bindings"][0]["pattern"]["class"]);
                    let q = format!("SEARCH TREND {class} ON w OVER ?g IN NODES DURING [{a}, {b}]");
                    let hits = searches.entry(q.clone()).or_insert_with(|| bindings(&g, &q));
                    assert!(
                        hits.iter().any(|h| h["graph"] == format!("node:{id}") && score_is_one(h)),
                        "seed {seed}: `{q}` misses node:{id}"
                    );
                    q3 += 1;
                }
            }
        }
    }
    format!("{q2} distribution scopes, {q3} trend scopes")
}

// ---- 5. interval relations

/// Each relation by its own endpoint conditions; these are mutually
/// exclusive for inclusive intervals including points.
fn allen_holds(r: AllenRelation, a: TimeInterval, b: TimeInterval) -> bool {
    use AllenRelation::*;
    let (as_, ae, bs, be) = (a.start, a.end, b.start, b.end);
    match r {
        Before => ae < bs,
        After => as_ > be,
        Meets => ae == bs && as_ < bs && ae < be,
        MetBy => as_ == be && as_ > bs && ae > be,
        Overlaps => as_ < bs && ae > bs && ae < be,
        OverlappedBy => bs < as_ && be > as_ && be < ae,
        Starts => as_ == bs && ae < be,
        StartedBy => as_ == bs && ae > be,
        During => as_ > bs && ae < be,
        Contains => as_ < bs && ae > be,
        Finishes => ae == be && as_ > bs,
        FinishedBy => ae == be && as_ < bs,
        Equals => as_ == bs && ae == be,
    }
}

fn allen_algebra() -> String {
    let mut intervals = Vec::new();
    for start in 0..10 {
        for end in start..10 {
            intervals.push(TimeInterval { start, end });
        }
    }
    let mut pairs = 0;
    for &a in &intervals {
        for &b in &intervals {
            let holding: Vec<AllenRelation> = AllenRelation::ALL.into_iter().filter(|&r| allen_holds(r, a, b)).collect();
            assert_eq!(holding.len(), 1, "{a:?} {b:?}: {holding:?}");
            let r = AllenRelation::between(a, b);
            assert_eq!(r, holding[0], "{a:?} {b:?}");
            assert_eq!(AllenRelation::between(b, a), r.inverse(), "{a:?} {b:?}");
            assert_eq!(r.inverse().inverse(), r);
            pairs += 1;
        }
    }
    format!("{pairs} interval pairs, 0 violations")
}

// ---- 6. structural oracles

fn floyd_warshall(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<Option<usize>>> {
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(a, b) in arcs {
        d[a][b] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| x + y < c) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

fn bits_class(bits: &[bool]) -> PresenceClass {
    let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    let ones = text.trim_start_matches('0');
    let zeros = text.trim_start_matches('1');
    if !text.contains('0') {
        PresenceClass::Always
    } else if !text.contains('1') {
        PresenceClass::Never
    } else if !ones.contains('0') {
        PresenceClass::Appearing
    } else if !zeros.contains('1') {
        PresenceClass::Disappearing
    } else {
        PresenceClass::Intermittent
    }
}

fn structural_oracles() -> String {
    let params = FixtureParams {
        max_nodes: 30,
        max_times: 6,
        ..FixtureParams::default()
    };
    let mut snapshots = 0;
    for seed in 0..SEEDS {
        let g = random_graph(seed, params).unwrap();
        let m = Model::new(&random_records(seed, params));
        let n = m.nodes.len();
        for t in 0..m.times {
            for dir in [Direction::Any, Direction::Out] {
                let mut arcs = Vec::new();
                for e in m.edges.iter().filter(|e| e.alive[t]) {
                    if e.directed && dir == Direction::Out {
                        arcs.push((e.src, e.dst));
                    } else {
                        arcs.extend([(e.src, e.dst), (e.dst, e.src)]);
                    }
                }
                let d = floyd_warshall(n, &arcs);
                let mut want = BTreeSet::new();
                for a in 0..n {
                    for b in 0..n {
                        if a != b && m.node_alive[a][t] && m.node_alive[b][t] && (dir != Direction::Any || a < b) {
                            if let Some(x) = d[a][b] {
                                want.insert((m.nodes[a].clone(), m.nodes[b].clone(), x));
                            }
                        }
                    }
                }
                let spec = ConnectionSpec {
                    direction: dir,
                    ..ConnectionSpec::path()
                };
                let got: BTreeSet<(String, String, usize)> = find_connected_pairs(&g, t, &spec)
                    .unwrap()
                    .into_iter()
                    .map(|(a, b, x)| {
                        let (ia, ib) = (m.nodes.iter().position(|v| *v == a).unwrap(), m.nodes.iter().position(|v| *v == b).unwrap());
                        if dir == Direction::Any && ib < ia { (b, a, x) } else { (a, b, x) }
                    })
                    .collect();
                check_sets(&format!("seed {seed} t={t} {dir:?}"), got, want);
            }
            snapshots += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut triangles = 0;
    for _ in 0..500 {
        let n = rng.gen_range(0..=12);
        let p = rng.gen_range(0.1..0.9);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let has = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
        let mut want = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if has(a, b) && has(b, c) && has(a, c) {
                        want.insert((a, b, c));
                    }
                }
            }
        }
        let found = SimpleGraph::from_edges(n, &edges).triangles();
        assert_eq!(found.len(), want.len());
        let got: BTreeSet<(usize, usize, usize)> = found
            .into_iter()
            .map(|(a, b, c)| {
                let mut v = [a, b, c];
                v.sort_unstable();
                (v[0], v[1], v[2])
            })
            .collect();
        triangles += want.len();
        check_sets("triangles", got, want);
    }

    let mut strings = 0;
    for len in 0..=6 {
        for mask in 0u32..(1 << len) {
            let bits: Vec<bool> = (0..len).map(|i| mask >> i & 1 == 1).collect();
            assert_eq!(PresenceClass::of_bits(&bits), bits_class(&bits), "{bits:?}");
            strings += 1;
        }
    }
    format!("{snapshots} snapshots, {triangles} triangles, {strings} presence strings")
}

// ---- 7. numeric properties

fn random_series(rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let n = rng.gen_range(1..=12);
    let integral = rng.gen_bool(0.5);
    let mut t = 0.0;
    (0..n)
        .map(|_| {
            t += rng.gen_range(1..=2) as f64;
            let v = if integral { rng.gen_range(0..5) as f64 } else { rng.gen_range(-50.0..50.0) };
            (t, v)
        })
        .collect()
}

fn numeric_properties() -> String {
    let eps = EngineConfig::default().patterns.slope_epsilon;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..1000 {
        let xs = random_series(&mut rng);
        let alpha = rng.gen_range(0.01..100.0);
        let beta = rng.gen_range(-1000.0..1000.0);
        let ys: Vec<(f64, f64)> = xs.iter().map(|&(t, v)| (t, alpha * v + beta)).collect();
        let (a, b) = (classify_trend(&xs, eps), classify_trend(&ys, eps));
        assert_eq!(a.class, b.class, "series {i}: {xs:?} scaled by {alpha}, {beta}");
        assert!((a.slope - b.slope).abs() <= 1e-9, "series {i}: slope {} vs {}", a.slope, b.slope);
        match (a.extremum_pos, b.extremum_pos) {
            (Some(p), Some(q)) => assert!((p - q).abs() <= 1e-9),
            (p, q) => assert_eq!(p, q),
        }
    }
    for i in 0..1000 {
        let n = rng.gen_range(3..=30);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-100.0..100.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-100.0..100.0)).collect();
        let r = pearson(&x, &y).unwrap();
        assert!(r.abs() <= 1.0 + 1e-9, "pair {i}: r = {r}");
        let (alpha, beta) = (rng.gen_range(0.01..100.0), rng.gen_range(-100.0..100.0));
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let x2: Vec<f64> = x.iter().map(|v| sign * alpha * v + beta).collect();
        let r2 = pearson(&x2, &y).unwrap();
        assert!((r2 - sign * r).abs() <= 1e-9, "pair {i}: {r} vs {r2}");
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() <= 1e-9);

        let lag = rng.gen_range(-5i64..=5);
        let series: BTreeMap<usize, f64> = x.iter().enumerate().map(|(t, v)| (t + 5, *v)).collect();
        let shifted: BTreeMap<usize, f64> = series.iter().map(|(t, v)| ((*t as i64 + lag) as usize, *v)).collect();
        let (l, r) = lagged_pairs(&series, &shifted, lag);
        assert_eq!(l.len(), n);
        assert!((pearson(&l, &r).unwrap() - 1.0).abs() <= 1e-9, "lag {lag}");
    }
    "1000 trend series, 1000 correlation pairs".to_string()
}

// ---- 8. parser robustness

fn parser_robustness() -> String {
    let entries = queries();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let alphabet: Vec<u8> = b"LOOKUP FIND SEARCH COMPARE SEEK ?g ?T node:a t=2 [0, 3] ( ) { } , = < > \" -1.5e3 AND OR NOT\n".to_vec();
    for i in 0..10_000 {
        let len = rng.gen_range(0..120);
        let bytes: Vec<u8> = match i % 3 {
            0 => (0..len).map(|_| rng.gen()).collect(),
            1 => (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect(),
            _ => {
                let mut b = entries[rng.gen_range(0..entries.len())].source.clone().into_bytes();
                for _ in 0..rng.gen_range(1..4) {
                    let at = rng.gen_range(0..=b.len());
                    match rng.gen_range(0..3) {
                        0 => b.insert(at, rng.gen()),
                        1 if at < b.len() => {
                            b.remove(at);
                        }
                        _ => b.truncate(at),
                    }
                }
                b
            }
        };
        if catch_unwind(|| parse_bytes(&bytes)).is_err() {
            panic!("parser panicked on {:?}", String::from_utf8_lossy(&bytes));
        }
    }
    for e in &entries {
        let q = parse(&e.source).unwrap();
        let text = q.to_string();
        let back = parse(&text).unwrap_or_else(|err| panic!("`{text}`: {err}"));
        assert_eq!(back, q, "line {}", e.line);
        assert_eq!(back.to_string(), text);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..1000 {
        let q = gen::query(&mut rng);
        let text = q.to_string();
        let back = parse(&text).unwrap_or_else(|err| panic!("`{text}`: {err}"));
        assert_eq!(back, q, "`{text}`");
        assert_eq!(back.to_string(), text);
    }
    format!("10000 byte strings, {} corpus and 1000 generated round trips", entries.len())
}

// ---- 9. determinism

fn corpus_run() -> Vec<String> {
    let dir = corpus_dir();
    let o = Command::new(env!("CARGO_BIN_EXE_tgq"))
        .arg("corpus")
        .arg(dir.join("network.jsonl"))
        .arg(dir.join("queries.tgq"))
        .env_remove("TGQ_CONFIG")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("elapsed_ms");
            serde_json::to_string(&v).unwrap()
        })
        .collect()
}

fn determinism() -> String {
    let a = corpus_run();
    let b = corpus_run();
    assert_eq!(a.len(), queries().len());
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        assert_eq!(x, y, "envelope {i} differs");
    }
    format!("{} envelopes identical", a.len())
}

// ---- harness

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, Option<u64>, fn() -> String); 9] = [
        ("matrix coverage", Some(30), matrix_coverage),
        ("oracle equivalence", Some(60), oracle_equivalence),
        ("lookup duality", None, lookup_duality),
        ("characterize/search duality", None, characterize_search_duality),
        ("interval algebra", None, allen_algebra),
        ("structural oracles", None, structural_oracles),
        ("numeric properties", None, numeric_properties),
        ("parser robustness", None, parser_robustness),
        ("determinism", None, determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(f);
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(_) if budget.is_some_and(|b| took > Duration::from_secs(b)) => {
                Err(format!("took {:.1}s, limit {}s", took.as_secs_f64(), budget.unwrap()))
            }
            Ok(detail) => Ok(detail),
            Err(e) => Err(panic_text(&e)),
        };
        match verdict {
            Ok(detail) => println!("PASS {} {name}: {detail} ({:.2}s)", i + 1, took.as_secs_f64()),
            Err(why) => {
                println!("FAIL {} {name}: {why} ({:.2}s)", i + 1, took.as_secs_f64());
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
