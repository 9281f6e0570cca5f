//! Connectivity queries over snapshots and structural characterisation of
//! node pairs and subsets.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Direction, ElementRef, Snapshot, TemporalGraph};
use crate::pattern::{
    classify_trend, ConfigMetric, ConfigurationPattern, ConfigurationTrendPattern, Motif,
    PairsAggregatePattern, PresenceClass, PresencePattern,
};
use crate::predicate::Predicate;
use crate::time::TimeInterval;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConnectionMode {
    Adjacent,
    #[default]
    Path,
}

/// What "connected" means for a structural query.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConnectionSpec {
    pub mode: ConnectionMode,
    pub max_distance: Option<usize>,
    pub direction: Direction,
    /// Only edges satisfying this predicate at the query time are traversed.
    pub edge_predicate: Option<Predicate>,
}

impl ConnectionSpec {
    pub fn adjacent() -> Self {
        ConnectionSpec {
            mode: ConnectionMode::Adjacent,
            ..Default::default()
        }
    }

    pub fn path() -> Self {
        ConnectionSpec::default()
    }

    fn depth_limit(&self) -> Option<usize> {
        match self.mode {
            ConnectionMode::Adjacent => Some(1),
            ConnectionMode::Path => self.max_distance,
        }
    }

    pub fn check(&self, graph: &TemporalGraph) -> Result<()> {
        if let Some(p) = &self.edge_predicate {
            p.check(graph)?;
        }
        Ok(())
    }
}

/// Breadth-first search result: hop distance and predecessor per node.
pub struct Reach {
    pub distance: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
}

impl Reach {
    /// Node indices from a source to `target`, or `None` if unreached.
    pub fn path_to(&self, target: usize) -> Option<Vec<usize>> {
        self.distance[target]?;
        let mut path = vec![target];
        let mut cur = target;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Multi-source BFS over the alive part of a snapshot.
pub fn reach(
    snap: &Snapshot,
    node_count: usize,
    sources: &[usize],
    direction: Direction,
    max_depth: Option<usize>,
    edge_ok: &dyn Fn(usize) -> Result<bool>,
) -> Result<Reach> {
    let mut distance = vec![None; node_count];
    let mut parent = vec![None; node_count];
    let mut queue = VecDeque::new();
    for &s in sources {
        if snap.contains_node(s) && distance[s].is_none() {
            distance[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = distance[u].expect("queued nodes have a distance");
        if max_depth.is_some_and(|m| d >= m) {
            continue;
        }
        for (v, e) in snap.neighbors(u, direction) {
            if distance[v].is_none() && edge_ok(e)? {
                distance[v] = Some(d + 1);
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    Ok(Reach { distance, parent })
}

fn edge_filter<'a>(
    graph: &'a TemporalGraph,
    spec: &'a ConnectionSpec,
    t: usize,
) -> impl Fn(usize) -> Result<bool> + 'a {
    move |e| match &spec.edge_predicate {
        None => Ok(true),
        Some(p) => {
            let elem = ElementRef::Edge(graph.edges()[e].id.clone());
            Ok(p.eval(graph, t, &elem)? == Some(true))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connection {
    pub connected: bool,
    pub distance: Option<usize>,
    pub path: Vec<String>,
}

fn alive_node(graph: &TemporalGraph, id: &str, t: usize) -> Result<usize> {
    let i = graph.require_node(id)?;
    if !graph.node_exists(i, t) {
        return Err(Error::AbsentElement {
            element: format!("node:{id}"),
            time: graph.domain().label(t).to_string(),
        });
    }
    Ok(i)
}

/// Whether `b` is reachable from `a` at `t` under `spec`, with a shortest path.
pub fn find_connection(
    graph: &TemporalGraph,
    a: &str,
    b: &str,
    t: usize,
    spec: &ConnectionSpec,
) -> Result<Connection> {
    spec.check(graph)?;
    let ai = alive_node(graph, a, t)?;
    let bi = alive_node(graph, b, t)?;
    let snap = graph.snapshot(t);
    let filter = edge_filter(graph, spec, t);
    let r = reach(snap, graph.nodes().len(), &[ai], spec.direction, spec.depth_limit(), &filter)?;
    let path = r.path_to(bi).filter(|_| ai != bi || spec.mode == ConnectionMode::Path);
    Ok(match path {
        Some(p) => Connection {
            connected: true,
            distance: Some(p.len() - 1),
            path: p.iter().map(|&i| graph.nodes()[i].id.clone()).collect(),
        },
        None => Connection {
            connected: false,
            distance: None,
            path: Vec::new(),
        },
    })
}

/// Nodes connected to `a` at `t` (excluding `a`), with hop distance, by id.
pub fn find_connected(
    graph: &TemporalGraph,
    a: &str,
    t: usize,
    spec: &ConnectionSpec,
) -> Result<Vec<(String, usize)>> {
    spec.check(graph)?;
    let ai = alive_node(graph, a, t)?;
    let snap = graph.snapshot(t);
    let filter = edge_filter(graph, spec, t);
    let r = reach(snap, graph.nodes().len(), &[ai], spec.direction, spec.depth_limit(), &filter)?;
    Ok(r.distance
        .iter()
        .enumerate()
        .filter(|&(i, d)| i != ai && d.is_some())
        .map(|(i, d)| (graph.nodes()[i].id.clone(), d.expect("filtered")))
        .collect())
}

/// All connected node pairs at `t`. Pairs are unordered (`a < b`) for
/// `Direction::Any` and ordered source-to-target otherwise.
pub fn find_connected_pairs(
    graph: &TemporalGraph,
    t: usize,
    spec: &ConnectionSpec,
) -> Result<Vec<(String, String, usize)>> {
    spec.check(graph)?;
    let snap = graph.snapshot(t);
    let filter = edge_filter(graph, spec, t);
    let mut out = Vec::new();
    for &a in snap.nodes() {
        let r = reach(snap, graph.nodes().len(), &[a], spec.direction, spec.depth_limit(), &filter)?;
        for &b in snap.nodes() {
            if a == b || (spec.direction == Direction::Any && b < a) {
                continue;
            }
            if let Some(d) = r.distance[b] {
                out.push((graph.nodes()[a].id.clone(), graph.nodes()[b].id.clone(), d));
            }
        }
    }
    Ok(out)
}

/// Time points (within `within`, default all) at which `a` and `b` both
/// exist and are connected.
pub fn connection_times(
    graph: &TemporalGraph,
    a: &str,
    b: &str,
    spec: &ConnectionSpec,
    within: Option<TimeInterval>,
) -> Result<Vec<usize>> {
    let ai = graph.require_node(a)?;
    let bi = graph.require_node(b)?;
    let Some(range) = within.or(graph.domain().full_interval()) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for t in range.iter() {
        if graph.node_exists(ai, t) && graph.node_exists(bi, t) && find_connection(graph, a, b, t, spec)?.connected {
            out.push(t);
        }
    }
    Ok(out)
}

/// Whether nodes `a` and `b` are joined by an alive edge at `t`.
pub fn linked(graph: &TemporalGraph, a: usize, b: usize, t: usize) -> bool {
    let snap = graph.snapshot(t);
    snap.contains_node(a) && snap.neighbors(a, Direction::Any).iter().any(|&(v, _)| v == b)
}

/// Presence bit string of the link between two nodes over an interval.
pub fn presence(graph: &TemporalGraph, a: &str, b: &str, interval: TimeInterval) -> Result<PresencePattern> {
    let ai = graph.require_node(a)?;
    let bi = graph.require_node(b)?;
    let bits: Vec<bool> = interval.iter().map(|t| linked(graph, ai, bi, t)).collect();
    Ok(PresencePattern::from_bits(&bits))
}

/// Undirected simple graph on a node subset, with local indices.
pub struct SimpleGraph {
    pub adjacency: Vec<BTreeSet<usize>>,
}

impl SimpleGraph {
    /// The subgraph of snapshot `t` induced by `nodes` (alive ones only).
    pub fn induced(graph: &TemporalGraph, t: usize, nodes: &[usize]) -> SimpleGraph {
        let snap = graph.snapshot(t);
        let alive: Vec<usize> = nodes.iter().copied().filter(|&n| snap.contains_node(n)).collect();
        let local: BTreeMap<usize, usize> = alive.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut adjacency = vec![BTreeSet::new(); alive.len()];
        for (i, &n) in alive.iter().enumerate() {
            for (v, _) in snap.neighbors(n, Direction::Any) {
                if let Some(&j) = local.get(&v) {
                    if i != j {
                        adjacency[i].insert(j);
                        adjacency[j].insert(i);
                    }
                }
            }
        }
        SimpleGraph { adjacency }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
        let mut adjacency = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            if a != b {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
        }
        SimpleGraph { adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    pub fn components(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    /// Triangles as sorted triples `u < v < w`.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.node_count() {
            for &v in self.adjacency[u].range(u + 1..) {
                for &w in self.adjacency[v].range(v + 1..) {
                    if self.adjacency[u].contains(&w) {
                        out.push((u, v, w));
                    }
                }
            }
        }
        out
    }

    /// Size of the largest clique, counted up to 4.
    pub fn max_clique_capped(&self, triangles: &[(usize, usize, usize)]) -> usize {
        if self.node_count() == 0 {
            return 0;
        }
        if self.edge_count() == 0 {
            return 1;
        }
        if triangles.is_empty() {
            return 2;
        }
        let k4 = triangles.iter().any(|&(u, v, w)| {
            self.adjacency[w]
                .range(w + 1..)
                .any(|&x| self.has_edge(u, x) && self.has_edge(v, x))
        });
        if k4 {
            4
        } else {
            3
        }
    }

    pub fn motif(&self) -> Motif {
        let n = self.node_count();
        let m = self.edge_count();
        if m == 0 {
            return Motif::Empty;
        }
        if m == n * (n - 1) / 2 {
            return Motif::Clique;
        }
        let connected = self.components() == 1;
        let degrees: Vec<usize> = self.adjacency.iter().map(BTreeSet::len).collect();
        if connected && m == n - 1 && degrees.iter().filter(|&&d| d == n - 1).count() == 1 {
            return Motif::Star;
        }
        if connected && n >= 3 && degrees.iter().all(|&d| d == 2) {
            return Motif::Cycle;
        }
        if connected && m == n - 1 {
            return Motif::Tree;
        }
        Motif::Other
    }

    pub fn configuration(&self) -> ConfigurationPattern {
        let n = self.node_count();
        let m = self.edge_count();
        let triangles = self.triangles();
        let density = if n < 2 {
            0.0
        } else {
            m as f64 / (n * (n - 1) / 2) as f64
        };
        let mean_degree = if n == 0 { 0.0 } else { 2.0 * m as f64 / n as f64 };
        let metrics = BTreeMap::from([
            (ConfigMetric::Nodes, n as f64),
            (ConfigMetric::Edges, m as f64),
            (ConfigMetric::Density, density),
            (ConfigMetric::Components, self.components() as f64),
            (ConfigMetric::Triangles, triangles.len() as f64),
            (ConfigMetric::MeanDegree, mean_degree),
            (ConfigMetric::MaxClique, self.max_clique_capped(&triangles) as f64),
        ]);
        ConfigurationPattern {
            metrics,
            motif: self.motif(),
        }
    }
}

/// Configuration of the subgraph induced by `nodes` at `t`.
pub fn configuration(graph: &TemporalGraph, nodes: &[usize], t: usize) -> ConfigurationPattern {
    SimpleGraph::induced(graph, t, nodes).configuration()
}

/// Presence classes of every unordered node pair of `nodes` over `interval`.
pub fn pairs_aggregate(graph: &TemporalGraph, nodes: &[usize], interval: TimeInterval) -> Result<PairsAggregatePattern> {
    if nodes.len() < 2 {
        return Err(Error::EmptyScope("need at least two nodes to form pairs".to_string()));
    }
    let mut frequencies: BTreeMap<PresenceClass, usize> = BTreeMap::new();
    let mut total = 0;
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            let bits: Vec<bool> = interval.iter().map(|t| linked(graph, a, b, t)).collect();
            *frequencies.entry(PresenceClass::of_bits(&bits)).or_default() += 1;
            total += 1;
        }
    }
    Ok(PairsAggregatePattern { frequencies, total })
}

/// Trend of each configuration metric over the time points of `interval`
/// at which `nodes_at` yields a non-empty node set.
pub fn configuration_trend(
    graph: &TemporalGraph,
    interval: TimeInterval,
    slope_epsilon: f64,
    nodes_at: &dyn Fn(usize) -> Result<Vec<usize>>,
) -> Result<ConfigurationTrendPattern> {
    let mut series: BTreeMap<ConfigMetric, Vec<(f64, f64)>> = BTreeMap::new();
    for t in interval.iter() {
        let nodes = nodes_at(t)?;
        if nodes.is_empty() {
            continue;
        }
        for (metric, value) in configuration(graph, &nodes, t).metrics {
            series.entry(metric).or_default().push((t as f64, value));
        }
    }
    if series.is_empty() {
        return Err(Error::EmptyScope("subset is absent throughout the interval".to_string()));
    }
    Ok(ConfigurationTrendPattern {
        trends: series
            .into_iter()
            .map(|(m, s)| (m, classify_trend(&s, slope_epsilon)))
            .collect(),
    })
}
