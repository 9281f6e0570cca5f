use serde::{Deserialize, Serialize};

use super::TemporalGraph;

/// Traversal direction. Undirected edges are traversable both ways under
/// every direction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    #[default]
    Any,
    Out,
    In,
}

/// The static graph alive at one time point.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub time: usize,
    nodes: Vec<usize>,
    edges: Vec<usize>,
    alive: Vec<bool>,
    out_adj: Vec<Vec<(usize, usize)>>,
    in_adj: Vec<Vec<(usize, usize)>>,
}

impl Snapshot {
    pub(crate) fn build(graph: &TemporalGraph, t: usize) -> Snapshot {
        let n = graph.nodes.len();
        let mut alive = vec![false; n];
        for &i in &graph.alive_nodes[t] {
            alive[i] = true;
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &e in &graph.alive_edges[t] {
            let edge = &graph.edges[e];
            let (s, d) = (edge.source_idx, edge.target_idx);
            out_adj[s].push((d, e));
            in_adj[d].push((s, e));
            if !edge.directed {
                out_adj[d].push((s, e));
                in_adj[s].push((d, e));
            }
        }
        Snapshot {
            time: t,
            nodes: graph.alive_nodes[t].clone(),
            edges: graph.alive_edges[t].clone(),
            alive,
            out_adj,
            in_adj,
        }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains_node(&self, node: usize) -> bool {
        self.alive.get(node).copied().unwrap_or(false)
    }

    /// `(neighbour, edge)` pairs reachable from `node` in one step.
    pub fn neighbors(&self, node: usize, direction: Direction) -> Vec<(usize, usize)> {
        match direction {
            Direction::Out => self.out_adj[node].clone(),
            Direction::In => self.in_adj[node].clone(),
            Direction::Any => {
                let mut all: Vec<(usize, usize)> = self.out_adj[node]
                    .iter()
                    .chain(self.in_adj[node].iter())
                    .copied()
                    .collect();
                all.sort_unstable();
                all.dedup();
                all
            }
        }
    }

    /// Number of distinct alive edges incident to `node` in the given direction.
    pub fn degree(&self, node: usize, direction: Direction) -> usize {
        let mut edges: Vec<usize> = match direction {
            Direction::Out => self.out_adj[node].iter().map(|&(_, e)| e).collect(),
            Direction::In => self.in_adj[node].iter().map(|&(_, e)| e).collect(),
            Direction::Any => self.out_adj[node]
                .iter()
                .chain(self.in_adj[node].iter())
                .map(|&(_, e)| e)
                .collect(),
        };
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }
}
