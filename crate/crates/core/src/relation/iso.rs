//! Canonical labelling of small undirected graphs for isomorphism tests.

use crate::structural::SimpleGraph;

/// Largest node count for which an exact isomorphism test is attempted.
pub const EXACT_LIMIT: usize = 10;

/// Canonical adjacency code: the lexicographically smallest upper-triangle
/// bit string over orderings that list nodes by non-increasing degree.
/// Two graphs are isomorphic exactly when their codes are equal.
pub fn canonical_code(g: &SimpleGraph) -> Vec<u8> {
    let n = g.node_count();
    let degree: Vec<usize> = (0..n).map(|v| g.adjacency[v].len()).collect();
    let mut slots = degree.clone();
    slots.sort_unstable_by(|a, b| b.cmp(a));
    let mut search = Search {
        g,
        degree,
        slots,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        code: Vec::with_capacity(n * n.saturating_sub(1) / 2),
        best: None,
    };
    search.extend(false);
    let mut code = search.best.unwrap_or_default();
    code.insert(0, n as u8);
    code
}

struct Search<'a> {
    g: &'a SimpleGraph,
    degree: Vec<usize>,
    slots: Vec<usize>,
    order: Vec<usize>,
    used: Vec<bool>,
    code: Vec<u8>,
    best: Option<Vec<u8>>,
}

impl Search<'_> {
    /// `ahead` is true once the current prefix is already smaller than the
    /// best code's prefix, so no further comparison is needed.
    fn extend(&mut self, ahead: bool) {
        let pos = self.order.len();
        if pos == self.slots.len() {
            self.best = Some(self.code.clone());
            return;
        }
        for v in 0..self.slots.len() {
            if self.used[v] || self.degree[v] != self.slots[pos] {
                continue;
            }
            let mark = self.code.len();
            for &u in &self.order {
                self.code.push(u8::from(self.g.has_edge(u, v)));
            }
            let state = if ahead {
                Some(true)
            } else {
                match &self.best {
                    None => Some(true),
                    Some(best) => match self.code[mark..].cmp(&best[mark..self.code.len()]) {
                        std::cmp::Ordering::Less => Some(true),
                        std::cmp::Ordering::Equal => Some(false),
                        std::cmp::Ordering::Greater => None,
                    },
                }
            };
            if let Some(next_ahead) = state {
                self.used[v] = true;
                self.order.push(v);
                self.extend(next_ahead);
                self.order.pop();
                self.used[v] = false;
            }
            self.code.truncate(mark);
        }
    }
}

/// Exact isomorphism test for graphs up to [`EXACT_LIMIT`] nodes.
pub fn isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    if a.node_count() != b.node_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = a.adjacency.iter().map(|s| s.len()).collect();
    let mut db: Vec<usize> = b.adjacency.iter().map(|s| s.len()).collect();
    da.sort_unstable();
    db.sort_unstable();
    da == db && canonical_code(a) == canonical_code(b)
}
