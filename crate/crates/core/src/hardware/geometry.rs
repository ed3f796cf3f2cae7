use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{HardwareError, HardwareSpec};

/// Absolute slack for distance comparisons, in micrometres.
pub(crate) const DIST_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn on_grid(row: usize, col: usize, spacing_um: f64) -> Self {
        Position { x: col as f64 * spacing_um, y: row as f64 * spacing_um }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Undirected trap connectivity: an edge wherever two traps lie within the
/// interaction radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingGraph {
    pub num_nodes: usize,
    /// Sorted `(i, j)` pairs with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl CouplingGraph {
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

pub fn coupling_graph(spec: &HardwareSpec) -> CouplingGraph {
    let n = spec.num_traps();
    let r = spec.interaction_radius_um();
    let pos: Vec<Position> = (0..n).map(|t| spec.position(t)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if pos[i].distance(&pos[j]) <= r + DIST_EPS {
                edges.push((i, j));
            }
        }
    }
    CouplingGraph { num_nodes: n, edges }
}

/// All operands pairwise within the interaction radius.
pub fn gate_mappable(positions: &[Position], r_int_um: f64) -> bool {
    positions.iter().enumerate().all(|(i, a)| positions[i + 1..].iter().all(|b| a.distance(b) <= r_int_um + DIST_EPS))
}

/// Two entangling gates may run in parallel only if every cross pair is
/// strictly farther apart than the restriction radius.
pub fn restriction_conflict(a: &[Position], b: &[Position], r_re_um: f64) -> Result<bool, HardwareError> {
    let mut min = f64::INFINITY;
    for p in a {
        for q in b {
            let d = p.distance(q);
            if d == 0.0 {
                return Err(HardwareError::OverlappingOperands);
            }
            min = min.min(d);
        }
    }
    Ok(min <= r_re_um + DIST_EPS)
}

const UNREACHABLE: u32 = u32::MAX;

/// Precomputed trap geometry for one spec: positions, coupling adjacency,
/// hop distances and restriction neighbourhoods.
#[derive(Debug, Clone)]
pub struct Topology {
    pub spec: HardwareSpec,
    positions: Vec<Position>,
    graph: CouplingGraph,
    adj: Vec<Vec<usize>>,
    hops: Vec<u32>,
    restricted: Vec<Vec<usize>>,
}

impl Topology {
    pub fn new(spec: &HardwareSpec) -> Self {
        let n = spec.num_traps();
        let positions: Vec<Position> = (0..n).map(|t| spec.position(t)).collect();
        let graph = coupling_graph(spec);
        let adj = graph.adjacency();
        let mut hops = vec![UNREACHABLE; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = &mut hops[s * n..(s + 1) * n];
            row[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if row[v] == UNREACHABLE {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        let r_re = spec.restriction_radius_um();
        let restricted = (0..n)
            .map(|i| (0..n).filter(|&j| positions[i].distance(&positions[j]) <= r_re + DIST_EPS).collect())
            .collect();
        Topology { spec: spec.clone(), positions, graph, adj, hops, restricted }
    }

    pub fn num_traps(&self) -> usize {
        self.positions.len()
    }

    pub fn position(&self, trap: usize) -> Position {
        self.positions[trap]
    }

    pub fn positions_of(&self, traps: &[usize]) -> Vec<Position> {
        traps.iter().map(|&t| self.positions[t]).collect()
    }

    pub fn distance_um(&self, a: usize, b: usize) -> f64 {
        self.positions[a].distance(&self.positions[b])
    }

    pub fn graph(&self) -> &CouplingGraph {
        &self.graph
    }

    pub fn neighbors(&self, trap: usize) -> &[usize] {
        &self.adj[trap]
    }

    /// Shortest-path length in coupling-graph edges, `None` if disconnected.
    pub fn hops(&self, a: usize, b: usize) -> Option<u32> {
        let h = self.hops[a * self.num_traps() + b];
        (h != UNREACHABLE).then_some(h)
    }

    pub(crate) fn hops_or_max(&self, a: usize, b: usize) -> u32 {
        self.hops[a * self.num_traps() + b]
    }

    pub fn within_interaction(&self, a: usize, b: usize) -> bool {
        self.distance_um(a, b) <= self.spec.interaction_radius_um() + DIST_EPS
    }

    /// Whether a gate on these traps satisfies the interaction constraint.
    pub fn mappable(&self, traps: &[usize]) -> bool {
        traps.iter().enumerate().all(|(i, &a)| traps[i + 1..].iter().all(|&b| self.within_interaction(a, b)))
    }

    /// Traps within the restriction radius of `trap` (including itself).
    pub fn restricted_by(&self, trap: usize) -> &[usize] {
        &self.restricted[trap]
    }

    /// Neighbour of `from` one hop closer to `to`, lowest index on ties.
    pub fn step_toward(&self, from: usize, to: usize) -> Option<usize> {
        let d = self.hops(from, to)?;
        if d == 0 {
            return None;
        }
        self.adj[from].iter().copied().find(|&n| self.hops_or_max(n, to) == d - 1)
    }

    /// Shortest path `from -> to` (inclusive) avoiding `blocked` traps except
    /// the endpoints. Ties resolve to the lowest trap index.
    pub fn path_avoiding(&self, from: usize, to: usize, blocked: &[usize]) -> Option<Vec<usize>> {
        let n = self.num_traps();
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &v in &self.adj[u] {
                if !seen[v] && (v == to || !blocked.contains(&v)) {
                    seen[v] = true;
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }
}
