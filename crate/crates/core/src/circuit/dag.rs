use serde::Serialize;

use super::Circuit;

/// Edge `from -> to` carried by `qubit`: `to` is the next gate after `from`
/// that acts on `qubit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DepEdge {
    pub from: usize,
    pub to: usize,
    pub qubit: usize,
}

/// Gate dependency graph. Nodes are gate indices in program order, so every
/// edge points forward and program order is a topological order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepGraph {
    n_gates: usize,
    edges: Vec<DepEdge>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    chains: Vec<Vec<usize>>,
}

pub fn build_dag(c: &Circuit) -> DepGraph {
    DepGraph::build(c)
}

impl DepGraph {
    pub fn build(c: &Circuit) -> Self {
        let n_gates = c.len();
        let mut last: Vec<Option<usize>> = vec![None; c.num_qubits()];
        let mut chains = vec![Vec::new(); c.num_qubits()];
        let mut edges = Vec::new();
        let mut preds = vec![Vec::new(); n_gates];
        let mut succs = vec![Vec::new(); n_gates];
        for (i, g) in c.gates().iter().enumerate() {
            for &q in &g.qubits {
                if let Some(p) = last[q] {
                    edges.push(DepEdge { from: p, to: i, qubit: q });
                    if !preds[i].contains(&p) {
                        preds[i].push(p);
                        succs[p].push(i);
                    }
                }
                last[q] = Some(i);
                chains[q].push(i);
            }
        }
        for s in &mut succs {
            s.sort_unstable();
        }
        for p in &mut preds {
            p.sort_unstable();
        }
        DepGraph { n_gates, edges, preds, succs, chains }
    }

    pub fn num_nodes(&self) -> usize {
        self.n_gates
    }

    pub fn edges(&self) -> &[DepEdge] {
        &self.edges
    }

    /// Distinct predecessor gates of `g`.
    pub fn predecessors(&self, g: usize) -> &[usize] {
        &self.preds[g]
    }

    pub fn successors(&self, g: usize) -> &[usize] {
        &self.succs[g]
    }

    /// Gates acting on `qubit`, in program order.
    pub fn chain(&self, qubit: usize) -> &[usize] {
        &self.chains[qubit]
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        self.preds.iter().map(Vec::len).collect()
    }

    /// Kahn's algorithm, smallest ready index first.
    pub fn topological_order(&self) -> Vec<usize> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut indeg = self.in_degrees();
        let mut ready: BinaryHeap<Reverse<usize>> = (0..self.n_gates).filter(|&i| indeg[i] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.n_gates);
        while let Some(Reverse(g)) = ready.pop() {
            order.push(g);
            for &s in &self.succs[g] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    ready.push(Reverse(s));
                }
            }
        }
        order
    }

    /// ASAP level of each gate (front layer is level 0).
    pub fn levels(&self) -> Vec<usize> {
        let mut level = vec![0usize; self.n_gates];
        for g in 0..self.n_gates {
            level[g] = self.preds[g].iter().map(|&p| level[p] + 1).max().unwrap_or(0);
        }
        level
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{generate, BenchKind, Gate, GateKind};

    #[test]
    fn disjoint_gates_have_no_edges() {
        let c = Circuit::from_gates(
            "t",
            4,
            [Gate::new(GateKind::Cz, vec![0, 1]).unwrap(), Gate::new(GateKind::Cz, vec![2, 3]).unwrap()],
        )
        .unwrap();
        assert!(build_dag(&c).edges().is_empty());
    }

    #[test]
    fn ghz_is_a_chain() {
        let dag = build_dag(&generate(BenchKind::Ghz, 3, 0).unwrap());
        assert_eq!(dag.edges(), &[DepEdge { from: 0, to: 1, qubit: 0 }, DepEdge { from: 1, to: 2, qubit: 1 }]);
        assert_eq!(dag.topological_order(), vec![0, 1, 2]);
        assert_eq!(dag.levels(), vec![0, 1, 2]);
    }

    #[test]
    fn repeated_pair_gives_one_edge_per_qubit() {
        let cz = || Gate::new(GateKind::Cz, vec![0, 1]).unwrap();
        let c = Circuit::from_gates("t", 2, [cz(), cz()]).unwrap();
        let dag = build_dag(&c);
        assert_eq!(dag.edges().len(), 2);
        assert_eq!(dag.predecessors(1), &[0]);
    }
}
