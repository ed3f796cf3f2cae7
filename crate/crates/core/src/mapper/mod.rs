//! Qubit placement and routing onto the trap grid.
//!
//! [`route`] inserts SWAPs on the coupling graph until every gate's operands
//! satisfy the interaction constraint; [`route_layered`] instead splits the
//! circuit into layers, each executed under one layout.

mod layered;
mod layout;
mod route;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind, GateTag};
use crate::hardware::{HardwareSpec, Topology};

pub use layered::{route_layered, route_layered_on, Layer, LayerGate, LayerMode, LayeredPlan};
pub use layout::{initial_layout, initial_layout_on, Layout, LayoutStrategy};
pub use route::{route, route_on, RouteParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RouteError {
    #[error("{qubits} qubits do not fit on {traps} traps")]
    TooManyQubits { qubits: usize, traps: usize },
    #[error("invalid layout: {0}")]
    BadLayout(String),
    #[error("gate {gate}: operands lie in disconnected parts of the coupling graph")]
    Disconnected { gate: usize },
    #[error("gate {gate}: no {arity} traps are pairwise within the interaction radius")]
    NoCluster { gate: usize, arity: usize },
    #[error("routing made no progress on gate {gate}")]
    Stalled { gate: usize },
}

/// One hardware-level operation. `source` is the index of the circuit gate it
/// came from; inserted SWAPs have `source == None`. `qubits[i]` is the circuit
/// qubit held by `traps[i]` when the operation runs (`None` for an empty trap).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedOp {
    pub kind: GateKind,
    pub traps: Vec<usize>,
    pub qubits: Vec<Option<usize>>,
    pub source: Option<usize>,
}

impl MappedOp {
    pub fn is_inserted_swap(&self) -> bool {
        self.source.is_none() && self.kind.tag() == GateTag::Swap
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedCircuit {
    pub name: String,
    pub num_qubits: usize,
    pub ops: Vec<MappedOp>,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub n_swaps: usize,
}

impl MappedCircuit {
    /// The routed operations as a circuit on trap wires.
    pub fn to_physical(&self) -> Circuit {
        let mut c = Circuit::new(format!("{}_mapped", self.name), self.initial_layout.num_traps());
        for op in &self.ops {
            c.push(Gate { kind: op.kind, qubits: op.traps.clone() }).expect("routed ops address valid traps");
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    TrapOutOfRange { op: usize, trap: usize },
    NotMappable { op: usize, gate: GateTag, traps: Vec<usize>, max_distance_um: f64 },
    LayoutMismatch { op: usize },
    FinalLayoutMismatch,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TrapOutOfRange { op, trap } => write!(f, "op {op}: trap {trap} out of range"),
            Violation::NotMappable { op, gate, traps, max_distance_um } => write!(
                f,
                "op {op}: {gate} on traps {traps:?} spans {max_distance_um:.3} um, beyond the interaction radius"
            ),
            Violation::LayoutMismatch { op } => write!(f, "op {op}: operands disagree with the replayed layout"),
            Violation::FinalLayoutMismatch => f.write_str("final layout differs from the replayed SWAP sequence"),
        }
    }
}

/// Checks every operation against the interaction constraint and replays the
/// inserted SWAPs against the recorded layouts. Empty means valid.
pub fn verify(m: &MappedCircuit, spec: &HardwareSpec) -> Vec<Violation> {
    let topo = Topology::new(spec);
    verify_on(m, &topo)
}

pub fn verify_on(m: &MappedCircuit, topo: &Topology) -> Vec<Violation> {
    let mut out = Vec::new();
    let n_traps = topo.num_traps();
    let mut layout = m.initial_layout.clone();
    for (i, op) in m.ops.iter().enumerate() {
        if let Some(&t) = op.traps.iter().find(|&&t| t >= n_traps || t >= layout.num_traps()) {
            out.push(Violation::TrapOutOfRange { op: i, trap: t });
            continue;
        }
        if op.traps.len() >= 2 && !topo.mappable(&op.traps) {
            let mut max = 0.0f64;
            for (a, &ta) in op.traps.iter().enumerate() {
                for &tb in &op.traps[a + 1..] {
                    max = max.max(topo.distance_um(ta, tb));
                }
            }
            out.push(Violation::NotMappable {
                op: i,
                gate: op.kind.tag(),
                traps: op.traps.clone(),
                max_distance_um: max,
            });
        }
        let held: Vec<Option<usize>> = op.traps.iter().map(|&t| layout.qubit(t)).collect();
        if held != op.qubits {
            out.push(Violation::LayoutMismatch { op: i });
        }
        if op.is_inserted_swap() {
            layout.swap_traps(op.traps[0], op.traps[1]);
        }
    }
    if layout != m.final_layout {
        out.push(Violation::FinalLayoutMismatch);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distant_cz_is_reported() {
        let spec = HardwareSpec::rubidium().with_grid(1, 4);
        let layout = Layout::identity(4, 4).unwrap();
        let m = MappedCircuit {
            name: "bad".into(),
            num_qubits: 4,
            ops: vec![MappedOp {
                kind: GateKind::Cz,
                traps: vec![0, 3],
                qubits: vec![Some(0), Some(3)],
                source: Some(0),
            }],
            initial_layout: layout.clone(),
            final_layout: layout,
            n_swaps: 0,
        };
        let v = verify(&m, &spec);
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::NotMappable { op: 0, gate: GateTag::Cz, .. }));
        assert!(v[0].to_string().contains("op 0"));
    }

    #[test]
    fn empty_circuit_verifies() {
        let layout = Layout::identity(2, 4).unwrap();
        let m = MappedCircuit {
            name: "e".into(),
            num_qubits: 2,
            ops: vec![],
            initial_layout: layout.clone(),
            final_layout: layout,
            n_swaps: 0,
        };
        assert!(verify(&m, &HardwareSpec::rubidium().with_grid(2, 2)).is_empty());
    }

    #[test]
    fn replay_mismatch_is_reported() {
        let spec = HardwareSpec::rubidium().with_grid(1, 3).with_interaction_radius(1.0);
        let layout = Layout::identity(3, 3).unwrap();
        let m = MappedCircuit {
            name: "r".into(),
            num_qubits: 3,
            ops: vec![MappedOp {
                kind: GateKind::Swap,
                traps: vec![0, 1],
                qubits: vec![Some(0), Some(1)],
                source: None,
            }],
            initial_layout: layout.clone(),
            final_layout: layout,
            n_swaps: 1,
        };
        assert_eq!(verify(&m, &spec), vec![Violation::FinalLayoutMismatch]);
    }
}
