//! Circuit representation, OpenQASM subset I/O, benchmark generators,
//! native-gate lowering and the gate dependency graph.

mod dag;
mod gate;
mod generate;
mod lower;
mod qasm;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dag::{build_dag, DepEdge, DepGraph};
pub use gate::{Axis, Gate, GateKind, GateTag};
pub use generate::{generate, BenchKind};
pub use lower::{lower_to_native, NativeSet, CCCZ_BLOCK_COUNTS, CCZ_BLOCK_COUNTS};
pub use qasm::{emit_qasm, parse_qasm, ParseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("gate {gate} expects {expected} operands, got {got}")]
    Arity { gate: GateTag, expected: usize, got: usize },
    #[error("qubit {qubit} appears twice in one gate")]
    DuplicateOperand { qubit: usize },
    #[error("qubit {qubit} out of range for a {n}-qubit circuit")]
    OutOfRange { qubit: usize, n: usize },
    #[error("invalid rotation angle {angle}")]
    BadAngle { angle: f64 },
    #[error("{kind} needs at least {min} qubits, got {n}")]
    TooFewQubits { kind: BenchKind, min: usize, n: usize },
    #[error("native set must contain rot and cz")]
    NotUniversal,
    #[error("no lowering rule takes {0} into the native set")]
    NoRule(GateTag),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, n: usize) -> Self {
        Circuit { name: name.into(), n, gates: Vec::new() }
    }

    pub fn from_gates(
        name: impl Into<String>,
        n: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(name, n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if let Some(&q) = gate.qubits.iter().find(|&&q| q >= self.n) {
            return Err(CircuitError::OutOfRange { qubit: q, n: self.n });
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Convenience for generators: operands are known to be valid.
    pub(crate) fn add(&mut self, kind: GateKind, qubits: &[usize]) {
        debug_assert!(qubits.iter().all(|&q| q < self.n));
        self.gates.push(Gate::unchecked(kind, qubits.to_vec()));
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate_counts(&self) -> BTreeMap<GateTag, usize> {
        let mut counts = BTreeMap::new();
        for g in &self.gates {
            *counts.entry(g.tag()).or_insert(0) += 1;
        }
        counts
    }

    pub fn count(&self, tag: GateTag) -> usize {
        self.gates.iter().filter(|g| g.tag() == tag).count()
    }

    /// Applies a qubit relabelling `q -> perm[q]`.
    pub fn relabeled(&self, perm: &[usize]) -> Circuit {
        assert_eq!(perm.len(), self.n);
        Circuit {
            name: self.name.clone(),
            n: self.n,
            gates: self
                .gates
                .iter()
                .map(|g| Gate::unchecked(g.kind, g.qubits.iter().map(|&q| perm[q]).collect()))
                .collect(),
        }
    }

    pub fn dag(&self) -> DepGraph {
        DepGraph::build(self)
    }
}
