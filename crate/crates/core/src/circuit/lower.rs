use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Axis, Circuit, CircuitError, Gate, GateKind, GateTag};

/// (single-qubit, CZ) gate counts of the CCZ replacement block.
pub const CCZ_BLOCK_COUNTS: (usize, usize) = (9, 6);
/// (single-qubit, CZ) gate counts of the CCCZ replacement block.
pub const CCCZ_BLOCK_COUNTS: (usize, usize) = (28, 20);

/// Gate classes the hardware executes directly. Always contains `rot` and
/// `cz`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NativeSet {
    tags: BTreeSet<GateTag>,
}

impl NativeSet {
    pub fn new(tags: impl IntoIterator<Item = GateTag>) -> Result<Self, CircuitError> {
        let tags: BTreeSet<GateTag> = tags.into_iter().collect();
        if !tags.contains(&GateTag::Rot) || !tags.contains(&GateTag::Cz) {
            return Err(CircuitError::NotUniversal);
        }
        Ok(NativeSet { tags })
    }

    /// `{rot, cz}` only.
    pub fn universal() -> Self {
        NativeSet { tags: [GateTag::Rot, GateTag::Cz].into_iter().collect() }
    }

    pub fn with_flags(cp_native: bool, multiqubit_native: bool) -> Self {
        let mut s = NativeSet::universal();
        if cp_native {
            s.tags.insert(GateTag::Cp);
        }
        if multiqubit_native {
            s.tags.insert(GateTag::Ccz);
            s.tags.insert(GateTag::Cccz);
        }
        s
    }

    pub fn with(mut self, tag: GateTag) -> Self {
        self.tags.insert(tag);
        self
    }

    pub fn contains(&self, tag: GateTag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn cp_native(&self) -> bool {
        self.contains(GateTag::Cp)
    }

    pub fn multiqubit_native(&self) -> bool {
        self.contains(GateTag::Ccz) && self.contains(GateTag::Cccz)
    }

    pub fn tags(&self) -> impl Iterator<Item = GateTag> + '_ {
        self.tags.iter().copied()
    }
}

/// Multi-qubit gates native, controlled-phase not.
impl Default for NativeSet {
    fn default() -> Self {
        NativeSet::with_flags(false, true)
    }
}

fn g(kind: GateKind, qubits: &[usize]) -> Gate {
    Gate::unchecked(kind, qubits.to_vec())
}

/// One rewriting step; `None` means the gate has no rule.
fn expand(gate: &Gate) -> Option<Vec<Gate>> {
    let q = &gate.qubits;
    let out = match gate.kind {
        GateKind::H => vec![g(GateKind::Rot { axis: Axis::Xz, angle: PI }, q)],
        GateKind::X => vec![g(GateKind::rx(PI), q)],
        GateKind::Cx => vec![g(GateKind::H, &[q[1]]), g(GateKind::Cz, q), g(GateKind::H, &[q[1]])],
        GateKind::Swap => {
            vec![g(GateKind::Cx, &[q[0], q[1]]), g(GateKind::Cx, &[q[1], q[0]]), g(GateKind::Cx, &[q[0], q[1]])]
        }
        GateKind::Cp { angle } => vec![
            g(GateKind::rz(angle / 2.0), &[q[0]]),
            g(GateKind::Cx, q),
            g(GateKind::rz(-angle / 2.0), &[q[1]]),
            g(GateKind::Cx, q),
            g(GateKind::rz(angle / 2.0), &[q[1]]),
        ],
        GateKind::Ccz => ccz_block(q[0], q[1], q[2]),
        GateKind::Cccz => cccz_block(q),
        GateKind::Rot { .. } | GateKind::Cz => return None,
    };
    Some(out)
}

// Cost block with the CCZ decomposition's gate counts; the interaction
// pattern follows the usual six-entangler Toffoli layout.
fn ccz_block(a: usize, b: usize, c: usize) -> Vec<Gate> {
    let t = PI / 4.0;
    vec![
        g(GateKind::Cz, &[b, c]),
        g(GateKind::Rot { axis: Axis::Xz, angle: -t }, &[c]),
        g(GateKind::Cz, &[a, c]),
        g(GateKind::Rot { axis: Axis::Xz, angle: t }, &[c]),
        g(GateKind::Cz, &[b, c]),
        g(GateKind::Rot { axis: Axis::Xz, angle: -t }, &[c]),
        g(GateKind::Cz, &[a, c]),
        g(GateKind::rz(t), &[b]),
        g(GateKind::Rot { axis: Axis::Xz, angle: t }, &[c]),
        g(GateKind::Cz, &[a, b]),
        g(GateKind::rz(t), &[a]),
        g(GateKind::Rot { axis: Axis::Xz, angle: -t }, &[b]),
        g(GateKind::Cz, &[a, b]),
        g(GateKind::Rot { axis: Axis::Xz, angle: PI }, &[b]),
        g(GateKind::rz(t), &[c]),
    ]
}

// Cost block with the CCCZ decomposition's gate counts: the six operand pairs
// are cycled through twenty entanglers.
fn cccz_block(q: &[usize]) -> Vec<Gate> {
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let t = PI / 8.0;
    let mut out = Vec::with_capacity(48);
    for i in 0..CCCZ_BLOCK_COUNTS.1 {
        let (x, y) = PAIRS[i % PAIRS.len()];
        out.push(g(GateKind::Cz, &[q[x], q[y]]));
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        out.push(g(GateKind::rz(sign * t), &[q[y]]));
        if i % 2 == 1 && i < 16 {
            out.push(g(GateKind::Rot { axis: Axis::Xz, angle: PI }, &[q[x]]));
        }
    }
    out
}

/// Rewrites `c` until every gate is in `native`.
pub fn lower_to_native(c: &Circuit, native: &NativeSet) -> Result<Circuit, CircuitError> {
    let mut out = Circuit::new(c.name.clone(), c.num_qubits());
    let mut stack: Vec<Gate> = Vec::new();
    for gate in c.gates() {
        stack.push(gate.clone());
        while let Some(next) = stack.pop() {
            if native.contains(next.tag()) {
                out.add(next.kind, &next.qubits);
                continue;
            }
            let parts = expand(&next).ok_or(CircuitError::NoRule(next.tag()))?;
            stack.extend(parts.into_iter().rev());
        }
    }
    Ok(out)
}
