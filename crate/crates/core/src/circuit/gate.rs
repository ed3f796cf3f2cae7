use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::CircuitError;

/// Rotation axis of a native single-qubit gate.
///
/// `Xz` is the diagonal axis `(x + z)/sqrt(2)`; a half turn about it is a
/// Hadamard up to global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
    Xz,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
            Axis::Xz => "xz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum GateKind {
    Rot { axis: Axis, angle: f64 },
    H,
    X,
    Cx,
    Cz,
    Cp { angle: f64 },
    Swap,
    Ccz,
    Cccz,
}

/// Fieldless gate class, used for native-set membership and tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateTag {
    Rot,
    H,
    X,
    Cx,
    Cz,
    Cp,
    Swap,
    Ccz,
    Cccz,
}

impl GateTag {
    pub const ALL: [GateTag; 9] = [
        GateTag::Rot,
        GateTag::H,
        GateTag::X,
        GateTag::Cx,
        GateTag::Cz,
        GateTag::Cp,
        GateTag::Swap,
        GateTag::Ccz,
        GateTag::Cccz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateTag::Rot => "rot",
            GateTag::H => "h",
            GateTag::X => "x",
            GateTag::Cx => "cx",
            GateTag::Cz => "cz",
            GateTag::Cp => "cp",
            GateTag::Swap => "swap",
            GateTag::Ccz => "ccz",
            GateTag::Cccz => "cccz",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateTag::Rot | GateTag::H | GateTag::X => 1,
            GateTag::Cx | GateTag::Cz | GateTag::Cp | GateTag::Swap => 2,
            GateTag::Ccz => 3,
            GateTag::Cccz => 4,
        }
    }
}

impl fmt::Display for GateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl GateKind {
    pub fn rx(angle: f64) -> Self {
        GateKind::Rot { axis: Axis::X, angle }
    }

    pub fn ry(angle: f64) -> Self {
        GateKind::Rot { axis: Axis::Y, angle }
    }

    pub fn rz(angle: f64) -> Self {
        GateKind::Rot { axis: Axis::Z, angle }
    }

    pub fn tag(&self) -> GateTag {
        match self {
            GateKind::Rot { .. } => GateTag::Rot,
            GateKind::H => GateTag::H,
            GateKind::X => GateTag::X,
            GateKind::Cx => GateTag::Cx,
            GateKind::Cz => GateTag::Cz,
            GateKind::Cp { .. } => GateTag::Cp,
            GateKind::Swap => GateTag::Swap,
            GateKind::Ccz => GateTag::Ccz,
            GateKind::Cccz => GateTag::Cccz,
        }
    }

    pub fn arity(&self) -> usize {
        self.tag().arity()
    }

    /// True for gates that populate Rydberg levels (everything acting on two
    /// or more qubits).
    pub fn is_entangling(&self) -> bool {
        self.arity() >= 2
    }

    pub(crate) fn check(&self) -> Result<(), CircuitError> {
        match *self {
            GateKind::Rot { angle, .. } if !angle.is_finite() => Err(CircuitError::BadAngle { angle }),
            GateKind::Cp { angle } if !angle.is_finite() || angle <= -2.0 * PI || angle > 2.0 * PI => {
                Err(CircuitError::BadAngle { angle })
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    /// Builds a gate, checking operand count, distinctness and angle range.
    /// Operand bounds are checked when the gate is pushed onto a circuit.
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self, CircuitError> {
        kind.check()?;
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity { gate: kind.tag(), expected: kind.arity(), got: qubits.len() });
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(CircuitError::DuplicateOperand { qubit: *q });
            }
        }
        Ok(Gate { kind, qubits })
    }

    pub(crate) fn unchecked(kind: GateKind, qubits: Vec<usize>) -> Self {
        debug_assert_eq!(kind.arity(), qubits.len());
        Gate { kind, qubits }
    }

    pub fn tag(&self) -> GateTag {
        self.kind.tag()
    }

    pub fn acts_on(&self, q: usize) -> bool {
        self.qubits.contains(&q)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::Rot { axis, angle } => write!(f, "r{}({})", axis.name(), angle)?,
            GateKind::Cp { angle } => write!(f, "cp({})", angle)?,
            other => f.write_str(other.tag().name())?,
        }
        let ops: Vec<String> = self.qubits.iter().map(|q| format!("q{q}")).collect();
        write!(f, " {}", ops.join(","))
    }
}
