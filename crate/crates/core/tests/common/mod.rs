#![allow(dead_code)]

use atomc_core::circuit::Axis;
use atomc_core::{Circuit, Gate, GateKind};
use proptest::prelude::*;

fn kind_for(arity: usize, pick: u8, angle: f64) -> GateKind {
    match arity {
        1 => match pick % 4 {
            0 => GateKind::H,
            1 => GateKind::X,
            2 => GateKind::Rot { axis: Axis::Y, angle },
            _ => GateKind::Rot { axis: Axis::Z, angle },
        },
        2 => match pick % 4 {
            0 => GateKind::Cx,
            1 => GateKind::Cz,
            2 => GateKind::Cp { angle },
            _ => GateKind::Swap,
        },
        3 => GateKind::Ccz,
        _ => GateKind::Cccz,
    }
}

/// Random circuit on `n` qubits with up to `max_gates` gates of arity at
/// most `max_arity`.
pub fn circuit(n: usize, max_gates: usize, max_arity: usize) -> impl Strategy<Value = Circuit> {
    let max_arity = max_arity.min(n).max(1);
    let gate = (1..=max_arity, any::<u8>(), -3.0f64..3.0, permutation(n))
        .prop_map(|(arity, pick, angle, qs)| Gate::new(kind_for(arity, pick, angle), qs[..arity].to_vec()).unwrap());
    proptest::collection::vec(gate, 0..=max_gates).prop_map(move |gates| Circuit::from_gates("rand", n, gates).unwrap())
}

/// Random circuit with its qubit count drawn from `sizes`.
pub fn sized_circuit(
    sizes: std::ops::RangeInclusive<usize>,
    max_gates: usize,
    max_arity: usize,
) -> impl Strategy<Value = Circuit> {
    sizes.prop_flat_map(move |n| circuit(n, max_gates, max_arity))
}

pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}
