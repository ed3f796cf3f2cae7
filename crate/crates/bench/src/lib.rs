//! Shared fixtures for the pipeline benchmarks.

use atomc_core::circuit::{generate, lower_to_native, BenchKind};
use atomc_core::mapper::{initial_layout, LayoutStrategy};
use atomc_core::{Circuit, GateTag, HardwareSpec, Layout, NativeSet};

/// Default-grid hardware with CX kept as a composite gate.
pub fn hardware() -> (HardwareSpec, NativeSet) {
    (HardwareSpec::rubidium(), NativeSet::with_flags(false, true).with(GateTag::Cx))
}

/// A lowered benchmark circuit and its affinity layout.
pub fn fixture(kind: BenchKind, n: usize) -> (Circuit, Layout) {
    let (spec, native) = hardware();
    let c = lower_to_native(&generate(kind, n, 0).expect("benchmark size"), &native).expect("lowering");
    let l = initial_layout(&c, &spec, LayoutStrategy::Affinity, 0).expect("layout");
    (c, l)
}
