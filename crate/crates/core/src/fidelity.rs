//! Success-probability estimate and the trade-off solvers built on it.
//!
//! `P = exp(-t_idle / T_eff) * prod(F)`, evaluated in log space.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{CCCZ_BLOCK_COUNTS, CCZ_BLOCK_COUNTS};
use crate::hardware::{HardwareSpec, IdleMode};
use crate::scheduler::{idle_time, OpKind, Schedule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub p: f64,
    pub log_p: f64,
    pub gate_factor: f64,
    pub idle_factor: f64,
    pub t_idle_us: f64,
    pub makespan_us: f64,
    pub n_swaps: usize,
    pub n_shuttles: usize,
    pub counts: BTreeMap<String, usize>,
}

pub fn success_probability(s: &Schedule, spec: &HardwareSpec, n: usize) -> FidelityReport {
    let mut log_gates = 0.0;
    let mut counts = BTreeMap::new();
    let (mut n_swaps, mut n_shuttles) = (0, 0);
    for op in &s.ops {
        *counts.entry(op.kind.label()).or_insert(0) += 1;
        log_gates += match &op.kind {
            OpKind::Gate { gate, inserted } => {
                if *inserted {
                    n_swaps += 1;
                }
                spec.fidelity(gate).ln()
            }
            OpKind::Shuttle { .. } => {
                n_shuttles += 1;
                spec.shuttle.fidelity.ln()
            }
        };
    }
    let t_idle = idle_time(s, n, spec.idle_mode);
    let log_idle = -t_idle / spec.t_eff_us();
    let log_p = log_gates + log_idle;
    FidelityReport {
        p: log_p.exp(),
        log_p,
        gate_factor: log_gates.exp(),
        idle_factor: log_idle.exp(),
        t_idle_us: t_idle,
        makespan_us: s.makespan_us,
        n_swaps,
        n_shuttles,
        counts,
    }
}

/// Mapping fidelity: idle decay times three CX per inserted SWAP.
pub fn f_swap(n_swaps: usize, t_idle_us: f64, spec: &HardwareSpec) -> f64 {
    let (f_cx, _) = spec.cx_composite();
    (-t_idle_us / spec.t_eff_us() + 3.0 * n_swaps as f64 * f_cx.ln()).exp()
}

/// Shuttling fidelity: idle decay only.
pub fn f_shuttle(t_idle_us: f64, spec: &HardwareSpec) -> f64 {
    (-t_idle_us / spec.t_eff_us()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CxComposite {
    pub fidelity: f64,
    pub duration_us: f64,
}

pub fn cx_composite(spec: &HardwareSpec) -> CxComposite {
    let (fidelity, duration_us) = spec.cx_composite();
    CxComposite { fidelity, duration_us }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiGate {
    Ccz,
    Cccz,
}

impl MultiGate {
    pub fn arity(self) -> usize {
        match self {
            MultiGate::Ccz => 3,
            MultiGate::Cccz => 4,
        }
    }

    /// Single-qubit and CZ gate counts of the decomposition.
    pub fn block_counts(self) -> (usize, usize) {
        match self {
            MultiGate::Ccz => CCZ_BLOCK_COUNTS,
            MultiGate::Cccz => CCCZ_BLOCK_COUNTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breakeven {
    pub gate: MultiGate,
    pub p_native: f64,
    pub p_decomposed: f64,
    pub breakeven_fidelity: f64,
    pub native_preferred: bool,
    pub idle_native_us: f64,
    pub idle_decomposed_us: f64,
}

/// Native gate against its decomposition on an isolated register of the
/// gate's arity, with the decomposition's gates run back to back.
pub fn decomposition_breakeven(gate: MultiGate, spec: &HardwareSpec) -> Breakeven {
    let k = gate.arity() as f64;
    let (a, b) = gate.block_counts();
    let (a, b) = (a as f64, b as f64);
    let (t1, tcz) = (spec.durations_us.single_qubit, spec.durations_us.cz);
    let (f1, fcz) = (spec.fidelities.single_qubit, spec.fidelities.cz);
    let (t_native, f_native) = match gate {
        MultiGate::Ccz => (spec.durations_us.ccz, spec.fidelities.ccz),
        MultiGate::Cccz => (spec.durations_us.cccz, spec.fidelities.cccz),
    };
    let serial = a * t1 + b * tcz;
    let idle = |makespan: f64, weighted_busy: f64, plain_busy: f64| match spec.idle_mode {
        IdleMode::ArityWeighted => (k * makespan - weighted_busy).max(0.0),
        IdleMode::Literal => (k * makespan - plain_busy).max(0.0),
    };
    let idle_decomposed = idle(serial, a * t1 + 2.0 * b * tcz, serial);
    let idle_native = idle(t_native, k * t_native, t_native);
    let t_eff = spec.t_eff_us();
    let p_decomposed = (a * f1.ln() + b * fcz.ln() - idle_decomposed / t_eff).exp();
    let native_idle_factor = (-idle_native / t_eff).exp();
    let p_native = f_native * native_idle_factor;
    Breakeven {
        gate,
        p_native,
        p_decomposed,
        breakeven_fidelity: p_decomposed / native_idle_factor,
        native_preferred: p_native > p_decomposed,
        idle_native_us: idle_native,
        idle_decomposed_us: idle_decomposed,
    }
}

/// Effective coherence time at which idle decay and SWAP error contribute
/// equally. `None` when no finite crossover exists.
pub fn crossover_teff(t_idle_us: f64, n_swaps: usize, f_cx: f64) -> Option<f64> {
    if n_swaps == 0 || !(f_cx > 0.0 && f_cx < 1.0) || !(t_idle_us > 0.0) || !t_idle_us.is_finite() {
        return None;
    }
    Some(-t_idle_us / (3.0 * n_swaps as f64 * f_cx.ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Velocity {
    Feasible {
        t_shuttle_us: f64,
        velocity_um_per_us: f64,
    },
    /// The break-even shuttle time is shorter than the trap switching.
    BelowTrapSwitching {
        t_shuttle_us: f64,
    },
    /// The required speed exceeds the hardware limit.
    AboveLimit {
        t_shuttle_us: f64,
        velocity_um_per_us: f64,
    },
}

impl Velocity {
    pub fn velocity(&self) -> Option<f64> {
        match self {
            Velocity::Feasible { velocity_um_per_us, .. } => Some(*velocity_um_per_us),
            _ => None,
        }
    }

    pub fn t_shuttle_us(&self) -> f64 {
        match *self {
            Velocity::Feasible { t_shuttle_us, .. }
            | Velocity::BelowTrapSwitching { t_shuttle_us }
            | Velocity::AboveLimit { t_shuttle_us, .. } => t_shuttle_us,
        }
    }
}

/// Slowest shuttle that matches a gate SWAP while `n_idle` qubits wait.
/// Both sides idle every qubit for the whole operation; the gate SWAP also
/// pays three CX.
pub fn required_velocity(n_idle: usize, spec: &HardwareSpec, dist_um: f64) -> Velocity {
    let (f_cx, t_cx) = spec.cx_composite();
    let t_swap = 3.0 * t_cx;
    let t_sh = t_swap - 3.0 * spec.t_eff_us() * f_cx.ln() / n_idle.max(1) as f64;
    let t_switch = 2.0 * spec.shuttle.t_trap_us;
    if t_sh <= t_switch {
        return Velocity::BelowTrapSwitching { t_shuttle_us: t_sh };
    }
    let v = 2.0 * dist_um / (t_sh - t_switch);
    if v > spec.shuttle.max_velocity_um_per_us {
        Velocity::AboveLimit { t_shuttle_us: t_sh, velocity_um_per_us: v }
    } else {
        Velocity::Feasible { t_shuttle_us: t_sh, velocity_um_per_us: v }
    }
}

/// `(gate SWAP, shuttle)` fidelities with `n_idle` qubits waiting for the
/// whole operation, the shuttle at full speed over `dist_um`.
pub fn swap_vs_shuttle(n_idle: usize, spec: &HardwareSpec, dist_um: f64) -> (f64, f64) {
    let (_, t_cx) = spec.cx_composite();
    let n = n_idle as f64;
    let gate = f_swap(1, n * 3.0 * t_cx, spec);
    let t_sh = 2.0 * (spec.shuttle.t_trap_us + dist_um / spec.shuttle.max_velocity_um_per_us);
    (gate, f_shuttle(n * t_sh, spec))
}
