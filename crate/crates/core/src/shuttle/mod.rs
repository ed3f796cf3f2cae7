//! Atom shuttling: AOD move validation, shuttle timing, replacement of
//! routed SWAPs by shuttles, and shuttle scheduling scenarios.

mod aod;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hardware::{HardwareSpec, Topology};
use crate::mapper::{LayeredPlan, Layout, MappedCircuit};
use crate::scheduler::{Builder, OpKind, Schedule};

pub use aod::{validate_move, AodGrid, Axis, Move, MoveViolation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShuttleError {
    #[error("invalid AOD grid: {0}")]
    BadGrid(String),
    #[error("distance must be finite and non-negative, got {0}")]
    BadDistance(f64),
    #[error("velocity {velocity} um/us exceeds the limit {max} um/us")]
    TooFast { velocity: f64, max: f64 },
    #[error("layered plans describe different circuits")]
    Mismatch,
}

/// Applies moves in order, each to the grid left by the previous valid move.
/// Invalid moves are reported with their index and skipped.
pub fn validate_sequence(grid: &AodGrid, moves: &[Move]) -> Vec<(usize, MoveViolation)> {
    let mut cur = grid.clone();
    let mut out = Vec::new();
    for (i, mv) in moves.iter().enumerate() {
        let v = validate_move(&cur, mv);
        if v.is_empty() {
            cur.xs.iter_mut().zip(&mv.dx).for_each(|(x, d)| *x += d);
            cur.ys.iter_mut().zip(&mv.dy).for_each(|(y, d)| *y += d);
        } else {
            out.extend(v.into_iter().map(|v| (i, v)));
        }
    }
    out
}

/// `2 (t_trap + distance / v_max)`: pick-up, transport and drop for both
/// atoms of an exchange.
pub fn shuttle_duration(distance_um: f64, spec: &HardwareSpec) -> f64 {
    let s = &spec.shuttle;
    2.0 * (s.t_trap_us + distance_um / s.max_velocity_um_per_us)
}

/// Like [`shuttle_duration`] at a chosen speed; speeds above the limit are
/// rejected.
pub fn shuttle_duration_at(distance_um: f64, velocity: f64, spec: &HardwareSpec) -> Result<f64, ShuttleError> {
    if !(distance_um >= 0.0 && distance_um.is_finite()) {
        return Err(ShuttleError::BadDistance(distance_um));
    }
    let max = spec.shuttle.max_velocity_um_per_us;
    if !(velocity > 0.0) || velocity > max {
        return Err(ShuttleError::TooFast { velocity, max });
    }
    Ok(2.0 * (spec.shuttle.t_trap_us + distance_um / velocity))
}

/// One shuttle standing in for a run of consecutive SWAPs (`ops`, a range of
/// indices into the mapped circuit) that carry `qubit` from `source` to
/// `destination`. A run of one SWAP is an exchange of two atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShuttleOp {
    pub qubit: usize,
    pub source: usize,
    pub destination: usize,
    pub distance_um: f64,
    pub duration_us: f64,
    pub exchange: bool,
    pub layer: usize,
    pub ops: (usize, usize),
    /// Underlying trap swaps, for layout replay.
    pub swaps: Vec<(usize, usize)>,
}

impl ShuttleOp {
    fn traps(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.swaps.iter().flat_map(|&(a, b)| [a, b]).collect();
        t.sort_unstable();
        t.dedup();
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Parallel,
    Sequential,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Parallel => "parallel",
            Scenario::Sequential => "sequential",
        })
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "parallel" => Ok(Scenario::Parallel),
            "sequential" => Ok(Scenario::Sequential),
            _ => Err(format!("unknown shuttle scenario `{s}` (parallel, sequential)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShuttlePlan {
    pub ops: Vec<ShuttleOp>,
    pub num_layers: usize,
}

impl ShuttlePlan {
    /// Applies every shuttle to `initial` in order.
    pub fn replay(&self, initial: &Layout) -> Layout {
        let mut l = initial.clone();
        for op in &self.ops {
            for &(a, b) in &op.swaps {
                l.swap_traps(a, b);
            }
        }
        l
    }

    pub fn total_duration_us(&self) -> f64 {
        self.ops.iter().map(|o| o.duration_us).sum()
    }
}

/// Collapses each maximal run of consecutive inserted SWAPs that keeps
/// moving one qubit into a single shuttle over the straight-line distance.
pub fn shuttles_from_swaps(m: &MappedCircuit, spec: &HardwareSpec) -> ShuttlePlan {
    let mut ops = Vec::new();
    let mut layer = 0;
    let mut gate_since_last = false;
    let mut layout = m.initial_layout.clone();
    let mut i = 0;
    while i < m.ops.len() {
        if !m.ops[i].is_inserted_swap() {
            gate_since_last = true;
            i += 1;
            continue;
        }
        let (a, b) = (m.ops[i].traps[0], m.ops[i].traps[1]);
        // The carrier is the atom the next SWAP keeps moving.
        let next = m.ops.get(i + 1).filter(|o| o.is_inserted_swap());
        let mut carrier_at = match next {
            Some(n) if n.traps.contains(&b) && layout.qubit(a).is_some() => Some(b),
            Some(n) if n.traps.contains(&a) && layout.qubit(b).is_some() => Some(a),
            _ => None,
        };
        let start = i;
        let carrier = match carrier_at {
            Some(t) if t == b => layout.qubit(a),
            Some(_) => layout.qubit(b),
            None => None,
        };
        let source = if carrier_at == Some(b) { a } else { b };
        let mut swaps = vec![(a, b)];
        layout.swap_traps(a, b);
        i += 1;
        while let (Some(pos), Some(op)) = (carrier_at, m.ops.get(i)) {
            if !op.is_inserted_swap() || !op.traps.contains(&pos) {
                break;
            }
            let other = if op.traps[0] == pos { op.traps[1] } else { op.traps[0] };
            swaps.push((op.traps[0], op.traps[1]));
            layout.swap_traps(op.traps[0], op.traps[1]);
            carrier_at = Some(other);
            i += 1;
        }
        if gate_since_last && !ops.is_empty() {
            layer += 1;
        }
        gate_since_last = false;
        let (qubit, src, dst, exchange) = match (carrier, carrier_at) {
            (Some(q), Some(dst)) if swaps.len() > 1 => (q, source, dst, false),
            _ => {
                let q = m.ops[start].qubits[0].or(m.ops[start].qubits[1]).expect("swap moves an atom");
                let (from, to) = if m.ops[start].qubits[0] == Some(q) { (a, b) } else { (b, a) };
                (q, from, to, true)
            }
        };
        let distance_um = spec.distance_um(src, dst);
        ops.push(ShuttleOp {
            qubit,
            source: src,
            destination: dst,
            distance_um,
            duration_us: shuttle_duration(distance_um, spec),
            exchange,
            layer,
            ops: (start, i),
            swaps,
        });
    }
    let num_layers = if ops.is_empty() { 0 } else { layer + 1 };
    ShuttlePlan { ops, num_layers }
}

/// Schedules the mapped circuit with every SWAP run replaced by its shuttle.
/// `Parallel` lets shuttles overlap anything on other traps; `Sequential`
/// runs each shuttle alone between gate layers.
pub fn schedule_shuttle_plan(
    plan: &ShuttlePlan,
    m: &MappedCircuit,
    spec: &HardwareSpec,
    scenario: Scenario,
) -> Schedule {
    let topo = Topology::new(spec);
    let mut b = Builder::new(&topo, m.num_qubits);
    let mut next = plan.ops.iter().peekable();
    let mut i = 0;
    while i < m.ops.len() {
        if let Some(sh) = next.next_if(|s| s.ops.0 == i) {
            if scenario == Scenario::Sequential {
                b.barrier();
            }
            let traps = sh.traps();
            let held: Vec<Option<usize>> = traps
                .iter()
                .map(|&t| {
                    m.ops[sh.ops.0..sh.ops.1]
                        .iter()
                        .find_map(|o| o.traps.iter().position(|&x| x == t).map(|p| o.qubits[p]))
                        .flatten()
                })
                .collect();
            b.place(OpKind::Shuttle { distance_um: sh.distance_um }, traps, held, sh.duration_us);
            if scenario == Scenario::Sequential {
                b.barrier();
            }
            i = sh.ops.1;
            continue;
        }
        let op = &m.ops[i];
        b.place(
            OpKind::Gate { gate: op.kind, inserted: op.source.is_none() },
            op.traps.clone(),
            op.qubits.clone(),
            spec.duration_us(&op.kind),
        );
        i += 1;
    }
    b.finish()
}

/// Busy-time split for a layered plan. Shuttles are the net trap changes of
/// each qubit between consecutive layer layouts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerBreakdown {
    pub layers: usize,
    pub shuttles: usize,
    pub gate_us: f64,
    pub motion_us: f64,
    pub trap_switch_us: f64,
    /// Layers run back to back; shuttles within one transition run in
    /// parallel and gates within a layer follow the restriction scheduler.
    pub execution_us: f64,
}

impl LayerBreakdown {
    pub fn shuttle_fraction(&self) -> f64 {
        let total = self.gate_us + self.motion_us + self.trap_switch_us;
        if total > 0.0 {
            (self.motion_us + self.trap_switch_us) / total
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStats {
    pub layers_fixed: usize,
    pub layers_reconfig: usize,
    pub reduction_ratio: f64,
    pub fixed: LayerBreakdown,
    pub reconfig: LayerBreakdown,
}

pub fn shuttle_layer_stats(
    fixed: &LayeredPlan,
    reconfig: &LayeredPlan,
    spec: &HardwareSpec,
) -> Result<LayerStats, ShuttleError> {
    if fixed.fingerprint != reconfig.fingerprint || fixed.num_gates != reconfig.num_gates {
        return Err(ShuttleError::Mismatch);
    }
    let topo = Topology::new(spec);
    let (lf, lr) = (fixed.num_layers(), reconfig.num_layers());
    Ok(LayerStats {
        layers_fixed: lf,
        layers_reconfig: lr,
        reduction_ratio: if lf == 0 { 0.0 } else { 1.0 - lr as f64 / lf as f64 },
        fixed: breakdown(fixed, &topo),
        reconfig: breakdown(reconfig, &topo),
    })
}

fn breakdown(plan: &LayeredPlan, topo: &Topology) -> LayerBreakdown {
    let spec = &topo.spec;
    let v = spec.shuttle.max_velocity_um_per_us;
    let t_trap = spec.shuttle.t_trap_us;
    let mut out = LayerBreakdown {
        layers: plan.num_layers(),
        shuttles: 0,
        gate_us: 0.0,
        motion_us: 0.0,
        trap_switch_us: 0.0,
        execution_us: 0.0,
    };
    for (i, layer) in plan.layers.iter().enumerate() {
        if i > 0 {
            let prev = &plan.layers[i - 1].layout;
            let mut longest: f64 = 0.0;
            for q in 0..plan.num_qubits {
                let (from, to) = (prev.trap(q), layer.layout.trap(q));
                if from != to {
                    let motion = 2.0 * spec.distance_um(from, to) / v;
                    out.shuttles += 1;
                    out.motion_us += motion;
                    out.trap_switch_us += 2.0 * t_trap;
                    longest = longest.max(motion + 2.0 * t_trap);
                }
            }
            out.execution_us += longest;
        }
        let mut b = Builder::new(topo, plan.num_qubits);
        for g in &layer.gates {
            let d = spec.duration_us(&g.kind);
            out.gate_us += d;
            b.place(
                OpKind::Gate { gate: g.kind, inserted: false },
                g.traps.clone(),
                g.qubits.iter().map(|&q| Some(q)).collect(),
                d,
            );
        }
        out.execution_us += b.finish().makespan_us;
    }
    out
}
