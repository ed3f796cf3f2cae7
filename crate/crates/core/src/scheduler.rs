//! Restriction-aware ASAP scheduling of mapped circuits.
//!
//! Operations are placed in program order. An operation starts once its
//! traps are free and, if it is entangling, once every earlier entangling
//! operation touching a trap within the restriction radius has finished.
//! Ops are never slotted into earlier gaps, so growing the restriction
//! radius can only delay starts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::circuit::GateKind;
use crate::hardware::{HardwareSpec, IdleMode, Topology};
use crate::mapper::MappedCircuit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OpKind {
    Gate { gate: GateKind, inserted: bool },
    Shuttle { distance_um: f64 },
}

impl OpKind {
    pub fn label(&self) -> String {
        match self {
            OpKind::Gate { gate, .. } => gate.tag().name().to_string(),
            OpKind::Shuttle { .. } => "shuttle".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduledOp {
    pub kind: OpKind,
    pub traps: Vec<usize>,
    pub qubits: Vec<Option<usize>>,
    pub start_us: f64,
    pub end_us: f64,
}

impl ScheduledOp {
    pub fn duration_us(&self) -> f64 {
        self.end_us - self.start_us
    }

    pub fn is_entangling(&self) -> bool {
        matches!(self.kind, OpKind::Gate { .. }) && self.traps.len() >= 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub num_qubits: usize,
    pub ops: Vec<ScheduledOp>,
    pub makespan_us: f64,
    /// Gate time per circuit qubit. Shuttle time counts as idle.
    pub busy_us: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub makespan_us: f64,
    pub depth: usize,
    pub counts: BTreeMap<String, usize>,
}

impl Schedule {
    /// `index,op,traps,qubits,start_us,end_us`, traps and qubits joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,op,traps,qubits,start_us,end_us\n");
        for (i, op) in self.ops.iter().enumerate() {
            let traps: Vec<String> = op.traps.iter().map(|t| t.to_string()).collect();
            let qubits: Vec<String> =
                op.qubits.iter().map(|q| q.map_or_else(|| "-".to_string(), |q| q.to_string())).collect();
            let _ = writeln!(
                out,
                "{i},{},{},{},{},{}",
                op.kind.label(),
                traps.join(";"),
                qubits.join(";"),
                op.start_us,
                op.end_us
            );
        }
        out
    }

    pub fn gate_durations_us(&self) -> f64 {
        self.ops.iter().filter(|o| matches!(o.kind, OpKind::Gate { .. })).map(|o| o.duration_us()).sum()
    }
}

/// Incremental list scheduler shared with the shuttle scenarios.
#[derive(Debug)]
pub(crate) struct Builder<'a> {
    topo: &'a Topology,
    trap_ready: Vec<f64>,
    ent_end: Vec<f64>,
    barrier: f64,
    ops: Vec<ScheduledOp>,
    busy: Vec<f64>,
    makespan: f64,
}

impl<'a> Builder<'a> {
    pub(crate) fn new(topo: &'a Topology, num_qubits: usize) -> Self {
        let n = topo.num_traps();
        Builder {
            topo,
            trap_ready: vec![0.0; n],
            ent_end: vec![0.0; n],
            barrier: 0.0,
            ops: Vec::new(),
            busy: vec![0.0; num_qubits],
            makespan: 0.0,
        }
    }

    /// Nothing placed after this call starts before the current makespan.
    pub(crate) fn barrier(&mut self) {
        self.barrier = self.makespan;
    }

    pub(crate) fn place(&mut self, kind: OpKind, traps: Vec<usize>, qubits: Vec<Option<usize>>, duration: f64) -> f64 {
        let is_gate = matches!(kind, OpKind::Gate { .. });
        let entangling = is_gate && traps.len() >= 2;
        let mut start = self.barrier;
        for &t in &traps {
            start = start.max(self.trap_ready[t]);
            if entangling {
                for &r in self.topo.restricted_by(t) {
                    start = start.max(self.ent_end[r]);
                }
            }
        }
        let end = start + duration;
        for &t in &traps {
            self.trap_ready[t] = end;
            if entangling {
                self.ent_end[t] = self.ent_end[t].max(end);
            }
        }
        if is_gate {
            for q in qubits.iter().flatten() {
                self.busy[*q] += duration;
            }
        }
        self.makespan = self.makespan.max(end);
        self.ops.push(ScheduledOp { kind, traps, qubits, start_us: start, end_us: end });
        end
    }

    pub(crate) fn finish(self) -> Schedule {
        Schedule { num_qubits: self.busy.len(), ops: self.ops, makespan_us: self.makespan, busy_us: self.busy }
    }
}

pub fn schedule(m: &MappedCircuit, spec: &HardwareSpec) -> Schedule {
    schedule_on(m, &Topology::new(spec))
}

pub fn schedule_on(m: &MappedCircuit, topo: &Topology) -> Schedule {
    let mut b = Builder::new(topo, m.num_qubits);
    for op in &m.ops {
        let d = topo.spec.duration_us(&op.kind);
        b.place(OpKind::Gate { gate: op.kind, inserted: op.source.is_none() }, op.traps.clone(), op.qubits.clone(), d);
    }
    b.finish()
}

/// Idle time over a register of `n` qubits. `ArityWeighted` charges each
/// qubit for the time it spends outside gates; `Literal` subtracts each
/// gate's duration once.
pub fn idle_time(s: &Schedule, n: usize, mode: IdleMode) -> f64 {
    let total = n as f64 * s.makespan_us;
    let used = match mode {
        IdleMode::ArityWeighted => s.busy_us.iter().sum::<f64>(),
        IdleMode::Literal => s.gate_durations_us(),
    };
    (total - used).max(0.0)
}

pub fn metrics(s: &Schedule) -> Metrics {
    let mut counts = BTreeMap::new();
    for op in &s.ops {
        *counts.entry(op.kind.label()).or_insert(0) += 1;
    }
    Metrics { makespan_us: s.makespan_us, depth: depth(s), counts }
}

/// Greedy layering: an op's layer is one more than the deepest op that ends
/// no later than it starts.
fn depth(s: &Schedule) -> usize {
    const EPS: f64 = 1e-9;
    let n = s.ops.len();
    let mut by_start: Vec<usize> = (0..n).collect();
    by_start.sort_by(|&a, &b| {
        let (x, y) = (&s.ops[a], &s.ops[b]);
        x.start_us.total_cmp(&y.start_us).then(x.end_us.total_cmp(&y.end_us)).then(a.cmp(&b))
    });
    let mut by_end: Vec<usize> = (0..n).collect();
    by_end.sort_by(|&a, &b| s.ops[a].end_us.total_cmp(&s.ops[b].end_us).then(a.cmp(&b)));
    let mut layer = vec![0usize; n];
    let mut seen = vec![false; n];
    let (mut p, mut deepest_before, mut depth) = (0, 0, 0);
    for &i in &by_start {
        while p < n && seen[by_end[p]] && s.ops[by_end[p]].end_us <= s.ops[i].start_us + EPS {
            deepest_before = deepest_before.max(layer[by_end[p]]);
            p += 1;
        }
        layer[i] = deepest_before + 1;
        seen[i] = true;
        depth = depth.max(layer[i]);
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Axis, Circuit, Gate};
    use crate::mapper::{route, Layout, MappedOp, RouteParams};

    fn op(kind: GateKind, traps: &[usize]) -> MappedOp {
        MappedOp { kind, traps: traps.to_vec(), qubits: traps.iter().map(|&t| Some(t)).collect(), source: Some(0) }
    }

    fn mapped(n: usize, traps: usize, ops: Vec<MappedOp>) -> MappedCircuit {
        let l = Layout::identity(n, traps).unwrap();
        MappedCircuit { name: "t".into(), num_qubits: n, ops, initial_layout: l.clone(), final_layout: l, n_swaps: 0 }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn far_czs_run_together() {
        let spec = HardwareSpec::rubidium().with_grid(1, 8).with_interaction_radius(1.0).with_restriction_radius(1.0);
        let m = mapped(8, 8, vec![op(GateKind::Cz, &[0, 1]), op(GateKind::Cz, &[6, 7])]);
        let s = schedule(&m, &spec);
        let t = spec.durations_us.cz;
        assert_eq!(s.ops[1].start_us, 0.0);
        assert!(close(s.makespan_us, t));
        assert_eq!(metrics(&s).depth, 1);
    }

    #[test]
    fn restricted_czs_serialise() {
        let spec = HardwareSpec::rubidium().with_grid(1, 8).with_interaction_radius(1.0).with_restriction_radius(2.0);
        let m = mapped(8, 8, vec![op(GateKind::Cz, &[0, 1]), op(GateKind::Cz, &[3, 4])]);
        let s = schedule(&m, &spec);
        assert!(close(s.makespan_us, 2.0 * spec.durations_us.cz));
        let loose = spec.clone().with_restriction_radius(1.5);
        assert!(close(schedule(&m, &loose).makespan_us, spec.durations_us.cz));
    }

    #[test]
    fn single_qubit_gates_ignore_restriction() {
        let spec = HardwareSpec::rubidium().with_grid(1, 4).with_interaction_radius(1.0).with_restriction_radius(3.0);
        let m = mapped(4, 4, vec![op(GateKind::Cz, &[0, 1]), op(GateKind::H, &[2])]);
        let s = schedule(&m, &spec);
        assert_eq!(s.ops[1].start_us, 0.0);
    }

    #[test]
    fn ghz3_timeline_and_idle() {
        let spec = HardwareSpec::rubidium().with_grid(1, 3).with_interaction_radius(1.0);
        let gates = [
            Gate::new(GateKind::H, vec![0]).unwrap(),
            Gate::new(GateKind::Cx, vec![0, 1]).unwrap(),
            Gate::new(GateKind::Cx, vec![1, 2]).unwrap(),
        ];
        let c = Circuit::from_gates("ghz", 3, gates).unwrap();
        let m = route(&c, &spec, &Layout::identity(3, 3).unwrap(), &RouteParams::default()).unwrap();
        let s = schedule(&m, &spec);
        assert!(close(s.makespan_us, 1.9));
        assert!(close(s.ops[1].start_us, 0.5) && close(s.ops[2].start_us, 1.2));
        assert!(close(s.busy_us[0], 1.2) && close(s.busy_us[1], 1.4) && close(s.busy_us[2], 0.7));
        assert!(close(idle_time(&s, 3, IdleMode::ArityWeighted), 2.4));
        assert!(close(idle_time(&s, 3, IdleMode::Literal), 3.8));
        assert_eq!(metrics(&s).depth, 3);
    }

    #[test]
    fn single_gate_no_idle() {
        let spec = HardwareSpec::rubidium().with_grid(1, 1);
        let m = mapped(1, 1, vec![op(GateKind::Rot { axis: Axis::X, angle: 1.0 }, &[0])]);
        let s = schedule(&m, &spec);
        assert_eq!(idle_time(&s, 1, IdleMode::ArityWeighted), 0.0);
        assert_eq!(idle_time(&s, 1, IdleMode::Literal), 0.0);
    }

    #[test]
    fn empty_metrics() {
        let spec = HardwareSpec::rubidium().with_grid(2, 2);
        let s = schedule(&mapped(2, 4, vec![]), &spec);
        let m = metrics(&s);
        assert_eq!((m.makespan_us, m.depth, m.counts.len()), (0.0, 0, 0));
    }

    #[test]
    fn csv_has_one_row_per_op() {
        let spec = HardwareSpec::rubidium().with_grid(1, 2);
        let s = schedule(&mapped(2, 2, vec![op(GateKind::Cz, &[0, 1])]), &spec);
        let csv = s.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().starts_with("0,cz,0;1,0;1,0,"));
    }
}
