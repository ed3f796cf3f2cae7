use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::layout::{affinity, snake_order};
use super::route::{assign_slots, check_connected, enclosed_first, Clusters};
use super::{initial_layout_on, Layout, LayoutStrategy, RouteError};
use crate::circuit::{emit_qasm, Circuit, DepGraph, GateKind};
use crate::hardware::{HardwareSpec, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerMode {
    Fixed,
    Reconfig,
}

impl fmt::Display for LayerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayerMode::Fixed => "fixed",
            LayerMode::Reconfig => "reconfig",
        })
    }
}

impl FromStr for LayerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fixed" => Ok(LayerMode::Fixed),
            "reconfig" => Ok(LayerMode::Reconfig),
            _ => Err(format!("unknown layer mode `{s}` (fixed, reconfig)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerGate {
    pub index: usize,
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub traps: Vec<usize>,
}

/// Gates executed under one layout. In fixed mode `swaps` are the trap
/// exchanges applied since the previous layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub layout: Layout,
    pub swaps: Vec<(usize, usize)>,
    pub gates: Vec<LayerGate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredPlan {
    pub mode: LayerMode,
    pub name: String,
    pub num_qubits: usize,
    pub num_gates: usize,
    /// FNV-1a hash of the circuit's QASM text.
    pub fingerprint: String,
    pub layers: Vec<Layer>,
}

impl LayeredPlan {
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn num_swaps(&self) -> usize {
        self.layers.iter().map(|l| l.swaps.len()).sum()
    }

    /// Structural check against the circuit: every gate exactly once, in
    /// dependency order, mappable under its layer's layout.
    pub fn check(&self, c: &Circuit, topo: &Topology) -> Vec<String> {
        let mut problems = Vec::new();
        let dag = c.dag();
        let mut layer_of = vec![usize::MAX; c.len()];
        let mut pos_of = vec![usize::MAX; c.len()];
        let mut pos = 0;
        for (li, layer) in self.layers.iter().enumerate() {
            for g in &layer.gates {
                if g.index >= c.len() {
                    problems.push(format!("layer {li}: gate {} out of range", g.index));
                    continue;
                }
                if layer_of[g.index] != usize::MAX {
                    problems.push(format!("gate {} executed twice", g.index));
                }
                layer_of[g.index] = li;
                pos_of[g.index] = pos;
                pos += 1;
                if g.qubits != c.gates()[g.index].qubits || g.traps != layer.layout.traps_of(&g.qubits) {
                    problems.push(format!("layer {li}: gate {} operands disagree with layout", g.index));
                }
                if g.traps.len() >= 2 && !topo.mappable(&g.traps) {
                    problems.push(format!("layer {li}: gate {} not mappable", g.index));
                }
            }
        }
        for g in 0..c.len() {
            if layer_of[g] == usize::MAX {
                problems.push(format!("gate {g} never executed"));
                continue;
            }
            for &p in dag.predecessors(g) {
                if pos_of[p] == usize::MAX || pos_of[p] > pos_of[g] {
                    problems.push(format!("gate {g} runs before its predecessor {p}"));
                }
            }
        }
        problems
    }
}

pub(crate) fn fingerprint(c: &Circuit) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in emit_qasm(c).bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

pub fn route_layered(c: &Circuit, spec: &HardwareSpec, mode: LayerMode, seed: u64) -> Result<LayeredPlan, RouteError> {
    route_layered_on(c, &Topology::new(spec), mode, seed)
}

pub fn route_layered_on(c: &Circuit, topo: &Topology, mode: LayerMode, seed: u64) -> Result<LayeredPlan, RouteError> {
    let start = initial_layout_on(c, topo, LayoutStrategy::Affinity, seed)?;
    check_connected(c, topo, &start)?;
    let fixed = fixed_layers(c, topo, start)?;
    let layers = match mode {
        LayerMode::Fixed => fixed,
        LayerMode::Reconfig => {
            let greedy = reconfig_layers(c, topo, &fixed, seed)?;
            let imitation = replay_layouts(c, topo, fixed.iter().map(|l| &l.layout));
            if c.is_empty() {
                fixed
            } else if imitation.len() < greedy.len() {
                imitation
            } else {
                greedy
            }
        }
    };
    Ok(LayeredPlan {
        mode,
        name: c.name.clone(),
        num_qubits: c.num_qubits(),
        num_gates: c.len(),
        fingerprint: fingerprint(c),
        layers,
    })
}

/// Dependency bookkeeping shared by both modes.
#[derive(Clone)]
struct Progress<'a> {
    c: &'a Circuit,
    dag: &'a DepGraph,
    indeg: Vec<usize>,
    done: Vec<bool>,
    remaining: usize,
}

impl<'a> Progress<'a> {
    fn new(c: &'a Circuit, dag: &'a DepGraph) -> Self {
        Progress { c, dag, indeg: dag.in_degrees(), done: vec![false; c.len()], remaining: c.len() }
    }

    fn front(&self) -> Vec<usize> {
        (0..self.done.len()).filter(|&g| !self.done[g] && self.indeg[g] == 0).collect()
    }

    /// Executes every gate reachable under `layout` and returns them in
    /// execution order.
    fn run(&mut self, topo: &Topology, layout: &Layout) -> Vec<LayerGate> {
        let mut heap: BinaryHeap<Reverse<usize>> = self.front().into_iter().map(Reverse).collect();
        let mut out = Vec::new();
        while let Some(Reverse(g)) = heap.pop() {
            let gate = &self.c.gates()[g];
            let traps = layout.traps_of(&gate.qubits);
            if traps.len() >= 2 && !topo.mappable(&traps) {
                continue;
            }
            self.done[g] = true;
            self.remaining -= 1;
            out.push(LayerGate { index: g, kind: gate.kind, qubits: gate.qubits.clone(), traps });
            for &s in self.dag.successors(g) {
                self.indeg[s] -= 1;
                if self.indeg[s] == 0 {
                    heap.push(Reverse(s));
                }
            }
        }
        out
    }

    fn count(&self, topo: &Topology, layout: &Layout) -> usize {
        self.clone().run(topo, layout).len()
    }
}

fn fixed_layers(c: &Circuit, topo: &Topology, mut layout: Layout) -> Result<Vec<Layer>, RouteError> {
    let dag = c.dag();
    let mut prog = Progress::new(c, &dag);
    let mut clusters = Clusters::default();
    let mut targets: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    let mut layers = Vec::new();
    let mut pending = Vec::new();
    let mut idle_rounds = 0usize;
    let mut first = true;
    loop {
        let gates = prog.run(topo, &layout);
        if !gates.is_empty() || first {
            layers.push(Layer { layout: layout.clone(), swaps: std::mem::take(&mut pending), gates });
            idle_rounds = 0;
        } else {
            idle_rounds += 1;
        }
        first = false;
        if prog.remaining == 0 {
            break;
        }
        let front = prog.front();
        if idle_rounds > 4 * topo.num_traps() + 16 {
            return Err(RouteError::Stalled { gate: front[0] });
        }
        let swaps = swap_round(c, topo, &layout, &front, &mut clusters, &mut targets)?;
        for &(a, b) in &swaps {
            layout.swap_traps(a, b);
        }
        pending.extend(swaps);
    }
    if layers.len() > 1 && layers[0].gates.is_empty() {
        let empty = layers.remove(0);
        let mut swaps = empty.swaps;
        swaps.append(&mut layers[0].swaps);
        layers[0].swaps = swaps;
    }
    Ok(layers)
}

/// One round of disjoint nearest-neighbour SWAPs, one per blocked front gate
/// in index order. The lowest-index gate always gets its move.
fn swap_round(
    c: &Circuit,
    topo: &Topology,
    layout: &Layout,
    front: &[usize],
    clusters: &mut Clusters,
    targets: &mut HashMap<usize, Vec<(usize, usize)>>,
) -> Result<Vec<(usize, usize)>, RouteError> {
    let mut used = vec![false; topo.num_traps()];
    let mut swaps = Vec::new();
    for &g in front {
        let qs = &c.gates()[g].qubits;
        let traps = layout.traps_of(qs);
        let mut pick = None;
        if qs.len() == 2 {
            let (ta, tb) = (traps[0], traps[1]);
            for (from, to) in [(ta, tb), (tb, ta)] {
                if let Some(step) = topo.step_toward(from, to) {
                    if !used[from] && !used[step] {
                        pick = Some((from, step));
                        break;
                    }
                }
            }
        } else {
            if let Entry::Vacant(e) = targets.entry(g) {
                let slots = clusters.target(topo, &traps).ok_or(RouteError::NoCluster { gate: g, arity: qs.len() })?;
                let mut assigned = assign_slots(topo, &traps, &slots);
                let order = enclosed_first(topo, &slots);
                assigned.sort_by_key(|&(_, s)| order.iter().position(|&o| o == s));
                e.insert(assigned);
            }
            let settled: Vec<usize> = targets[&g].iter().filter(|&&(i, s)| traps[i] == s).map(|&(_, s)| s).collect();
            for &(i, slot) in &targets[&g] {
                let cur = traps[i];
                if cur == slot {
                    continue;
                }
                let others: Vec<usize> = traps.iter().copied().filter(|&t| t != cur).collect();
                let path = topo
                    .path_avoiding(cur, slot, &others)
                    .or_else(|| topo.path_avoiding(cur, slot, &settled))
                    .or_else(|| topo.path_avoiding(cur, slot, &[]))
                    .ok_or(RouteError::Stalled { gate: g })?;
                if !used[path[0]] && !used[path[1]] {
                    pick = Some((path[0], path[1]));
                    break;
                }
            }
        }
        for &t in &traps {
            used[t] = true;
        }
        if let Some((a, b)) = pick {
            used[a] = true;
            used[b] = true;
            swaps.push((a.min(b), a.max(b)));
        }
    }
    Ok(swaps)
}

fn reconfig_layers(c: &Circuit, topo: &Topology, fixed: &[Layer], seed: u64) -> Result<Vec<Layer>, RouteError> {
    let dag = c.dag();
    let mut prog = Progress::new(c, &dag);
    let snake = snake_order(topo.spec.rows, topo.spec.cols);
    let mut layers: Vec<Layer> = Vec::new();
    while prog.remaining > 0 {
        let mut cands = Vec::new();
        if layers.is_empty() {
            cands.push(fixed[0].layout.clone());
        }
        cands.push(front_packed(topo, &prog, &snake));
        let rest = c.gates().iter().enumerate().filter(|&(g, _)| !prog.done[g]).map(|(_, gate)| gate);
        cands.push(affinity(topo, c.num_qubits(), rest, seed));
        let mut best: Option<(usize, Layout)> = None;
        for l in cands {
            let k = prog.count(topo, &l);
            if best.as_ref().is_none_or(|(bk, _)| k > *bk) {
                best = Some((k, l));
            }
        }
        let (k, layout) = best.expect("at least one candidate");
        if k == 0 {
            return Err(RouteError::Stalled { gate: prog.front()[0] });
        }
        let gates = prog.run(topo, &layout);
        layers.push(Layer { layout, swaps: Vec::new(), gates });
    }
    Ok(layers)
}

/// Runs the closure under each layout in turn, dropping layouts that
/// execute nothing.
fn replay_layouts<'l>(c: &Circuit, topo: &Topology, layouts: impl Iterator<Item = &'l Layout>) -> Vec<Layer> {
    let dag = c.dag();
    let mut prog = Progress::new(c, &dag);
    let mut layers = Vec::new();
    for layout in layouts {
        if prog.remaining == 0 {
            break;
        }
        let gates = prog.run(topo, layout);
        if !gates.is_empty() {
            layers.push(Layer { layout: layout.clone(), swaps: Vec::new(), gates });
        }
    }
    layers
}

/// Places qubits so that as many front gates as possible execute: gates are
/// visited in dependency order and their operands packed onto free traps in
/// snake order, next to already placed partners.
fn front_packed(topo: &Topology, prog: &Progress, snake: &[usize]) -> Layout {
    let n = prog.c.num_qubits();
    let traps = topo.num_traps();
    let mut place: Vec<Option<usize>> = vec![None; n];
    let mut free = vec![true; traps];
    let mut indeg = prog.indeg.clone();
    let mut heap: BinaryHeap<Reverse<usize>> = prog.front().into_iter().map(Reverse).collect();
    while let Some(Reverse(g)) = heap.pop() {
        let qs = &prog.c.gates()[g].qubits;
        if qs.len() >= 2 && !try_place(topo, snake, qs, &mut place, &mut free) {
            continue;
        }
        for &s in prog.dag.successors(g) {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                heap.push(Reverse(s));
            }
        }
    }
    let mut spare = snake.iter().copied().filter(|&t| free[t]);
    let to_trap: Vec<usize> = place.iter().map(|p| p.unwrap_or_else(|| spare.next().expect("enough traps"))).collect();
    Layout::new(to_trap, traps).expect("packing is injective")
}

fn try_place(topo: &Topology, snake: &[usize], qs: &[usize], place: &mut [Option<usize>], free: &mut [bool]) -> bool {
    let mut anchor: Vec<usize> = qs.iter().filter_map(|&q| place[q]).collect();
    let unplaced: Vec<usize> = qs.iter().copied().filter(|&q| place[q].is_none()).collect();
    if unplaced.is_empty() {
        return topo.mappable(&anchor);
    }
    let nearest = |anchor: &[usize], free: &[bool]| -> Option<usize> {
        (0..topo.num_traps())
            .filter(|&t| free[t] && !anchor.contains(&t) && anchor.iter().all(|&a| topo.within_interaction(a, t)))
            .map(|t| (anchor.iter().map(|&a| topo.distance_um(a, t)).sum::<f64>(), t))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, t)| t)
    };
    let mut chosen = Vec::with_capacity(unplaced.len());
    if anchor.is_empty() {
        'seed: for &s in snake.iter().filter(|&&s| free[s]) {
            let mut trial = vec![s];
            while trial.len() < unplaced.len() {
                match nearest(&trial, free) {
                    Some(t) => trial.push(t),
                    None => continue 'seed,
                }
            }
            chosen = trial;
            break;
        }
        if chosen.is_empty() {
            return false;
        }
    } else {
        for _ in &unplaced {
            match nearest(&anchor, free) {
                Some(t) => {
                    anchor.push(t);
                    chosen.push(t);
                }
                None => return false,
            }
        }
    }
    for (&q, &t) in unplaced.iter().zip(&chosen) {
        place[q] = Some(t);
        free[t] = false;
    }
    true
}
