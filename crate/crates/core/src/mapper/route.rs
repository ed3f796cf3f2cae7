use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Layout, MappedCircuit, MappedOp, RouteError};
use crate::circuit::{Circuit, DepGraph, GateKind};
use crate::hardware::{HardwareSpec, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteParams {
    pub lookahead_size: usize,
    pub lookahead_weight: f64,
    pub decay: f64,
}

impl Default for RouteParams {
    fn default() -> Self {
        RouteParams { lookahead_size: 20, lookahead_weight: 0.5, decay: 0.001 }
    }
}

pub fn route(
    c: &Circuit,
    spec: &HardwareSpec,
    layout: &Layout,
    params: &RouteParams,
) -> Result<MappedCircuit, RouteError> {
    route_on(c, &Topology::new(spec), layout, params)
}

pub fn route_on(
    c: &Circuit,
    topo: &Topology,
    layout: &Layout,
    params: &RouteParams,
) -> Result<MappedCircuit, RouteError> {
    layout.check_for(c.num_qubits(), topo.num_traps())?;
    check_connected(c, topo, layout)?;
    let mut r = Router {
        topo,
        c,
        dag: c.dag(),
        layout: layout.clone(),
        ops: Vec::new(),
        n_swaps: 0,
        clusters: Clusters::default(),
    };
    r.run(params)?;
    Ok(MappedCircuit {
        name: c.name.clone(),
        num_qubits: c.num_qubits(),
        ops: r.ops,
        initial_layout: layout.clone(),
        final_layout: r.layout,
        n_swaps: r.n_swaps,
    })
}

/// SWAPs keep every qubit inside its coupling-graph component, so operands
/// split across components can never meet.
pub(crate) fn check_connected(c: &Circuit, topo: &Topology, layout: &Layout) -> Result<(), RouteError> {
    for (i, g) in c.gates().iter().enumerate() {
        let t0 = layout.trap(g.qubits[0]);
        if g.qubits[1..].iter().any(|&q| topo.hops(t0, layout.trap(q)).is_none()) {
            return Err(RouteError::Disconnected { gate: i });
        }
    }
    Ok(())
}

/// Per-arity cache of the greedy clique grown around each trap.
#[derive(Debug, Default)]
pub(crate) struct Clusters {
    by_arity: HashMap<usize, Vec<Option<Vec<usize>>>>,
}

impl Clusters {
    fn table(&mut self, topo: &Topology, k: usize) -> &[Option<Vec<usize>>] {
        self.by_arity.entry(k).or_insert_with(|| (0..topo.num_traps()).map(|c| cluster(topo, c, k)).collect())
    }

    /// Slots for a `k`-operand gate whose operands sit on `traps`: the
    /// cluster around the centre with least total hop distance.
    pub(crate) fn target(&mut self, topo: &Topology, traps: &[usize]) -> Option<Vec<usize>> {
        let table = self.table(topo, traps.len());
        let mut best: Option<(u64, usize)> = None;
        for (center, slots) in table.iter().enumerate() {
            if slots.is_none() {
                continue;
            }
            let mut cost = 0u64;
            let mut reachable = true;
            for &t in traps {
                match topo.hops(t, center) {
                    Some(h) => cost += h as u64,
                    None => reachable = false,
                }
            }
            if reachable && best.is_none_or(|(b, _)| cost < b) {
                best = Some((cost, center));
            }
        }
        best.map(|(_, c)| table[c].clone().expect("cluster exists"))
    }
}

/// `center` plus the nearest traps (by distance, then index) that stay
/// pairwise within the interaction radius.
fn cluster(topo: &Topology, center: usize, k: usize) -> Option<Vec<usize>> {
    let mut cand: Vec<usize> = (0..topo.num_traps()).filter(|&t| t != center).collect();
    cand.sort_by(|&a, &b| topo.distance_um(center, a).total_cmp(&topo.distance_um(center, b)).then(a.cmp(&b)));
    let mut chosen = vec![center];
    for t in cand {
        if chosen.len() == k {
            break;
        }
        if !topo.within_interaction(center, t) {
            break;
        }
        if chosen.iter().all(|&c| topo.within_interaction(c, t)) {
            chosen.push(t);
        }
    }
    (chosen.len() == k).then_some(chosen)
}

/// Nearest-first assignment of operands to slots: `(operand position, slot)`
/// in the order operands should be moved. Ties go to the earlier operand,
/// then the earlier slot.
pub(crate) fn assign_slots(topo: &Topology, traps: &[usize], slots: &[usize]) -> Vec<(usize, usize)> {
    let mut op_free = vec![true; traps.len()];
    let mut slot_free = vec![true; slots.len()];
    let mut out = Vec::with_capacity(traps.len());
    for _ in 0..traps.len() {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, &t) in traps.iter().enumerate() {
            if !op_free[i] {
                continue;
            }
            for (j, &s) in slots.iter().enumerate() {
                if slot_free[j] {
                    let h = topo.hops_or_max(t, s);
                    if best.is_none_or(|(bh, _, _)| h < bh) {
                        best = Some((h, i, j));
                    }
                }
            }
        }
        let (_, i, j) = best.expect("as many slots as operands");
        op_free[i] = false;
        slot_free[j] = false;
        out.push((i, slots[j]));
    }
    out
}

struct Router<'a> {
    topo: &'a Topology,
    c: &'a Circuit,
    dag: DepGraph,
    layout: Layout,
    ops: Vec<MappedOp>,
    n_swaps: usize,
    clusters: Clusters,
}

impl Router<'_> {
    fn executable(&self, g: usize) -> bool {
        let qs = &self.c.gates()[g].qubits;
        qs.len() < 2 || self.topo.mappable(&self.layout.traps_of(qs))
    }

    fn emit(&mut self, g: usize) {
        let gate = &self.c.gates()[g];
        self.ops.push(MappedOp {
            kind: gate.kind,
            traps: self.layout.traps_of(&gate.qubits),
            qubits: gate.qubits.iter().map(|&q| Some(q)).collect(),
            source: Some(g),
        });
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.ops.push(MappedOp {
            kind: GateKind::Swap,
            traps: vec![a, b],
            qubits: vec![self.layout.qubit(a), self.layout.qubit(b)],
            source: None,
        });
        self.layout.swap_traps(a, b);
        self.n_swaps += 1;
    }

    fn gate_cost(&self, g: usize, remap: Option<(usize, usize)>) -> u64 {
        let trap = |q: usize| {
            let t = self.layout.trap(q);
            match remap {
                Some((a, b)) if t == a => b,
                Some((a, b)) if t == b => a,
                _ => t,
            }
        };
        let qs = &self.c.gates()[g].qubits;
        let mut cost = 0u64;
        for (i, &qa) in qs.iter().enumerate() {
            for &qb in &qs[i + 1..] {
                cost += self.topo.hops_or_max(trap(qa), trap(qb)) as u64;
            }
        }
        cost
    }

    fn run(&mut self, params: &RouteParams) -> Result<(), RouteError> {
        let n = self.c.num_qubits();
        let mut indeg = self.dag.in_degrees();
        let mut front: BTreeSet<usize> = (0..indeg.len()).filter(|&g| indeg[g] == 0).collect();
        let mut decay = vec![1.0f64; n];
        let mut stall = 0usize;
        loop {
            let mut progressed = false;
            loop {
                let ready: Vec<usize> = front.iter().copied().filter(|&g| self.executable(g)).collect();
                if ready.is_empty() {
                    break;
                }
                for g in ready {
                    front.remove(&g);
                    self.emit(g);
                    for &s in self.dag.successors(g) {
                        indeg[s] -= 1;
                        if indeg[s] == 0 {
                            front.insert(s);
                        }
                    }
                }
                progressed = true;
            }
            let Some(&first) = front.first() else { break };
            if progressed {
                decay.fill(1.0);
                stall = 0;
            }
            let qs = self.c.gates()[first].qubits.clone();
            if qs.len() >= 3 {
                self.gather(first, &qs)?;
                continue;
            }
            let limit = 10 + 3 * self.gate_cost(first, None) as usize;
            if stall >= limit {
                self.force_pair(first, qs[0], qs[1])?;
                stall = 0;
                continue;
            }
            let (a, b) = self.best_swap(&front, &decay, params);
            for t in [a, b] {
                if let Some(q) = self.layout.qubit(t) {
                    decay[q] += params.decay;
                }
            }
            self.swap(a, b);
            stall += 1;
        }
        Ok(())
    }

    fn extended_set(&self, front: &BTreeSet<usize>, size: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut seen: BTreeSet<usize> = front.clone();
        let mut queue: VecDeque<usize> = front.iter().flat_map(|&g| self.dag.successors(g).iter().copied()).collect();
        while let Some(g) = queue.pop_front() {
            if out.len() >= size {
                break;
            }
            if !seen.insert(g) {
                continue;
            }
            if self.c.gates()[g].qubits.len() >= 2 {
                out.push(g);
            }
            queue.extend(self.dag.successors(g).iter().copied());
        }
        out
    }

    fn best_swap(&self, front: &BTreeSet<usize>, decay: &[f64], params: &RouteParams) -> (usize, usize) {
        let ext = self.extended_set(front, params.lookahead_size);
        let gates: Vec<usize> = front.iter().copied().chain(ext.iter().copied()).collect();
        let n_front = front.len();
        let base: Vec<u64> = gates.iter().map(|&g| self.gate_cost(g, None)).collect();
        let mut by_qubit: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &g) in gates.iter().enumerate() {
            for &q in &self.c.gates()[g].qubits {
                by_qubit.entry(q).or_default().push(i);
            }
        }
        let front_sum: u64 = base[..n_front].iter().sum();
        let ext_sum: u64 = base[n_front..].iter().sum();

        let mut cands = BTreeSet::new();
        for &g in front {
            for &q in &self.c.gates()[g].qubits {
                let t = self.layout.trap(q);
                for &u in self.topo.neighbors(t) {
                    cands.insert((t.min(u), t.max(u)));
                }
            }
        }

        let mut best: Option<(f64, (usize, usize))> = None;
        let mut touched: Vec<usize> = Vec::new();
        for &(a, b) in &cands {
            let (qa, qb) = (self.layout.qubit(a), self.layout.qubit(b));
            touched.clear();
            for q in [qa, qb].into_iter().flatten() {
                if let Some(list) = by_qubit.get(&q) {
                    touched.extend_from_slice(list);
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let (mut fs, mut es) = (front_sum as i64, ext_sum as i64);
            for &i in &touched {
                let delta = self.gate_cost(gates[i], Some((a, b))) as i64 - base[i] as i64;
                if i < n_front {
                    fs += delta;
                } else {
                    es += delta;
                }
            }
            let mut h = fs as f64 / n_front as f64;
            if !ext.is_empty() {
                h += params.lookahead_weight * es as f64 / ext.len() as f64;
            }
            let d = [qa, qb].into_iter().flatten().map(|q| decay[q]).fold(1.0f64, f64::max);
            let score = d * h;
            if best.is_none_or(|(s, _)| score < s - 1e-12) {
                best = Some((score, (a, b)));
            }
        }
        best.expect("a blocked gate has a neighbouring trap").1
    }

    /// Walks the first operand along a shortest path until it neighbours
    /// the second.
    fn force_pair(&mut self, g: usize, qa: usize, qb: usize) -> Result<(), RouteError> {
        let path = self
            .topo
            .path_avoiding(self.layout.trap(qa), self.layout.trap(qb), &[])
            .ok_or(RouteError::Disconnected { gate: g })?;
        for w in path[..path.len() - 1].windows(2) {
            self.swap(w[0], w[1]);
        }
        Ok(())
    }

    /// Moves every operand into a cluster of mutually interacting traps,
    /// nearest operand first, never displacing an already settled one. If a
    /// free slot gets walled in, the remaining slots are refilled starting
    /// with the most enclosed.
    fn gather(&mut self, g: usize, qs: &[usize]) -> Result<(), RouteError> {
        let traps = self.layout.traps_of(qs);
        let slots =
            self.clusters.target(self.topo, &traps).ok_or(RouteError::NoCluster { gate: g, arity: qs.len() })?;
        let mut settled: Vec<usize> = Vec::new();
        for (i, slot) in assign_slots(self.topo, &traps, &slots) {
            let from = self.layout.trap(qs[i]);
            match self.topo.path_avoiding(from, slot, &settled) {
                Some(path) => {
                    for w in path.windows(2) {
                        self.swap(w[0], w[1]);
                    }
                    settled.push(slot);
                }
                None => return self.gather_enclosed_first(g, qs, &slots),
            }
        }
        Ok(())
    }

    fn gather_enclosed_first(&mut self, g: usize, qs: &[usize], slots: &[usize]) -> Result<(), RouteError> {
        let mut settled: Vec<usize> = Vec::new();
        let mut done = vec![false; qs.len()];
        for slot in enclosed_first(self.topo, slots) {
            let mut best: Option<(usize, Vec<usize>)> = None;
            for (i, &q) in qs.iter().enumerate() {
                if done[i] {
                    continue;
                }
                if let Some(path) = self.topo.path_avoiding(self.layout.trap(q), slot, &settled) {
                    if best.as_ref().is_none_or(|(_, p)| path.len() < p.len()) {
                        best = Some((i, path));
                    }
                }
            }
            let (i, path) = best.ok_or(RouteError::Stalled { gate: g })?;
            for w in path.windows(2) {
                self.swap(w[0], w[1]);
            }
            done[i] = true;
            settled.push(slot);
        }
        Ok(())
    }
}

/// Slots ordered by how few coupling neighbours they have outside the
/// cluster, ties by trap index.
pub(crate) fn enclosed_first(topo: &Topology, slots: &[usize]) -> Vec<usize> {
    let mut order = slots.to_vec();
    order.sort_by_key(|&s| (topo.neighbors(s).iter().filter(|n| !slots.contains(n)).count(), s));
    order
}
