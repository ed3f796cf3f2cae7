use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::RouteError;
use crate::circuit::{Circuit, Gate};
use crate::hardware::{HardwareSpec, Topology};
use crate::rng::{stream_rng, Stream};

/// Bijection between circuit qubits and a subset of traps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayoutRepr", into = "LayoutRepr")]
pub struct Layout {
    to_trap: Vec<usize>,
    to_qubit: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
struct LayoutRepr {
    qubit_to_trap: Vec<usize>,
    num_traps: usize,
}

impl TryFrom<LayoutRepr> for Layout {
    type Error = RouteError;

    fn try_from(r: LayoutRepr) -> Result<Self, RouteError> {
        Layout::new(r.qubit_to_trap, r.num_traps)
    }
}

impl From<Layout> for LayoutRepr {
    fn from(l: Layout) -> Self {
        LayoutRepr { num_traps: l.to_qubit.len(), qubit_to_trap: l.to_trap }
    }
}

impl Layout {
    pub fn new(to_trap: Vec<usize>, num_traps: usize) -> Result<Self, RouteError> {
        if to_trap.len() > num_traps {
            return Err(RouteError::TooManyQubits { qubits: to_trap.len(), traps: num_traps });
        }
        let mut to_qubit = vec![None; num_traps];
        for (q, &t) in to_trap.iter().enumerate() {
            let slot = to_qubit.get_mut(t).ok_or_else(|| RouteError::BadLayout(format!("trap {t} out of range")))?;
            if slot.is_some() {
                return Err(RouteError::BadLayout(format!("trap {t} assigned twice")));
            }
            *slot = Some(q);
        }
        Ok(Layout { to_trap, to_qubit })
    }

    pub fn identity(n: usize, num_traps: usize) -> Result<Self, RouteError> {
        Layout::new((0..n).collect(), num_traps)
    }

    pub fn num_qubits(&self) -> usize {
        self.to_trap.len()
    }

    pub fn num_traps(&self) -> usize {
        self.to_qubit.len()
    }

    pub fn trap(&self, q: usize) -> usize {
        self.to_trap[q]
    }

    pub fn qubit(&self, trap: usize) -> Option<usize> {
        self.to_qubit[trap]
    }

    pub fn traps(&self) -> &[usize] {
        &self.to_trap
    }

    pub fn traps_of(&self, qubits: &[usize]) -> Vec<usize> {
        qubits.iter().map(|&q| self.to_trap[q]).collect()
    }

    /// Exchanges the contents of two traps; either may be empty.
    pub fn swap_traps(&mut self, a: usize, b: usize) {
        let (qa, qb) = (self.to_qubit[a], self.to_qubit[b]);
        self.to_qubit[a] = qb;
        self.to_qubit[b] = qa;
        if let Some(q) = qa {
            self.to_trap[q] = b;
        }
        if let Some(q) = qb {
            self.to_trap[q] = a;
        }
    }

    /// The layout seen by a circuit relabelled with `q -> perm[q]`.
    pub fn relabeled(&self, perm: &[usize]) -> Layout {
        let mut to_trap = vec![0; self.to_trap.len()];
        for (q, &t) in self.to_trap.iter().enumerate() {
            to_trap[perm[q]] = t;
        }
        Layout::new(to_trap, self.num_traps()).expect("permutation of a valid layout")
    }

    pub(crate) fn check_for(&self, n_qubits: usize, n_traps: usize) -> Result<(), RouteError> {
        if self.num_qubits() != n_qubits || self.num_traps() != n_traps {
            return Err(RouteError::BadLayout(format!(
                "layout maps {} qubits onto {} traps, expected {} onto {}",
                self.num_qubits(),
                self.num_traps(),
                n_qubits,
                n_traps
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutStrategy {
    Identity,
    Random,
    #[default]
    Affinity,
}

impl fmt::Display for LayoutStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayoutStrategy::Identity => "identity",
            LayoutStrategy::Random => "random",
            LayoutStrategy::Affinity => "affinity",
        })
    }
}

impl FromStr for LayoutStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "identity" => Ok(LayoutStrategy::Identity),
            "random" => Ok(LayoutStrategy::Random),
            "affinity" => Ok(LayoutStrategy::Affinity),
            _ => Err(format!("unknown layout strategy `{s}` (identity, random, affinity)")),
        }
    }
}

pub fn initial_layout(
    c: &Circuit,
    spec: &HardwareSpec,
    strategy: LayoutStrategy,
    seed: u64,
) -> Result<Layout, RouteError> {
    initial_layout_on(c, &Topology::new(spec), strategy, seed)
}

pub fn initial_layout_on(
    c: &Circuit,
    topo: &Topology,
    strategy: LayoutStrategy,
    seed: u64,
) -> Result<Layout, RouteError> {
    let n = c.num_qubits();
    let traps = topo.num_traps();
    if n > traps {
        return Err(RouteError::TooManyQubits { qubits: n, traps });
    }
    match strategy {
        LayoutStrategy::Identity => Layout::identity(n, traps),
        LayoutStrategy::Random => {
            let mut all: Vec<usize> = (0..traps).collect();
            all.shuffle(&mut stream_rng(seed, Stream::Layout));
            all.truncate(n);
            Layout::new(all, traps)
        }
        LayoutStrategy::Affinity => Ok(affinity(topo, n, c.gates().iter(), seed)),
    }
}

/// Greedy interaction-weighted placement. Qubits are placed in order of
/// their weight to already placed qubits, each on the free trap minimising
/// weighted hop distance to its placed partners. Ties between traps follow
/// a seeded random priority.
pub(crate) fn affinity<'a>(topo: &Topology, n: usize, gates: impl Iterator<Item = &'a Gate>, seed: u64) -> Layout {
    let traps = topo.num_traps();
    let mut weight = vec![0.0f64; n * n];
    let mut first_use = vec![usize::MAX; n];
    let mut start = None;
    for (i, g) in gates.enumerate() {
        for &q in &g.qubits {
            first_use[q] = first_use[q].min(i);
        }
        if g.qubits.len() < 2 {
            continue;
        }
        start.get_or_insert(g.qubits[0]);
        for (a, &qa) in g.qubits.iter().enumerate() {
            for &qb in &g.qubits[a + 1..] {
                weight[qa * n + qb] += 1.0;
                weight[qb * n + qa] += 1.0;
            }
        }
    }

    let mut priority: Vec<usize> = (0..traps).collect();
    priority.shuffle(&mut stream_rng(seed, Stream::Layout));
    let mut rank = vec![0; traps];
    for (r, &t) in priority.iter().enumerate() {
        rank[t] = r;
    }

    let mut to_trap = vec![usize::MAX; n];
    let mut free = vec![true; traps];
    // Accumulated attraction of each unplaced qubit to the placed set.
    let mut pull = vec![0.0f64; n];
    let mut placed: Vec<usize> = Vec::with_capacity(n);
    let mut last_trap = 0;
    for step in 0..n {
        let q = if step == 0 {
            start.unwrap_or(0)
        } else {
            (0..n)
                .filter(|&q| to_trap[q] == usize::MAX)
                .min_by(|&a, &b| pull[b].total_cmp(&pull[a]).then(first_use[a].cmp(&first_use[b])).then(a.cmp(&b)))
                .expect("unplaced qubit remains")
        };
        let trap = if step == 0 {
            0
        } else {
            let partners: Vec<(usize, f64)> =
                placed.iter().filter(|&&p| weight[q * n + p] > 0.0).map(|&p| (to_trap[p], weight[q * n + p])).collect();
            let cost = |t: usize| -> f64 {
                if partners.is_empty() {
                    topo.hops_or_max(t, last_trap) as f64
                } else {
                    partners.iter().map(|&(pt, w)| w * topo.hops_or_max(t, pt) as f64).sum()
                }
            };
            (0..traps)
                .filter(|&t| free[t])
                .map(|t| (cost(t), t))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(rank[a.1].cmp(&rank[b.1])))
                .expect("free trap remains")
                .1
        };
        to_trap[q] = trap;
        free[trap] = false;
        last_trap = trap;
        placed.push(q);
        for o in 0..n {
            pull[o] += weight[q * n + o];
        }
    }
    Layout::new(to_trap, traps).expect("affinity placement is injective")
}

/// Boustrophedon trap order: consecutive traps are grid neighbours.
pub(crate) fn snake_order(rows: usize, cols: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        if r % 2 == 0 {
            order.extend((0..cols).map(|c| r * cols + c));
        } else {
            order.extend((0..cols).rev().map(|c| r * cols + c));
        }
    }
    order
}
