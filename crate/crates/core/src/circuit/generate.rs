//! Deterministic benchmark circuits.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, GateKind};
use crate::rng::{stream_rng, Stream};

/// Repetitions of the rotation + entangler block in the two-local ansatz.
pub const TWO_LOCAL_REPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchKind {
    Ghz,
    Wstate,
    Graphstate,
    Dj,
    Qft,
    Twolocal,
}

impl BenchKind {
    pub const ALL: [BenchKind; 6] =
        [BenchKind::Dj, BenchKind::Ghz, BenchKind::Graphstate, BenchKind::Qft, BenchKind::Twolocal, BenchKind::Wstate];

    pub fn name(self) -> &'static str {
        match self {
            BenchKind::Ghz => "ghz",
            BenchKind::Wstate => "wstate",
            BenchKind::Graphstate => "graphstate",
            BenchKind::Dj => "dj",
            BenchKind::Qft => "qft",
            BenchKind::Twolocal => "twolocal",
        }
    }

    pub fn min_qubits(self) -> usize {
        match self {
            BenchKind::Graphstate => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for BenchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "ghz" => Ok(BenchKind::Ghz),
            "wstate" => Ok(BenchKind::Wstate),
            "graphstate" => Ok(BenchKind::Graphstate),
            "dj" => Ok(BenchKind::Dj),
            "qft" => Ok(BenchKind::Qft),
            "twolocal" | "twolocalrandom" => Ok(BenchKind::Twolocal),
            _ => Err(format!("unknown benchmark `{s}`")),
        }
    }
}

/// Builds a benchmark circuit. Output depends only on `(kind, n, seed)`.
pub fn generate(kind: BenchKind, n: usize, seed: u64) -> Result<Circuit, CircuitError> {
    if n < kind.min_qubits() {
        return Err(CircuitError::TooFewQubits { kind, min: kind.min_qubits(), n });
    }
    let mut c = Circuit::new(format!("{kind}_{n}"), n);
    match kind {
        BenchKind::Ghz => ghz(&mut c),
        BenchKind::Wstate => wstate(&mut c),
        BenchKind::Graphstate => graphstate(&mut c, seed),
        BenchKind::Dj => dj(&mut c, seed),
        BenchKind::Qft => qft(&mut c, true),
        BenchKind::Twolocal => two_local(&mut c, seed, TWO_LOCAL_REPS),
    }
    Ok(c)
}

fn ghz(c: &mut Circuit) {
    c.add(GateKind::H, &[0]);
    for q in 0..c.num_qubits() - 1 {
        c.add(GateKind::Cx, &[q, q + 1]);
    }
}

// Amplitude is split down the register with controlled-RY steps, each written
// as ry(-t) / cz / ry(t) on the target, then a CX ladder disentangles.
fn wstate(c: &mut Circuit) {
    let n = c.num_qubits();
    c.add(GateKind::X, &[n - 1]);
    for k in 1..n {
        let theta = (1.0 / (n - k + 1) as f64).sqrt().acos();
        let (ctrl, tgt) = (n - k, n - k - 1);
        c.add(GateKind::ry(-theta), &[tgt]);
        c.add(GateKind::Cz, &[ctrl, tgt]);
        c.add(GateKind::ry(theta), &[tgt]);
    }
    for k in 1..n {
        c.add(GateKind::Cx, &[n - k - 1, n - k]);
    }
}

/// Random 2-regular graph: a random permutation cut into cycles of length >= 3.
fn random_two_regular(n: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = stream_rng(seed, Stream::Graph);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = if left < 6 { left } else { rng.gen_range(3..=left - 3) };
        sizes.push(size);
        left -= size;
    }
    let mut edges = Vec::with_capacity(n);
    let mut start = 0;
    for size in sizes {
        let cycle = &order[start..start + size];
        for i in 0..size {
            let (a, b) = (cycle[i], cycle[(i + 1) % size]);
            edges.push((a.min(b), a.max(b)));
        }
        start += size;
    }
    edges.sort_unstable();
    edges
}

fn graphstate(c: &mut Circuit, seed: u64) {
    let n = c.num_qubits();
    for q in 0..n {
        c.add(GateKind::H, &[q]);
    }
    for (a, b) in random_two_regular(n, seed) {
        c.add(GateKind::Cz, &[a, b]);
    }
}

// Inputs 0..n-1, ancilla n-1. Balanced oracle f(x) = s.x for a random
// non-zero mask s.
fn dj(c: &mut Circuit, seed: u64) {
    let n = c.num_qubits();
    let anc = n - 1;
    let mut rng = stream_rng(seed, Stream::Oracle);
    let mut mask: Vec<bool> = (0..anc).map(|_| rng.gen_bool(0.5)).collect();
    if !mask.iter().any(|&b| b) {
        let i = rng.gen_range(0..anc);
        mask[i] = true;
    }
    c.add(GateKind::X, &[anc]);
    for q in 0..n {
        c.add(GateKind::H, &[q]);
    }
    for (q, _) in mask.iter().enumerate().filter(|(_, &b)| b) {
        c.add(GateKind::Cx, &[q, anc]);
    }
    for q in 0..anc {
        c.add(GateKind::H, &[q]);
    }
}

fn qft(c: &mut Circuit, final_swaps: bool) {
    let n = c.num_qubits();
    for j in 0..n {
        c.add(GateKind::H, &[j]);
        for k in j + 1..n {
            let angle = PI / f64::powi(2.0, (k - j) as i32);
            c.add(GateKind::Cp { angle }, &[k, j]);
        }
    }
    if final_swaps {
        for q in 0..n / 2 {
            c.add(GateKind::Swap, &[q, n - 1 - q]);
        }
    }
}

fn two_local(c: &mut Circuit, seed: u64, reps: usize) {
    let n = c.num_qubits();
    let mut rng = stream_rng(seed, Stream::Angles);
    let mut rotations = |c: &mut Circuit| {
        for q in 0..n {
            let angle = rng.gen_range(0.0..2.0 * PI);
            c.add(GateKind::ry(angle), &[q]);
        }
    };
    for _ in 0..reps {
        rotations(c);
        for q in 0..n - 1 {
            c.add(GateKind::Cx, &[q, q + 1]);
        }
        if n > 2 {
            c.add(GateKind::Cx, &[n - 1, 0]);
        }
    }
    rotations(c);
}
