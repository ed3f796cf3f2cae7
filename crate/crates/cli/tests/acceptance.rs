//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line to stderr
//! (outside the harness capture) and then asserts.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use atomc_cli::args::ScenarioArg;
use atomc_cli::compile::{compile, RunConfig};
use atomc_cli::tradeoff::layer_reduction;
use atomc_core::circuit::{emit_qasm, generate, parse_qasm, BenchKind};
use atomc_core::fidelity::{crossover_teff, decomposition_breakeven, success_probability, swap_vs_shuttle, MultiGate};
use atomc_core::hardware::{coupling_graph, effective_coherence_time, restriction_conflict, Topology};
use atomc_core::mapper::{initial_layout, route, LayoutStrategy, RouteParams};
use atomc_core::rng::{stream_rng, Stream};
use atomc_core::scheduler::{idle_time, schedule};
use atomc_core::shuttle::{shuttle_duration, validate_move, AodGrid, Axis, Move, MoveViolation};
use atomc_core::{Circuit, Gate, GateKind, HardwareSpec, IdleMode, NativeSet};
use rand::Rng;

const BIN: &str = env!("CARGO_BIN_EXE_atomc");

fn verdict(id: u32, title: &str, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let detail = if failures.is_empty() { String::new() } else { format!(": {}", failures.join("; ")) };
    let line = format!("acceptance {id:02} {status} {title}{detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(failures.is_empty(), "criterion {id} failed: {}", failures.join("; "));
}

fn within(what: &str, got: f64, want: f64, tol: f64, out: &mut Vec<String>) {
    if !((got - want).abs() <= tol) {
        out.push(format!("{what} = {got}, expected {want} +/- {tol}"));
    }
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

#[test]
fn c01_effective_coherence_time() {
    let mut f = Vec::new();
    within("T_eff(100 s, 1.5 s)", effective_coherence_time(100.0, 1.5).unwrap(), 1.477833, 1e-6, &mut f);
    within("T_eff(1 s, 10 s)", effective_coherence_time(1.0, 10.0).unwrap(), 0.909091, 1e-6, &mut f);
    verdict(1, "effective coherence time", &f);
}

#[test]
fn c02_coupling_graph_matches_threshold_oracle() {
    let mut f = Vec::new();
    let mut rng = stream_rng(2, Stream::Test);
    for rows in 1..=6usize {
        for cols in 1..=6usize {
            for _ in 0..50 {
                let r: f64 = rng.gen_range(0.5..4.0);
                let spec = HardwareSpec::rubidium().with_grid(rows, cols).with_interaction_radius(r);
                // Integer squared distances in units of the spacing.
                let mut want = Vec::new();
                for a in 0..rows * cols {
                    for b in a + 1..rows * cols {
                        let dr = (a / cols) as f64 - (b / cols) as f64;
                        let dc = (a % cols) as f64 - (b % cols) as f64;
                        if dr * dr + dc * dc <= r * r {
                            want.push((a, b));
                        }
                    }
                }
                if coupling_graph(&spec).edges != want {
                    f.push(format!("{rows}x{cols} r_int={r}"));
                }
            }
        }
    }
    verdict(2, "coupling graph equals brute-force threshold graph", &f);
}

fn random_circuit(seed: u64) -> Circuit {
    let mut rng = stream_rng(seed, Stream::Test);
    let n = rng.gen_range(1..=8usize);
    let len = rng.gen_range(0..=12usize);
    let mut c = Circuit::new(format!("rand_{seed}"), n);
    for _ in 0..len {
        let arity = rng.gen_range(1..=3usize).min(n);
        let mut qs: Vec<usize> = (0..n).collect();
        for i in 0..arity {
            let j = rng.gen_range(i..n);
            qs.swap(i, j);
        }
        qs.truncate(arity);
        let kind = match arity {
            1 => {
                if rng.gen_bool(0.5) {
                    GateKind::H
                } else {
                    GateKind::rz(rng.gen_range(-3.0..3.0))
                }
            }
            2 => {
                if rng.gen_bool(0.5) {
                    GateKind::Cx
                } else {
                    GateKind::Cz
                }
            }
            _ => GateKind::Ccz,
        };
        c.push(Gate::new(kind, qs).unwrap()).unwrap();
    }
    c
}

#[test]
fn c03_scheduler_invariants() {
    const EPS: f64 = 1e-9;
    let mut f = Vec::new();
    let base = HardwareSpec::rubidium().with_grid(3, 3).with_interaction_radius(1.5);
    for seed in 0..200u64 {
        let c = random_circuit(seed);
        let l = initial_layout(&c, &base, LayoutStrategy::Random, seed).unwrap();
        let m = route(&c, &base, &l, &RouteParams::default()).unwrap();
        let mut last = 0.0;
        for k in [1.0, 2.0, 3.0] {
            let spec = base.clone().with_blocking_factor(k);
            let topo = Topology::new(&spec);
            let s = schedule(&m, &spec);
            let ops = &s.ops;
            for i in 0..ops.len() {
                for j in i + 1..ops.len() {
                    let (a, b) = (&ops[i], &ops[j]);
                    let share = a.traps.iter().any(|t| b.traps.contains(t));
                    let overlap = a.start_us < b.end_us - EPS && b.start_us < a.end_us - EPS;
                    if share && overlap {
                        f.push(format!("seed {seed} k={k}: ops {i},{j} overlap on a trap"));
                    }
                    if !share && overlap && a.is_entangling() && b.is_entangling() {
                        let pa = topo.positions_of(&a.traps);
                        let pb = topo.positions_of(&b.traps);
                        if restriction_conflict(&pa, &pb, spec.restriction_radius_um()).unwrap() {
                            f.push(format!("seed {seed} k={k}: ops {i},{j} violate the restriction radius"));
                        }
                    }
                }
            }
            // Program order between gates that share a circuit qubit.
            let op_of: Vec<usize> = {
                let mut v = vec![usize::MAX; c.len()];
                for (i, op) in m.ops.iter().enumerate() {
                    if let Some(g) = op.source {
                        v[g] = i;
                    }
                }
                v
            };
            for gi in 0..c.len() {
                for gj in gi + 1..c.len() {
                    let shared = c.gates()[gi].qubits.iter().any(|q| c.gates()[gj].qubits.contains(q));
                    if shared && ops[op_of[gi]].end_us > ops[op_of[gj]].start_us + EPS {
                        f.push(format!("seed {seed} k={k}: gates {gi},{gj} out of order"));
                    }
                }
            }
            let serial: f64 = ops.iter().map(|o| o.end_us - o.start_us).sum();
            let mut finish = vec![0.0f64; ops.len()];
            for i in 0..ops.len() {
                let ready = (0..i)
                    .filter(|&j| ops[j].traps.iter().any(|t| ops[i].traps.contains(t)))
                    .map(|j| finish[j])
                    .fold(0.0, f64::max);
                finish[i] = ready + (ops[i].end_us - ops[i].start_us);
            }
            let longest = finish.iter().copied().fold(0.0, f64::max);
            if s.makespan_us > serial + EPS || s.makespan_us + EPS < longest {
                f.push(format!("seed {seed} k={k}: makespan {} outside [{longest}, {serial}]", s.makespan_us));
            }
            if s.makespan_us + EPS < last {
                f.push(format!("seed {seed}: makespan fell from {last} to {} at k={k}", s.makespan_us));
            }
            last = s.makespan_us;
        }
    }
    f.truncate(5);
    verdict(3, "scheduler invariants on 200 random circuits", &f);
}

#[test]
fn c04_decomposition_breakeven() {
    let mut f = Vec::new();
    let rb = decomposition_breakeven(MultiGate::Ccz, &HardwareSpec::rubidium());
    let sr = decomposition_breakeven(MultiGate::Ccz, &HardwareSpec::strontium());
    if !rb.native_preferred {
        f.push("native CCZ not preferred on rubidium".into());
    }
    if !sr.native_preferred {
        f.push("native CCZ not preferred on strontium".into());
    }
    within("P_decomposed(rubidium CCZ)", rb.p_decomposed, 0.96166, 2e-4, &mut f);
    within("P_decomposed(strontium CCZ)", sr.p_decomposed, 0.86006, 2e-4, &mut f);
    verdict(4, "native CCZ against its decomposition", &f);
}

#[test]
fn c05_strontium_shuttling_beats_gate_swaps() {
    let mut f = Vec::new();
    let sr = HardwareSpec::strontium();
    within("t_SWAP(strontium)", sr.duration_us(&GateKind::Swap), 600.3, 1e-9, &mut f);
    within("shuttle_duration(3 um)", shuttle_duration(3.0, &sr), 320.0, 1e-9, &mut f);
    let bad: Vec<usize> = (1..=1000)
        .filter(|&n| {
            let (gate, shuttle) = swap_vs_shuttle(n, &sr, 3.0);
            shuttle <= gate
        })
        .collect();
    if !bad.is_empty() {
        f.push(format!("gate SWAP at least as good for n in {:?}", &bad[..bad.len().min(5)]));
    }
    verdict(5, "strontium shuttling preferable for n <= 1000", &f);
}

#[test]
fn c06_crossover_solver() {
    let mut f = Vec::new();
    let t = crossover_teff(1e5, 100, 0.995).unwrap();
    within("crossover(1e5 us, 100, 0.995)", t, 66_500.0, 66_500.0 * 1e-4, &mut f);
    let mut rng = stream_rng(6, Stream::Test);
    for _ in 0..200 {
        let t_idle = rng.gen_range(1.0..1e7);
        let n = rng.gen_range(1..500usize);
        let f_cx = rng.gen_range(0.9..0.99999);
        let closed = crossover_teff(t_idle, n, f_cx).unwrap();
        // F_idle(T) - F_mapping increases with T.
        let gap = |teff: f64| (-t_idle / teff).exp() - f_cx.powf(3.0 * n as f64);
        let (mut lo, mut hi) = (1e-9, 1.0);
        while gap(hi) < 0.0 {
            hi *= 2.0;
        }
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        if !rel_close(closed, root, 1e-9) {
            f.push(format!("t_idle={t_idle} n={n} F={f_cx}: {closed} vs bisection {root}"));
        }
    }
    f.truncate(5);
    verdict(6, "crossover coherence time", &f);
}

fn brute_force_ok(coords: &[f64], disp: &[f64], d_min: f64) -> bool {
    (0..coords.len()).all(|i| {
        (i + 1..coords.len()).all(|j| {
            (0..=32).all(|s| {
                let t = s as f64 / 32.0;
                (coords[j] + t * disp[j]) - (coords[i] + t * disp[i]) > d_min
            })
        })
    })
}

#[test]
fn c07_aod_validator() {
    let mut f = Vec::new();
    let one =
        |xs: Vec<f64>, dx: Vec<f64>| validate_move(&AodGrid::new(xs, vec![], 1.0).unwrap(), &Move { dx, dy: vec![] });
    if !one(vec![0.0, 3.0], vec![3.0, 3.0]).is_empty() {
        f.push("rigid translation rejected".into());
    }
    if one(vec![0.0, 3.0], vec![4.0, 0.0]) != vec![MoveViolation::Crossing { axis: Axis::X, index: 0 }] {
        f.push("crossing not reported".into());
    }
    if one(vec![0.0, 3.0], vec![0.0, -2.5]) != vec![MoveViolation::Gap { axis: Axis::X, index: 0, gap: 0.5 }] {
        f.push("gap not reported".into());
    }
    let mut rng = stream_rng(7, Stream::Test);
    for case in 0..1000 {
        let d_min = rng.gen_range(0..3) as f64;
        let line = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| {
            let mut x = 0.0;
            let coords: Vec<f64> = (0..n)
                .map(|_| {
                    x += rng.gen_range(3..8) as f64;
                    x
                })
                .collect();
            let disp: Vec<f64> = (0..n).map(|_| rng.gen_range(-6..=6) as f64).collect();
            (coords, disp)
        };
        let nx = rng.gen_range(0..=6);
        let ny = rng.gen_range(0..=4);
        let (xs, dx) = line(&mut rng, nx);
        let (ys, dy) = line(&mut rng, ny);
        let grid = AodGrid::new(xs.clone(), ys.clone(), d_min).unwrap();
        let got = validate_move(&grid, &Move { dx: dx.clone(), dy: dy.clone() }).is_empty();
        let want = brute_force_ok(&xs, &dx, d_min) && brute_force_ok(&ys, &dy, d_min);
        if got != want {
            f.push(format!("case {case}: validator {got}, brute force {want}"));
        }
    }
    f.truncate(5);
    verdict(7, "AOD move validator", &f);
}

#[test]
fn c08_idle_accounting() {
    let mut f = Vec::new();
    let spec = HardwareSpec::rubidium().with_grid(1, 3).with_interaction_radius(1.0);
    let cfg = RunConfig {
        circuit: generate(BenchKind::Ghz, 3, 0).unwrap(),
        spec: spec.clone(),
        native: NativeSet::with_flags(false, true).with(atomc_core::GateTag::Cx),
        layout: LayoutStrategy::Identity,
        scenario: ScenarioArg::Gate,
        seed: 0,
    };
    let out = compile(&cfg).unwrap();
    let s = &out.schedule;
    within("makespan", s.makespan_us, 1.9, 1e-9, &mut f);
    within("arity-weighted idle", idle_time(s, 3, IdleMode::ArityWeighted), 2.4, 1e-9, &mut f);
    within("literal idle", idle_time(s, 3, IdleMode::Literal), 3.8, 1e-9, &mut f);
    within("P", success_probability(s, &spec, 3).p, 0.987056, 1e-5, &mut f);
    within("reported P", out.report.p, 0.987056, 1e-5, &mut f);
    verdict(8, "idle accounting on ghz(3)", &f);
}

#[test]
fn c09_layer_reduction() {
    let mut f = Vec::new();
    let spec = HardwareSpec::rubidium();
    let native = NativeSet::with_flags(false, true).with(atomc_core::GateTag::Cx);
    let benches = [BenchKind::Twolocal, BenchKind::Qft, BenchKind::Graphstate];
    let rows = layer_reduction(&spec, &native, &benches, &[8, 16, 32], 0..5).unwrap();
    for r in &rows {
        if r.layers_reconfig > r.layers_fixed {
            f.push(format!("{} n={} seed={}: {} > {}", r.bench, r.n, r.seed, r.layers_reconfig, r.layers_fixed));
        }
    }
    if !rows.iter().any(|r| r.bench == "twolocal" && r.layers_reconfig < r.layers_fixed) {
        f.push("no strict reduction on any twolocal instance".into());
    }
    let baseline = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/layer_baseline.csv"))
        .expect("pinned baseline");
    let mut lines = baseline.lines().skip(1);
    for r in &rows {
        let got = format!("{},{},{},{},{}", r.bench, r.n, r.seed, r.layers_fixed, r.layers_reconfig);
        match lines.next() {
            Some(want) => {
                let (keys, ratio) = want.rsplit_once(',').unwrap();
                let ratio: f64 = ratio.parse().unwrap();
                if keys != got || (ratio - r.reduction_ratio).abs() > 1e-12 {
                    f.push(format!("baseline drift: `{want}` vs `{got},{}`", r.reduction_ratio));
                }
            }
            None => f.push(format!("no baseline row for `{got}`")),
        }
    }
    if lines.next().is_some() {
        f.push("baseline has extra rows".into());
    }
    f.truncate(5);
    verdict(9, "reconfigurable layers never exceed fixed layers", &f);
}

#[test]
fn c10_desk_scale_throughput() {
    let mut f = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    for kind in BenchKind::ALL {
        let out = dir.path().join(format!("{kind}.json"));
        let start = Instant::now();
        let status = Command::new(BIN)
            .args(["compile", "--bench", kind.name(), "--n", "120", "--grid", "12x10", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        let took = start.elapsed();
        if !status.success() {
            f.push(format!("{kind}: exit {status}"));
            continue;
        }
        if took >= Duration::from_secs(60) {
            f.push(format!("{kind}: {took:?}"));
        }
        let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        let p = report["p"].as_f64().unwrap_or(f64::NAN);
        let well_formed = report["violations"].as_array().is_some_and(|v| v.is_empty())
            && report["circuit"]["num_qubits"] == 120
            && report["n_swaps"].is_u64()
            && report["makespan_us"].as_f64().is_some_and(|t| t > 0.0)
            && report["t_idle_us"].as_f64().is_some_and(|t| t >= 0.0)
            && (0.0..=1.0).contains(&p)
            && report["hardware"]["rows"] == 12;
        if !well_formed {
            f.push(format!("{kind}: malformed report"));
        }
    }
    verdict(10, "n = 120 compiles on a 12x10 grid", &f);
}

fn run(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

#[test]
fn c11_round_trip_and_determinism() {
    let mut f = Vec::new();
    for kind in BenchKind::ALL {
        for n in kind.min_qubits()..=16 {
            for seed in 0..10 {
                let c = generate(kind, n, seed).unwrap();
                if parse_qasm(&emit_qasm(&c)).as_ref() != Ok(&c) {
                    f.push(format!("{kind} n={n} seed={seed}: QASM round trip differs"));
                }
            }
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let moves = dir.path().join("moves.json");
    fs::write(
        &moves,
        r#"{"grid":{"xs":[0,3],"ys":[0],"d_min":1},"moves":[{"dx":[1,1],"dy":[0]},{"dx":[4,0],"dy":[0]}]}"#,
    )
    .unwrap();
    let moves = moves.to_str().unwrap();
    let surface: Vec<Vec<&str>> = vec![
        vec!["compile", "--bench", "qft", "--n", "10", "--seed", "3", "--layout", "random"],
        vec!["compile", "--bench", "twolocal", "--n", "12", "--seed", "5", "--scenario", "shuttle-parallel"],
        vec!["compile", "--bench", "dj", "--n", "9", "--hw", "strontium", "--scenario", "shuttle-sequential"],
        vec!["compile", "--bench", "wstate", "--n", "8", "--idle-mode", "literal", "--decompose-multiqubit"],
        vec!["tradeoff", "teff-sweep", "--bench", "graphstate", "--n", "12", "--seed", "2"],
        vec!["tradeoff", "velocity", "--n-idle", "1:400:7"],
        vec!["tradeoff", "decomposition", "--hw", "strontium"],
        vec!["tradeoff", "shuttle-vs-gate", "--hw", "strontium", "--n-idle", "1:1000:9"],
        vec!["tradeoff", "layer-reduction", "--sizes", "8,12", "--seeds", "2", "--seed", "4"],
        vec!["validate-moves", moves],
        vec!["generate", "--bench", "qft", "--n", "6", "--seed", "1"],
    ];
    for args in &surface {
        let first = run(args);
        let second = run(args);
        if first != second {
            f.push(format!("`{}` differs between runs", args.join(" ")));
        }
        if first.1.is_empty() {
            f.push(format!("`{}` wrote nothing", args.join(" ")));
        }
    }
    // File outputs too.
    let files = |tag: &str| {
        let p = |name: &str| dir.path().join(format!("{tag}_{name}"));
        let (out, csv, qasm) = (p("r.json"), p("s.csv"), p("m.qasm"));
        let status = Command::new(BIN)
            .args(["compile", "--bench", "qft", "--n", "8", "--seed", "9", "--scenario", "shuttle-parallel"])
            .arg("--out")
            .arg(&out)
            .arg("--csv")
            .arg(&csv)
            .arg("--mapped-qasm")
            .arg(&qasm)
            .status()
            .unwrap();
        assert!(status.success());
        [out, csv, qasm].map(|p| fs::read(p).unwrap())
    };
    if files("a") != files("b") {
        f.push("compile output files differ between runs".into());
    }
    f.truncate(5);
    verdict(11, "QASM round trip and byte-identical outputs", &f);
}
