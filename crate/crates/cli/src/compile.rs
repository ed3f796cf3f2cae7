use std::collections::BTreeMap;

use anyhow::{bail, Result};
use atomc_core::circuit::{emit_qasm, lower_to_native};
use atomc_core::fidelity::success_probability;
use atomc_core::hardware::Topology;
use atomc_core::mapper::{initial_layout_on, route_on, verify_on, LayoutStrategy, RouteParams};
use atomc_core::scheduler::{metrics, schedule_on};
use atomc_core::shuttle::{schedule_shuttle_plan, shuttles_from_swaps, Scenario};
use atomc_core::{Circuit, HardwareSpec, MappedCircuit, NativeSet, Schedule};
use serde::Serialize;

use crate::args::ScenarioArg;

/// Everything one compile run depends on.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub circuit: Circuit,
    pub spec: HardwareSpec,
    pub native: NativeSet,
    pub layout: LayoutStrategy,
    pub scenario: ScenarioArg,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitSummary {
    pub name: String,
    pub num_qubits: usize,
    pub input_gates: usize,
    pub native_gates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub layout: String,
    pub scenario: &'static str,
    pub idle_mode: String,
    pub native: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompileReport {
    pub circuit: CircuitSummary,
    pub settings: Settings,
    pub n_swaps: usize,
    pub n_shuttles: usize,
    pub makespan_us: f64,
    pub depth: usize,
    pub t_idle_us: f64,
    pub p: f64,
    pub log_p: f64,
    pub gate_factor: f64,
    pub idle_factor: f64,
    pub counts: BTreeMap<String, usize>,
    pub initial_layout: Vec<usize>,
    pub final_layout: Vec<usize>,
    pub violations: Vec<String>,
    pub hardware: HardwareSpec,
}

pub struct Compiled {
    pub report: CompileReport,
    pub mapped: MappedCircuit,
    pub schedule: Schedule,
}

impl Compiled {
    pub fn mapped_qasm(&self) -> String {
        emit_qasm(&self.mapped.to_physical())
    }
}

pub fn compile(cfg: &RunConfig) -> Result<Compiled> {
    compile_on(cfg, &Topology::new(&cfg.spec))
}

pub fn compile_on(cfg: &RunConfig, topo: &Topology) -> Result<Compiled> {
    let spec = &cfg.spec;
    let lowered = lower_to_native(&cfg.circuit, &cfg.native)?;
    let start = initial_layout_on(&lowered, topo, cfg.layout, cfg.seed)?;
    let mapped = route_on(&lowered, topo, &start, &RouteParams::default())?;
    let violations: Vec<String> = verify_on(&mapped, topo).iter().map(ToString::to_string).collect();
    let (schedule, n_shuttles) = match cfg.scenario {
        ScenarioArg::Gate => (schedule_on(&mapped, topo), 0),
        ScenarioArg::ShuttleParallel | ScenarioArg::ShuttleSequential => {
            let scenario =
                if cfg.scenario == ScenarioArg::ShuttleParallel { Scenario::Parallel } else { Scenario::Sequential };
            let plan = shuttles_from_swaps(&mapped, spec);
            (schedule_shuttle_plan(&plan, &mapped, spec, scenario), plan.ops.len())
        }
    };
    let n = lowered.num_qubits();
    let fid = success_probability(&schedule, spec, n);
    let m = metrics(&schedule);
    let report = CompileReport {
        circuit: CircuitSummary {
            name: cfg.circuit.name.clone(),
            num_qubits: n,
            input_gates: cfg.circuit.len(),
            native_gates: lowered.len(),
        },
        settings: Settings {
            seed: cfg.seed,
            layout: cfg.layout.to_string(),
            scenario: cfg.scenario.name(),
            idle_mode: spec.idle_mode.to_string(),
            native: cfg.native.tags().map(|t| t.to_string()).collect(),
        },
        n_swaps: mapped.n_swaps,
        n_shuttles,
        makespan_us: schedule.makespan_us,
        depth: m.depth,
        t_idle_us: fid.t_idle_us,
        p: fid.p,
        log_p: fid.log_p,
        gate_factor: fid.gate_factor,
        idle_factor: fid.idle_factor,
        counts: fid.counts,
        initial_layout: mapped.initial_layout.traps().to_vec(),
        final_layout: mapped.final_layout.traps().to_vec(),
        violations,
        hardware: spec.clone(),
    };
    Ok(Compiled { report, mapped, schedule })
}

/// Fails when routing produced an invalid circuit.
pub fn check(report: &CompileReport) -> Result<()> {
    if !report.violations.is_empty() {
        bail!("routed circuit failed verification: {}", report.violations.join("; "));
    }
    Ok(())
}
