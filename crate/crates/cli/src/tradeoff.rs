use anyhow::{bail, Context, Result};
use atomc_core::circuit::{generate, lower_to_native, BenchKind};
use atomc_core::fidelity::{
    crossover_teff, decomposition_breakeven, required_velocity, swap_vs_shuttle, MultiGate, Velocity,
};
use atomc_core::hardware::Topology;
use atomc_core::mapper::{route_layered_on, LayerMode, LayoutStrategy};
use atomc_core::shuttle::shuttle_layer_stats;
use atomc_core::{Circuit, HardwareSpec, NativeSet};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::ScenarioArg;
use crate::compile::{compile, RunConfig};

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeffRow {
    pub r_int: f64,
    pub status: String,
    pub n_swaps: Option<usize>,
    pub makespan_us: Option<f64>,
    pub t_idle_us: Option<f64>,
    pub f_cx: f64,
    pub t_eff_us: f64,
    pub teff_crossover_us: Option<f64>,
    /// The hardware's coherence time exceeds the crossover, so SWAP error
    /// dominates idle error.
    pub swap_dominated: Option<bool>,
}

pub fn teff_sweep(
    circuit: &Circuit,
    spec: &HardwareSpec,
    native: &NativeSet,
    layout: LayoutStrategy,
    seed: u64,
    radii: &[f64],
) -> Vec<TeffRow> {
    radii
        .par_iter()
        .map(|&r| {
            let spec = spec.clone().with_interaction_radius(r);
            let (f_cx, _) = spec.cx_composite();
            let t_eff = spec.t_eff_us();
            let cfg = RunConfig {
                circuit: circuit.clone(),
                spec,
                native: native.clone(),
                layout,
                scenario: ScenarioArg::Gate,
                seed,
            };
            match compile(&cfg) {
                Ok(c) => {
                    let r_ = &c.report;
                    let cross = crossover_teff(r_.t_idle_us, r_.n_swaps, f_cx);
                    TeffRow {
                        r_int: r,
                        status: "ok".into(),
                        n_swaps: Some(r_.n_swaps),
                        makespan_us: Some(r_.makespan_us),
                        t_idle_us: Some(r_.t_idle_us),
                        f_cx,
                        t_eff_us: t_eff,
                        teff_crossover_us: cross,
                        swap_dominated: cross.map(|t| t_eff > t),
                    }
                }
                Err(e) => TeffRow {
                    r_int: r,
                    status: format!("{e:#}"),
                    n_swaps: None,
                    makespan_us: None,
                    t_idle_us: None,
                    f_cx,
                    t_eff_us: t_eff,
                    teff_crossover_us: None,
                    swap_dominated: None,
                },
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityRow {
    pub n_idle: usize,
    pub dist_um: f64,
    pub t_swap_us: f64,
    pub t_shuttle_us: f64,
    pub result: &'static str,
    /// Empty unless the shuttle is feasible.
    pub velocity_um_per_us: Option<f64>,
}

pub fn velocity(spec: &HardwareSpec, n_idle: &[usize], dist_um: f64) -> Result<Vec<VelocityRow>> {
    if !(dist_um > 0.0 && dist_um.is_finite()) {
        bail!("--dist must be positive, got {dist_um}");
    }
    let t_swap = 3.0 * spec.cx_composite().1;
    Ok(n_idle
        .par_iter()
        .map(|&n| {
            let v = required_velocity(n, spec, dist_um);
            VelocityRow {
                n_idle: n,
                dist_um,
                t_swap_us: t_swap,
                t_shuttle_us: v.t_shuttle_us(),
                result: match v {
                    Velocity::Feasible { .. } => "feasible",
                    Velocity::BelowTrapSwitching { .. } => "below_trap_switching",
                    Velocity::AboveLimit { .. } => "above_limit",
                },
                velocity_um_per_us: v.velocity(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionRow {
    pub gate: &'static str,
    pub f_native: f64,
    pub p_native: f64,
    pub p_decomposed: f64,
    pub breakeven_fidelity: f64,
    pub idle_native_us: f64,
    pub idle_decomposed_us: f64,
    pub preferred: &'static str,
}

pub fn decomposition(spec: &HardwareSpec) -> Vec<DecompositionRow> {
    [(MultiGate::Ccz, "ccz", spec.fidelities.ccz), (MultiGate::Cccz, "cccz", spec.fidelities.cccz)]
        .into_iter()
        .map(|(g, name, f)| {
            let b = decomposition_breakeven(g, spec);
            DecompositionRow {
                gate: name,
                f_native: f,
                p_native: b.p_native,
                p_decomposed: b.p_decomposed,
                breakeven_fidelity: b.breakeven_fidelity,
                idle_native_us: b.idle_native_us,
                idle_decomposed_us: b.idle_decomposed_us,
                preferred: if b.native_preferred { "native" } else { "decomposed" },
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShuttleVsGateRow {
    pub n_idle: usize,
    pub dist_um: f64,
    pub f_swap: f64,
    pub f_shuttle: f64,
    pub preferred: &'static str,
}

pub fn shuttle_vs_gate(spec: &HardwareSpec, n_idle: &[usize], dist_um: f64) -> Result<Vec<ShuttleVsGateRow>> {
    if !(dist_um >= 0.0 && dist_um.is_finite()) {
        bail!("--dist must be non-negative, got {dist_um}");
    }
    Ok(n_idle
        .par_iter()
        .map(|&n| {
            let (g, s) = swap_vs_shuttle(n, spec, dist_um);
            ShuttleVsGateRow {
                n_idle: n,
                dist_um,
                f_swap: g,
                f_shuttle: s,
                preferred: if s > g { "shuttle" } else { "gate" },
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerRow {
    pub bench: String,
    pub n: usize,
    pub seed: u64,
    pub layers_fixed: usize,
    pub layers_reconfig: usize,
    pub reduction_ratio: f64,
    pub shuttles_fixed: usize,
    pub shuttles_reconfig: usize,
    pub execution_fixed_us: f64,
    pub execution_reconfig_us: f64,
    pub shuttle_fraction_fixed: f64,
    pub shuttle_fraction_reconfig: f64,
}

pub fn layer_reduction(
    spec: &HardwareSpec,
    native: &NativeSet,
    benches: &[BenchKind],
    sizes: &[usize],
    seeds: std::ops::Range<u64>,
) -> Result<Vec<LayerRow>> {
    if benches.is_empty() || sizes.is_empty() || seeds.is_empty() {
        bail!("layer reduction needs at least one benchmark, size and seed");
    }
    let topo = Topology::new(spec);
    let mut points = Vec::new();
    for &b in benches {
        for &n in sizes {
            points.extend(seeds.clone().map(|s| (b, n, s)));
        }
    }
    points
        .par_iter()
        .map(|&(bench, n, seed)| {
            let at = || format!("{bench} n={n} seed={seed}");
            let c = lower_to_native(&generate(bench, n, seed)?, native)?;
            let fixed = route_layered_on(&c, &topo, LayerMode::Fixed, seed).with_context(at)?;
            let reconfig = route_layered_on(&c, &topo, LayerMode::Reconfig, seed).with_context(at)?;
            let s = shuttle_layer_stats(&fixed, &reconfig, spec).with_context(at)?;
            Ok(LayerRow {
                bench: bench.to_string(),
                n,
                seed,
                layers_fixed: s.layers_fixed,
                layers_reconfig: s.layers_reconfig,
                reduction_ratio: s.reduction_ratio,
                shuttles_fixed: s.fixed.shuttles,
                shuttles_reconfig: s.reconfig.shuttles,
                execution_fixed_us: s.fixed.execution_us,
                execution_reconfig_us: s.reconfig.execution_us,
                shuttle_fraction_fixed: s.fixed.shuttle_fraction(),
                shuttle_fraction_reconfig: s.reconfig.shuttle_fraction(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_a_header() {
        let rows = decomposition(&HardwareSpec::rubidium());
        let text = to_csv(&rows).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(
            header,
            "gate,f_native,p_native,p_decomposed,breakeven_fidelity,idle_native_us,idle_decomposed_us,preferred"
        );
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn infeasible_velocity_leaves_the_column_empty() {
        let rows = velocity(&HardwareSpec::rubidium(), &[50, 343], 6.0).unwrap();
        assert_eq!(rows[0].result, "feasible");
        assert_eq!(rows[1].result, "below_trap_switching");
        let text = to_csv(&rows).unwrap();
        assert!(text.lines().nth(2).unwrap().ends_with("below_trap_switching,"));
    }
}
