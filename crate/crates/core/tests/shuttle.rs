mod common;

use atomc_core::mapper::{initial_layout, route, route_layered, LayerMode, LayoutStrategy, RouteParams};
use atomc_core::scheduler::schedule;
use atomc_core::shuttle::{
    schedule_shuttle_plan, shuttle_duration, shuttle_layer_stats, shuttles_from_swaps, validate_move,
    validate_sequence, AodGrid, Axis, Move, MoveViolation, Scenario,
};
use atomc_core::HardwareSpec;
use proptest::prelude::*;

/// Integer coordinates keep every comparison exact.
fn line(max_len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (0..=max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(4i32..9, n).prop_map(|gaps| {
                gaps.iter()
                    .scan(0.0, |x, g| {
                        *x += *g as f64;
                        Some(*x)
                    })
                    .collect::<Vec<f64>>()
            }),
            prop::collection::vec(-6i32..=6, n).prop_map(|d| d.into_iter().map(f64::from).collect()),
        )
    })
}

/// Samples the whole ramp for every pair of lines, not just neighbours.
fn brute_force_bad(coords: &[f64], disp: &[f64], d_min: f64) -> Vec<usize> {
    let mut bad = Vec::new();
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let hit = (0..=64).any(|s| {
                let t = s as f64 / 64.0;
                (coords[j] + t * disp[j]) - (coords[i] + t * disp[i]) <= d_min
            });
            if hit && j == i + 1 {
                bad.push(i);
            }
            if hit {
                // A bad distant pair implies a bad neighbouring pair between them.
                assert!((i..j).any(|k| { (coords[k + 1] + disp[k + 1]) - (coords[k] + disp[k]) <= d_min }));
            }
        }
    }
    bad
}

fn spec() -> HardwareSpec {
    HardwareSpec::rubidium().with_grid(3, 4).with_interaction_radius(1.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn validate_move_matches_brute_force((xs, dx) in line(6), (ys, dy) in line(4), d_min in 0i32..4) {
        let d_min = d_min as f64;
        let grid = AodGrid::new(xs.clone(), ys.clone(), d_min).unwrap();
        let got = validate_move(&grid, &Move { dx: dx.clone(), dy: dy.clone() });
        let flagged = |axis: Axis| -> Vec<usize> {
            got.iter()
                .filter_map(|v| match v {
                    MoveViolation::Crossing { axis: a, index } | MoveViolation::Gap { axis: a, index, .. } if *a == axis => Some(*index),
                    _ => None,
                })
                .collect()
        };
        prop_assert_eq!(flagged(Axis::X), brute_force_bad(&xs, &dx, d_min));
        prop_assert_eq!(flagged(Axis::Y), brute_force_bad(&ys, &dy, d_min));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valid_sequences_stay_valid((xs, dx) in line(5), d_min in 0i32..3) {
        let grid = AodGrid::new(xs, vec![], d_min as f64).unwrap();
        let mv = Move { dx: dx.clone(), dy: vec![] };
        let back = Move { dx: dx.iter().map(|d| -d).collect(), dy: vec![] };
        // A valid move followed by its inverse is valid.
        if validate_move(&grid, &mv).is_empty() {
            prop_assert!(validate_sequence(&grid, &[mv, back]).is_empty());
        }
    }

    #[test]
    fn duration_is_affine_and_increasing(a in 0.0f64..500.0, b in 0.0f64..500.0) {
        let spec = spec();
        let (ta, tb) = (shuttle_duration(a, &spec), shuttle_duration(b, &spec));
        let t0 = shuttle_duration(0.0, &spec);
        prop_assert!((t0 - 2.0 * spec.shuttle.t_trap_us).abs() < 1e-9);
        let mid = shuttle_duration((a + b) / 2.0, &spec);
        prop_assert!((mid - (ta + tb) / 2.0).abs() < 1e-9);
        if a < b {
            prop_assert!(ta < tb);
        }
    }

    #[test]
    fn shuttle_plans_reproduce_the_routing(c in common::sized_circuit(2..=10, 40, 3), seed in 0u64..50) {
        let spec = spec();
        let l = initial_layout(&c, &spec, LayoutStrategy::Random, seed).unwrap();
        let m = route(&c, &spec, &l, &RouteParams::default()).unwrap();
        let plan = shuttles_from_swaps(&m, &spec);
        prop_assert_eq!(plan.replay(&m.initial_layout), m.final_layout.clone());
        prop_assert!(plan.ops.len() <= m.n_swaps);
        let swaps: usize = plan.ops.iter().map(|o| o.swaps.len()).sum();
        prop_assert_eq!(swaps, m.n_swaps);
        for op in &plan.ops {
            prop_assert_eq!(op.exchange, op.swaps.len() == 1);
            prop_assert!((op.duration_us - shuttle_duration(op.distance_um, &spec)).abs() < 1e-9);
        }
        let par = schedule_shuttle_plan(&plan, &m, &spec, Scenario::Parallel);
        let seq = schedule_shuttle_plan(&plan, &m, &spec, Scenario::Sequential);
        prop_assert!(seq.makespan_us + 1e-9 >= par.makespan_us);
        // Without shuttles both scenarios reduce to the gate schedule.
        if plan.ops.is_empty() {
            prop_assert!((par.makespan_us - schedule(&m, &spec).makespan_us).abs() < 1e-9);
        }
    }

    #[test]
    fn reconfigurable_layers_never_exceed_fixed(c in common::sized_circuit(2..=10, 40, 3), seed in 0u64..50) {
        let spec = spec();
        let fixed = route_layered(&c, &spec, LayerMode::Fixed, seed).unwrap();
        let reconfig = route_layered(&c, &spec, LayerMode::Reconfig, seed).unwrap();
        let stats = shuttle_layer_stats(&fixed, &reconfig, &spec).unwrap();
        prop_assert!(stats.layers_reconfig <= stats.layers_fixed);
        prop_assert!((0.0..1.0).contains(&stats.reduction_ratio));
        for b in [&stats.fixed, &stats.reconfig] {
            prop_assert!((0.0..=1.0).contains(&b.shuttle_fraction()));
            prop_assert!(b.execution_us <= b.gate_us + b.motion_us + b.trap_switch_us + 1e-9);
        }
    }
}
