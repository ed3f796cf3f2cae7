//! `atomc` command implementations. [`run`] executes a parsed command line
//! and returns the process exit code.

pub mod args;
pub mod compile;
pub mod config;
pub mod moves;
pub mod tradeoff;

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use atomc_core::circuit::{emit_qasm, generate};

use args::{Cli, Command, Tradeoff};
use compile::RunConfig;

/// Exit code for a move file with violations.
pub const EXIT_VIOLATIONS: i32 = 2;

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Compile(a) => {
            let cfg = RunConfig {
                circuit: config::load_input(&a.input, a.seed)?,
                spec: config::hardware(&a.hw)?,
                native: config::native_set(&a.hw),
                layout: a.layout,
                scenario: a.scenario,
                seed: a.seed,
            };
            let out = compile::compile(&cfg)?;
            emit(a.out.as_deref(), &json(&out.report)?)?;
            if let Some(p) = &a.csv {
                emit(Some(p), &out.schedule.to_csv())?;
            }
            if let Some(p) = &a.mapped_qasm {
                emit(Some(p), &out.mapped_qasm())?;
            }
            compile::check(&out.report)?;
        }
        Command::Tradeoff { kind } => {
            let (csv, path) = match kind {
                Tradeoff::TeffSweep { input, hw, rint_values, layout, seed, out } => {
                    let c = config::load_input(&input, seed)?;
                    let spec = config::hardware(&hw)?;
                    let radii = config::parse_values(&rint_values)?;
                    let rows = tradeoff::teff_sweep(&c, &spec, &config::native_set(&hw), layout, seed, &radii);
                    (tradeoff::to_csv(&rows)?, out.csv)
                }
                Tradeoff::Velocity { hw, n_idle, dist, out } => {
                    let spec = config::hardware(&hw)?;
                    let dist = dist.unwrap_or(2.0 * spec.spacing_um);
                    let rows = tradeoff::velocity(&spec, &config::parse_counts(&n_idle)?, dist)?;
                    (tradeoff::to_csv(&rows)?, out.csv)
                }
                Tradeoff::Decomposition { hw, out } => {
                    let spec = config::hardware(&hw)?;
                    (tradeoff::to_csv(&tradeoff::decomposition(&spec))?, out.csv)
                }
                Tradeoff::ShuttleVsGate { hw, n_idle, dist, out } => {
                    let spec = config::hardware(&hw)?;
                    let dist = dist.unwrap_or(spec.spacing_um);
                    let rows = tradeoff::shuttle_vs_gate(&spec, &config::parse_counts(&n_idle)?, dist)?;
                    (tradeoff::to_csv(&rows)?, out.csv)
                }
                Tradeoff::LayerReduction { hw, benches, sizes, seeds, seed, out } => {
                    let spec = config::hardware(&hw)?;
                    let rows = tradeoff::layer_reduction(
                        &spec,
                        &config::native_set(&hw),
                        &benches,
                        &sizes,
                        seed..seed + seeds,
                    )?;
                    (tradeoff::to_csv(&rows)?, out.csv)
                }
            };
            emit(path.as_deref(), &csv)?;
        }
        Command::ValidateMoves(a) => {
            let file = moves::load(&a.path)?;
            let violations = moves::check(&file);
            if violations.is_empty() {
                println!("ok: {} moves valid", file.moves.len());
            } else {
                for (i, v) in &violations {
                    println!("move {i}: {v}");
                }
                return Ok(EXIT_VIOLATIONS);
            }
        }
        Command::Generate(a) => {
            let c = generate(a.bench, a.n, a.seed)?;
            emit(a.out.as_deref(), &emit_qasm(&c))?;
        }
    }
    Ok(0)
}
