use std::path::PathBuf;

use atomc_core::circuit::BenchKind;
use atomc_core::mapper::LayoutStrategy;
use atomc_core::IdleMode;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "atomc", version, about = "Neutral-atom compilation and trade-off analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower, map, schedule and score one circuit.
    Compile(CompileArgs),
    /// Parameter sweeps written as CSV.
    Tradeoff {
        #[command(subcommand)]
        kind: Tradeoff,
    },
    /// Check an AOD move sequence; exits 2 on any violation.
    ValidateMoves(ValidateArgs),
    /// Write a benchmark circuit as QASM.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Args)]
#[group(skip)]
pub struct InputArgs {
    /// OpenQASM 2.0 file.
    #[arg(long, conflicts_with_all = ["bench", "n"], required_unless_present = "bench")]
    pub qasm: Option<PathBuf>,
    /// Benchmark generator.
    #[arg(long, requires = "n")]
    pub bench: Option<BenchKind>,
    /// Qubit count for --bench.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct HardwareArgs {
    /// Preset name (rubidium, strontium) or spec JSON path; bare names are
    /// also looked up in $ATOMC_HW_DIR.
    #[arg(long, default_value = "rubidium")]
    pub hw: String,
    /// Trap grid as ROWSxCOLS.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Interaction radius in trap spacings; keeps the blocking factor.
    #[arg(long)]
    pub rint: Option<f64>,
    /// Restriction radius in trap spacings.
    #[arg(long)]
    pub rre: Option<f64>,
    #[arg(long, value_parser = parse_idle_mode)]
    pub idle_mode: Option<IdleMode>,
    /// Treat controlled-phase as native.
    #[arg(long)]
    pub cp_native: bool,
    /// Replace CCZ and CCCZ by their CZ decompositions.
    #[arg(long)]
    pub decompose_multiqubit: bool,
    /// Expand CX into H, CZ, H instead of running it as a composite gate.
    #[arg(long)]
    pub lower_cx: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Gate,
    ShuttleParallel,
    ShuttleSequential,
}

impl ScenarioArg {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioArg::Gate => "gate",
            ScenarioArg::ShuttleParallel => "shuttle-parallel",
            ScenarioArg::ShuttleSequential => "shuttle-sequential",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub hw: HardwareArgs,
    #[arg(long, value_enum, default_value = "gate")]
    pub scenario: ScenarioArg,
    #[arg(long, default_value = "affinity", value_parser = parse_layout)]
    pub layout: LayoutStrategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON report path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Schedule CSV path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Routed circuit on trap wires, as QASM.
    #[arg(long)]
    pub mapped_qasm: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepOut {
    /// CSV path (stdout when absent).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Tradeoff {
    /// Crossover coherence time across interaction radii.
    TeffSweep {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        hw: HardwareArgs,
        /// Radii as START:STOP:STEP or a comma list.
        #[arg(long, default_value = "1:3:0.5")]
        rint_values: String,
        #[arg(long, default_value = "affinity", value_parser = parse_layout)]
        layout: LayoutStrategy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: SweepOut,
    },
    /// Shuttle speed needed to match a gate SWAP.
    Velocity {
        #[command(flatten)]
        hw: HardwareArgs,
        #[arg(long, default_value = "1:600")]
        n_idle: String,
        /// Shuttle distance in micrometres (default: two trap spacings).
        #[arg(long)]
        dist: Option<f64>,
        #[command(flatten)]
        out: SweepOut,
    },
    /// Native multi-qubit gates against their decompositions.
    Decomposition {
        #[command(flatten)]
        hw: HardwareArgs,
        #[command(flatten)]
        out: SweepOut,
    },
    /// Gate SWAP against a full-speed shuttle by register size.
    ShuttleVsGate {
        #[command(flatten)]
        hw: HardwareArgs,
        #[arg(long, default_value = "1:1000")]
        n_idle: String,
        /// Shuttle distance in micrometres (default: one trap spacing).
        #[arg(long)]
        dist: Option<f64>,
        #[command(flatten)]
        out: SweepOut,
    },
    /// Layer counts with fixed against reconfigurable layouts.
    LayerReduction {
        #[command(flatten)]
        hw: HardwareArgs,
        #[arg(long, value_delimiter = ',', default_value = "twolocal,qft,graphstate")]
        benches: Vec<BenchKind>,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        sizes: Vec<usize>,
        /// Instances per (bench, size); seeds run from --seed upward.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: SweepOut,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// JSON file: {"grid": {"xs", "ys", "d_min"}, "moves": [{"dx", "dy"}]}.
    pub path: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub bench: BenchKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(|| format!("grid `{s}` is not ROWSxCOLS"))?;
    let r: usize = r.trim().parse().map_err(|_| format!("bad row count in `{s}`"))?;
    let c: usize = c.trim().parse().map_err(|_| format!("bad column count in `{s}`"))?;
    if r == 0 || c == 0 {
        return Err(format!("grid `{s}` has no traps"));
    }
    Ok((r, c))
}

fn parse_idle_mode(s: &str) -> Result<IdleMode, String> {
    s.parse()
}

fn parse_layout(s: &str) -> Result<LayoutStrategy, String> {
    s.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("12x10"), Ok((12, 10)));
        assert_eq!(parse_grid("1X3"), Ok((1, 3)));
        assert!(parse_grid("0x3").is_err());
        assert!(parse_grid("3").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
