//! Hardware description: trap grid, interaction and restriction radii, gate
//! durations and fidelities, coherence times, shuttling parameters.
//!
//! Units are fixed throughout: lengths in micrometres, gate and shuttle
//! times in microseconds, coherence times in seconds. Radii are stored as
//! multiples of the trap spacing.

mod geometry;
mod physics;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{GateKind, GateTag};

pub use geometry::{coupling_graph, gate_mappable, restriction_conflict, CouplingGraph, Position, Topology};
pub use physics::{blockade_radius, effective_coherence_time, vdw_interaction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardwareError {
    #[error("unknown hardware preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid hardware spec: {0}")]
    Invalid(String),
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("gate operand sets overlap")]
    OverlappingOperands,
    #[error("hardware spec JSON: {0}")]
    Json(String),
}

/// How idle time is summed over the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdleMode {
    /// `n*T - sum(arity(g) * t(g))`: per-qubit gate-free time.
    #[default]
    ArityWeighted,
    /// `n*T - sum(t(g))`.
    Literal,
}

impl FromStr for IdleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "arity_weighted" | "arity" => Ok(IdleMode::ArityWeighted),
            "literal" => Ok(IdleMode::Literal),
            _ => Err(format!("unknown idle mode `{s}` (arity-weighted | literal)")),
        }
    }
}

impl fmt::Display for IdleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdleMode::ArityWeighted => "arity_weighted",
            IdleMode::Literal => "literal",
        })
    }
}

/// One value per native gate class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateTable {
    pub single_qubit: f64,
    pub cz: f64,
    pub ccz: f64,
    pub cccz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShuttleParams {
    pub max_velocity_um_per_us: f64,
    /// One full pickup + drop cycle (SLM -> AOD -> SLM).
    pub t_trap_us: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareSpec {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub spacing_um: f64,
    /// Interaction radius in units of `spacing_um`.
    pub interaction_radius: f64,
    /// Restriction radius in units of `spacing_um`.
    pub restriction_radius: f64,
    pub durations_us: GateTable,
    pub fidelities: GateTable,
    pub t1_s: f64,
    pub t2_s: f64,
    pub shuttle: ShuttleParams,
    #[serde(default)]
    pub idle_mode: IdleMode,
}

pub const DEFAULT_ROWS: usize = 12;
pub const DEFAULT_COLS: usize = 10;

impl HardwareSpec {
    pub fn strontium() -> Self {
        HardwareSpec {
            name: "strontium".into(),
            rows: DEFAULT_ROWS,
            cols: DEFAULT_COLS,
            spacing_um: 3.0,
            interaction_radius: 2.0,
            restriction_radius: 4.0,
            durations_us: GateTable { single_qubit: 200.0, cz: 0.1, ccz: 1.0, cccz: 1.0 },
            fidelities: GateTable { single_qubit: 0.99, cz: 0.99, ccz: 0.95, cccz: 0.95 },
            t1_s: 1.0,
            t2_s: 10.0,
            shuttle: ShuttleParams { max_velocity_um_per_us: 0.025, t_trap_us: 40.0, fidelity: 1.0 },
            idle_mode: IdleMode::ArityWeighted,
        }
    }

    pub fn rubidium() -> Self {
        HardwareSpec {
            name: "rubidium".into(),
            rows: DEFAULT_ROWS,
            cols: DEFAULT_COLS,
            spacing_um: 3.0,
            interaction_radius: 2.0,
            restriction_radius: 4.0,
            durations_us: GateTable { single_qubit: 0.5, cz: 0.2, ccz: 1.0, cccz: 1.0 },
            fidelities: GateTable { single_qubit: 0.999, cz: 0.995, ccz: 0.98, cccz: 0.95 },
            t1_s: 100.0,
            t2_s: 1.5,
            shuttle: ShuttleParams { max_velocity_um_per_us: 0.55, t_trap_us: 40.0, fidelity: 1.0 },
            idle_mode: IdleMode::ArityWeighted,
        }
    }

    pub fn preset(name: &str) -> Result<Self, HardwareError> {
        match name.to_ascii_lowercase().as_str() {
            "strontium" | "sr" => Ok(Self::strontium()),
            "rubidium" | "rb" => Ok(Self::rubidium()),
            _ => Err(HardwareError::UnknownPreset(name.to_string())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HardwareError> {
        let spec: HardwareSpec = serde_json::from_str(text).map_err(|e| HardwareError::Json(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<(), HardwareError> {
        let positive = [
            ("spacing_um", self.spacing_um),
            ("interaction_radius", self.interaction_radius),
            ("t1_s", self.t1_s),
            ("t2_s", self.t2_s),
            ("durations_us.single_qubit", self.durations_us.single_qubit),
            ("durations_us.cz", self.durations_us.cz),
            ("durations_us.ccz", self.durations_us.ccz),
            ("durations_us.cccz", self.durations_us.cccz),
            ("shuttle.max_velocity_um_per_us", self.shuttle.max_velocity_um_per_us),
        ];
        for (what, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(HardwareError::NonPositive { what, value });
            }
        }
        if self.rows == 0 || self.cols == 0 {
            return Err(HardwareError::Invalid("grid must have at least one trap".into()));
        }
        if !(self.restriction_radius >= self.interaction_radius) || !self.restriction_radius.is_finite() {
            return Err(HardwareError::Invalid(format!(
                "restriction radius {} below interaction radius {}",
                self.restriction_radius, self.interaction_radius
            )));
        }
        if !(self.shuttle.t_trap_us >= 0.0 && self.shuttle.t_trap_us.is_finite()) {
            return Err(HardwareError::Invalid("shuttle.t_trap_us must be non-negative".into()));
        }
        let fids = [
            self.fidelities.single_qubit,
            self.fidelities.cz,
            self.fidelities.ccz,
            self.fidelities.cccz,
            self.shuttle.fidelity,
        ];
        if fids.iter().any(|&f| !(f > 0.0 && f <= 1.0)) {
            return Err(HardwareError::Invalid("fidelities must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn with_grid(mut self, rows: usize, cols: usize) -> Self {
        self.rows = rows;
        self.cols = cols;
        self
    }

    /// Sets the interaction radius and keeps the blocking factor.
    pub fn with_interaction_radius(mut self, r_int: f64) -> Self {
        let k = self.blocking_factor();
        self.interaction_radius = r_int;
        self.restriction_radius = k * r_int;
        self
    }

    pub fn with_restriction_radius(mut self, r_re: f64) -> Self {
        self.restriction_radius = r_re;
        self
    }

    pub fn with_blocking_factor(mut self, k: f64) -> Self {
        self.restriction_radius = k * self.interaction_radius;
        self
    }

    pub fn with_idle_mode(mut self, mode: IdleMode) -> Self {
        self.idle_mode = mode;
        self
    }

    /// `k = r_re / r_int`.
    pub fn blocking_factor(&self) -> f64 {
        self.restriction_radius / self.interaction_radius
    }

    pub fn num_traps(&self) -> usize {
        self.rows * self.cols
    }

    pub fn interaction_radius_um(&self) -> f64 {
        self.interaction_radius * self.spacing_um
    }

    pub fn restriction_radius_um(&self) -> f64 {
        self.restriction_radius * self.spacing_um
    }

    /// Row-major trap index to position.
    pub fn position(&self, trap: usize) -> Position {
        Position::on_grid(trap / self.cols, trap % self.cols, self.spacing_um)
    }

    pub fn distance_um(&self, a: usize, b: usize) -> f64 {
        self.position(a).distance(&self.position(b))
    }

    /// Effective coherence time in microseconds.
    pub fn t_eff_us(&self) -> f64 {
        self.t1_s * self.t2_s / (self.t1_s + self.t2_s) * 1e6
    }

    /// CX as one single-qubit gate plus one CZ: `(fidelity, duration_us)`.
    pub fn cx_composite(&self) -> (f64, f64) {
        (self.fidelities.single_qubit * self.fidelities.cz, self.durations_us.single_qubit + self.durations_us.cz)
    }

    /// Execution time of a gate as a primitive operation.
    pub fn duration_us(&self, kind: &GateKind) -> f64 {
        let d = &self.durations_us;
        match kind.tag() {
            GateTag::Rot | GateTag::H | GateTag::X => d.single_qubit,
            GateTag::Cz | GateTag::Cp => d.cz,
            GateTag::Cx => self.cx_composite().1,
            GateTag::Swap => 3.0 * self.cx_composite().1,
            GateTag::Ccz => d.ccz,
            GateTag::Cccz => d.cccz,
        }
    }

    pub fn fidelity(&self, kind: &GateKind) -> f64 {
        let f = &self.fidelities;
        match kind.tag() {
            GateTag::Rot | GateTag::H | GateTag::X => f.single_qubit,
            GateTag::Cz | GateTag::Cp => f.cz,
            GateTag::Cx => self.cx_composite().0,
            GateTag::Swap => self.cx_composite().0.powi(3),
            GateTag::Ccz => f.ccz,
            GateTag::Cccz => f.cccz,
        }
    }
}
