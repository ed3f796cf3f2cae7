//! Compilation toolkit for grid-based neutral-atom processors: circuit IR,
//! hardware model, SWAP routing, restriction-aware scheduling, atom
//! shuttling and the success-probability error model.

pub mod circuit;
pub mod fidelity;
pub mod hardware;
pub mod mapper;
pub mod rng;
pub mod scheduler;
pub mod shuttle;

pub use circuit::{Circuit, Gate, GateKind, GateTag, NativeSet};
pub use hardware::{HardwareSpec, IdleMode};
pub use mapper::{Layout, MappedCircuit};
pub use scheduler::Schedule;
