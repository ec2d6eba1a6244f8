//! Compiler, scheduler and resource estimator for heterogeneous fault-tolerant
//! quantum computer architectures.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`circuit`]: logical circuits, workload generators, text format and rewrites.
//! * [`arch`]: architecture descriptions built from QPU, factory, memory and bus modules.
//! * [`qec`]: logical error scaling, state-transfer and idling formulas.
//! * [`resources`]: closed-form physical resource counts and transfer-patch layout.
//! * [`compiler`]: block consolidation, routing, clock synchronization and scheduling.
//! * [`estimator`]: architecture comparisons and the RSA subroutine-repetition model.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arch;
pub mod circuit;
pub mod compiler;
pub mod estimator;
pub mod qec;
pub mod resources;
pub mod time;

pub use arch::{ArchitectureSpec, ModuleKind, ModuleSpec};
pub use circuit::{GateKind, GateOp, LogicalCircuit};
pub use compiler::{compile, ErrorBudget, ScheduledEvent, ScheduledProgram};
pub use resources::ResourceCounts;
