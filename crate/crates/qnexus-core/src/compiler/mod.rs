//! Compilation of logical circuits into timed, error-annotated schedules.
//!
//! The pipeline rewrites the circuit, consolidates it into blocks that fit a
//! processor core, and list-schedules the blocks onto the architecture's
//! processors while the router offloads idle qubits to memory. Homogeneous
//! architectures use the SWAP-routing baseline instead.

use alloc::string::String;
use alloc::vec::Vec;

use crate::arch::{ArchError, ArchShape, ArchitectureSpec};
use crate::circuit::{rewrite_depth_reduce, CircuitError, LogicalCircuit, QubitId};
use crate::qec::QecError;
use crate::time::{ns_to_secs, Nanos};

pub mod audit;
pub mod baseline;
pub mod blocks;
pub mod clock;
pub mod factory;
pub mod lowering;
pub mod router;
pub mod scheduler;

pub use audit::{audit, AuditViolation};
pub use baseline::{schedule_baseline, BaselineParams};
pub use blocks::{consolidate_blocks, UnitaryBlock};
pub use clock::{align_cycle, plan_dwell, ClockError, DwellPlan};
pub use router::{route_or_idle, Decision, KeepReason};
pub use scheduler::schedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Gate,
    TInject,
    CczInject,
    TransferWrite,
    TransferRead,
    SwapRoute,
    IdleBuffer,
    QecCycleStretch,
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Gate => "gate",
            EventKind::TInject => "t_inject",
            EventKind::CczInject => "ccz_inject",
            EventKind::TransferWrite => "transfer_write",
            EventKind::TransferRead => "transfer_read",
            EventKind::SwapRoute => "swap_route",
            EventKind::IdleBuffer => "idle_buffer",
            EventKind::QecCycleStretch => "qec_cycle_stretch",
        }
    }
}

/// Error-budget categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    QpuIdle,
    QmIdle,
    Gate1q,
    GateT,
    Gate2q,
    Transfer,
    Measure,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::QpuIdle,
        Category::QmIdle,
        Category::Gate1q,
        Category::GateT,
        Category::Gate2q,
        Category::Transfer,
        Category::Measure,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Category::QpuIdle => "qpu_idle",
            Category::QmIdle => "qm_idle",
            Category::Gate1q => "gate_1q",
            Category::GateT => "gate_t",
            Category::Gate2q => "gate_2q",
            Category::Transfer => "transfer",
            Category::Measure => "measure",
        }
    }

    fn index(&self) -> usize {
        *self as usize
    }
}

/// One timed machine instruction.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduledEvent {
    /// Index into the architecture's module list.
    pub module: usize,
    /// Processor core the event runs on or transfers to.
    pub core: u32,
    pub kind: EventKind,
    pub start_ns: Nanos,
    pub duration_ns: Nanos,
    pub qubits: Vec<QubitId>,
    pub error: f64,
    pub category: Category,
    /// Gate name for gate-like events.
    pub label: &'static str,
    pub magic_states: u32,
}

impl ScheduledEvent {
    pub fn end_ns(&self) -> Nanos {
        self.start_ns + self.duration_ns
    }

    pub fn start_s(&self) -> f64 {
        ns_to_secs(self.start_ns)
    }

    pub fn duration_s(&self) -> f64 {
        ns_to_secs(self.duration_ns)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Two-qubit Clifford gates; a SWAP counts as three.
    pub cnot: u64,
    /// State transfers, writes plus reads.
    pub st: u64,
    /// Magic states consumed.
    pub t: u64,
    pub swap: u64,
}

impl Counters {
    pub fn from_events(events: &[ScheduledEvent]) -> Counters {
        let mut c = Counters::default();
        for e in events {
            match e.kind {
                EventKind::Gate => match e.label {
                    "CNOT" | "CZ" => c.cnot += 1,
                    "SWAP" => {
                        c.cnot += 3;
                        c.swap += 1;
                    }
                    _ => {}
                },
                EventKind::TransferWrite | EventKind::TransferRead => c.st += 1,
                _ => {}
            }
            c.t += e.magic_states as u64;
        }
        c
    }
}

const MAX_EVENT_ERROR: f64 = 1.0 - 1e-15;

fn log_survival(eps: f64) -> f64 {
    -libm::log1p(-eps.clamp(0.0, MAX_EVENT_ERROR))
}

/// Failure probability split by mechanism.
///
/// The total is `1 - prod(1 - eps)` over all events. Each category's mass is
/// its share of the total in proportion to its `-log(1 - eps)` sum, so masses
/// add up to the total. `raw` is the failure probability of a category alone.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorBudget {
    log_survival: [f64; 7],
}

impl ErrorBudget {
    pub fn from_events(events: &[ScheduledEvent]) -> ErrorBudget {
        let mut b = ErrorBudget::default();
        for e in events {
            b.log_survival[e.category.index()] += log_survival(e.error);
        }
        b
    }

    fn total_log(&self) -> f64 {
        self.log_survival.iter().sum()
    }

    pub fn total(&self) -> f64 {
        -libm::expm1(-self.total_log())
    }

    pub fn mass(&self, c: Category) -> f64 {
        let l = self.total_log();
        if l == 0.0 {
            return 0.0;
        }
        self.total() * self.log_survival[c.index()] / l
    }

    pub fn raw(&self, c: Category) -> f64 {
        -libm::expm1(-self.log_survival[c.index()])
    }

    /// Category with the largest mass; ties resolve to the earlier category.
    pub fn dominant(&self) -> Category {
        let mut best = Category::QpuIdle;
        for c in Category::ALL {
            if self.log_survival[c.index()] > self.log_survival[best.index()] {
                best = c;
            }
        }
        best
    }
}

/// Why a transfer pair was inserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveReason {
    /// The router found moving cheaper than idling.
    Router,
    /// The target core was full and this qubit was evicted.
    Capacity,
    /// The qubit was needed on another core.
    Migration,
    /// A long storage dwell was split by a round trip through a processor.
    Refresh,
}

/// A router or allocator decision, kept for auditing.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteRecord {
    pub qubit: QubitId,
    pub gap_start_ns: Nanos,
    pub gap_ns: Nanos,
    pub keep_cost: f64,
    pub move_cost: Option<f64>,
    pub decision: Decision,
    pub reason: Option<MoveReason>,
}

/// Occupancy of one processor slot by one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotInterval {
    pub unit: u32,
    pub slot: u32,
    pub qubit: QubitId,
    pub start_ns: Nanos,
    pub end_ns: Nanos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduledProgram {
    pub arch: String,
    /// Module ids, indexed by [`ScheduledEvent::module`].
    pub modules: Vec<String>,
    pub events: Vec<ScheduledEvent>,
    pub makespan_ns: Nanos,
    pub budget: ErrorBudget,
    pub counters: Counters,
    pub routes: Vec<RouteRecord>,
    pub slots: Vec<SlotInterval>,
    pub blocks: usize,
    pub diagnostics: Vec<String>,
}

impl ScheduledProgram {
    /// Sorts events, then derives makespan, counters and the budget.
    pub fn finalize(
        arch: String,
        modules: Vec<String>,
        mut events: Vec<ScheduledEvent>,
        routes: Vec<RouteRecord>,
        slots: Vec<SlotInterval>,
        blocks: usize,
        diagnostics: Vec<String>,
    ) -> ScheduledProgram {
        events.sort_by(|a, b| {
            (a.start_ns, a.module, a.core, &a.qubits, a.kind, a.duration_ns).cmp(&(
                b.start_ns,
                b.module,
                b.core,
                &b.qubits,
                b.kind,
                b.duration_ns,
            ))
        });
        let makespan_ns = events.iter().map(|e| e.end_ns()).max().unwrap_or(0);
        let budget = ErrorBudget::from_events(&events);
        let counters = Counters::from_events(&events);
        ScheduledProgram { arch, modules, events, makespan_ns, budget, counters, routes, slots, blocks, diagnostics }
    }

    pub fn makespan_s(&self) -> f64 {
        ns_to_secs(self.makespan_ns)
    }

    pub fn total_error(&self) -> f64 {
        self.budget.total()
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Qec(#[from] QecError),
    #[error(transparent)]
    Clock(#[from] ClockError),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("grid of {grid} qubits cannot hold a {width}-qubit circuit")]
    GridTooSmall { grid: usize, width: usize },
}

/// Rewrites, consolidates and schedules `c` on `spec`.
pub fn compile(c: &LogicalCircuit, spec: &ArchitectureSpec) -> Result<ScheduledProgram, CompileError> {
    c.validate()?;
    let rewritten = rewrite_depth_reduce(c);
    match spec.shape() {
        ArchShape::Homogeneous => {
            let params = BaselineParams::from_spec(spec)?;
            schedule_baseline(&rewritten, spec.qpu()?.n_logical as usize, &params)
        }
        _ => schedule(&rewritten, spec),
    }
}
