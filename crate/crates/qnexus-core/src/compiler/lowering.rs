//! Lowering of logical gates to timed processor instructions.

use alloc::vec::Vec;

use crate::arch::{ArchError, ArchitectureSpec, MagicState, ModuleKind, ModuleSpec};
use crate::circuit::{GateKind, GateOp, QubitId};
use crate::qec::idle_error;
use crate::time::{secs_to_ns, Nanos};

use super::{Category, EventKind};

/// Timing and error of every instruction class on one processor.
#[derive(Clone, Debug, PartialEq)]
pub struct GateCosts {
    pub cycle_ns: Nanos,
    pub eps_cycle: f64,
    pub two_qubit_ns: Nanos,
    pub eps_2q: f64,
    /// Duration of one magic-state injection.
    pub inject_ns: Nanos,
    pub eps_magic: f64,
    pub magic: MagicState,
    /// Sequential T injections charged for one arbitrary-angle rotation.
    pub rotation_t_count: u32,
    /// Factories serving this processor and their production period.
    pub factories: usize,
    pub factory_period_ns: Nanos,
}

/// T gates charged to synthesize a rotation to precision `eps`.
pub fn rotation_t_count(eps: f64) -> u32 {
    libm::ceil(3.0 * libm::log2(1.0 / eps)) as u32
}

impl GateCosts {
    /// Costs for a processor module backed by the architecture's factory.
    pub fn for_processor(spec: &ArchitectureSpec, m: &ModuleSpec) -> Result<GateCosts, ArchError> {
        let qsf_mod = spec.first_of(ModuleKind::Qsf).ok_or(ArchError::MissingModule("qsf"))?;
        let qsf = qsf_mod.qsf.as_ref().ok_or_else(|| ArchError::MissingParams(qsf_mod.id.clone(), "qsf"))?;
        let d = m.distance() as u64;
        let cycle_ns = secs_to_ns(m.cycle_s()).max(1);
        let qpu = spec.qpu()?;
        let eps_2q = qpu.qpu.as_ref().map(|q| q.eps_2q).unwrap_or(0.0);
        let (two_qubit_cycles, factories) = match m.kind {
            ModuleKind::Asqpu => {
                let a = m.asqpu.as_ref().ok_or_else(|| ArchError::MissingParams(m.id.clone(), "asqpu"))?;
                (a.cnot_cycles as u64, a.ccz_factories as usize)
            }
            _ => (d, libm::round(qsf.n_mf_per_qpu * m.core_capacity() as f64) as usize),
        };
        Ok(GateCosts {
            cycle_ns,
            eps_cycle: m.eps_cycle(),
            two_qubit_ns: two_qubit_cycles * cycle_ns,
            eps_2q,
            inject_ns: 2 * d * cycle_ns,
            eps_magic: qsf.eps_state,
            magic: qsf.state,
            rotation_t_count: rotation_t_count(qsf.eps_state),
            factories: factories.max(1),
            factory_period_ns: qsf.injection_cycles as u64 * cycle_ns,
        })
    }

    /// Idle error of a qubit parked on this processor for `ns`.
    pub fn idle(&self, ns: Nanos) -> f64 {
        idle_error(self.eps_cycle, ns as f64 / self.cycle_ns as f64)
    }
}

/// One instruction ready for placement. Injections with `magic > 0` run as
/// `magic` back-to-back injections, each waiting for a factory state.
#[derive(Clone, Debug, PartialEq)]
pub struct MicroOp {
    pub qubits: Vec<QubitId>,
    pub kind: EventKind,
    pub category: Category,
    pub label: &'static str,
    /// Duration of the whole op, or of one injection when `magic > 0`.
    pub duration_ns: Nanos,
    pub error: f64,
    pub magic: u32,
}

fn gate(q: &[QubitId], label: &'static str, category: Category, duration_ns: Nanos, error: f64) -> MicroOp {
    MicroOp { qubits: q.to_vec(), kind: EventKind::Gate, category, label, duration_ns, error, magic: 0 }
}

fn clifford(c: &GateCosts, q: QubitId, label: &'static str) -> MicroOp {
    gate(&[q], label, Category::Gate1q, c.cycle_ns, c.eps_cycle)
}

fn cnot(c: &GateCosts, a: QubitId, b: QubitId) -> MicroOp {
    gate(&[a, b], "CNOT", Category::Gate2q, c.two_qubit_ns, c.eps_2q)
}

fn t_gate(c: &GateCosts, q: QubitId, label: &'static str, n: u32) -> MicroOp {
    MicroOp {
        qubits: alloc::vec![q],
        kind: EventKind::TInject,
        category: Category::GateT,
        label,
        duration_ns: c.inject_ns,
        error: -libm::expm1(n as f64 * libm::log1p(-c.eps_magic)),
        magic: n,
    }
}

/// Clifford+T network of a doubly controlled Z on `[a, b, t]`.
fn ccz_network(c: &GateCosts, a: QubitId, b: QubitId, t: QubitId, out: &mut Vec<MicroOp>) {
    out.push(cnot(c, b, t));
    out.push(t_gate(c, t, "Tdg", 1));
    out.push(cnot(c, a, t));
    out.push(t_gate(c, t, "T", 1));
    out.push(cnot(c, b, t));
    out.push(t_gate(c, t, "Tdg", 1));
    out.push(cnot(c, a, t));
    out.push(t_gate(c, b, "T", 1));
    out.push(t_gate(c, t, "T", 1));
    out.push(cnot(c, a, b));
    out.push(t_gate(c, a, "T", 1));
    out.push(t_gate(c, b, "Tdg", 1));
    out.push(cnot(c, a, b));
}

fn ccz_inject(c: &GateCosts, q: &[QubitId], label: &'static str) -> MicroOp {
    MicroOp {
        qubits: q.to_vec(),
        kind: EventKind::CczInject,
        category: Category::GateT,
        label,
        duration_ns: c.inject_ns,
        error: c.eps_magic,
        magic: 1,
    }
}

/// Appends the instructions implementing `op`.
pub fn lower(op: &GateOp, c: &GateCosts, out: &mut Vec<MicroOp>) {
    let q = &op.qubits;
    match op.kind {
        GateKind::H | GateKind::S | GateKind::X | GateKind::Z | GateKind::Prep => {
            out.push(clifford(c, q[0], op.kind.name()))
        }
        GateKind::Measure => out.push(gate(q, "Measure", Category::Measure, c.cycle_ns, c.eps_cycle)),
        GateKind::Cnot => out.push(cnot(c, q[0], q[1])),
        GateKind::Cz => out.push(gate(q, "CZ", Category::Gate2q, c.two_qubit_ns, c.eps_2q)),
        GateKind::Swap => {
            out.push(cnot(c, q[0], q[1]));
            out.push(cnot(c, q[1], q[0]));
            out.push(cnot(c, q[0], q[1]));
        }
        GateKind::T => out.push(t_gate(c, q[0], "T", 1)),
        GateKind::Tdg => out.push(t_gate(c, q[0], "Tdg", 1)),
        GateKind::Rz(_) => out.push(t_gate(c, q[0], "Rz", c.rotation_t_count)),
        GateKind::CPhase(_) => {
            out.push(cnot(c, q[0], q[1]));
            out.push(t_gate(c, q[1], "Rz", c.rotation_t_count));
            out.push(cnot(c, q[0], q[1]));
        }
        GateKind::Toffoli => match c.magic {
            MagicState::Ccz => out.push(ccz_inject(c, q, "Toffoli")),
            MagicState::T => {
                out.push(clifford(c, q[2], "H"));
                ccz_network(c, q[0], q[1], q[2], out);
                out.push(clifford(c, q[2], "H"));
            }
        },
        GateKind::Ccz => match c.magic {
            MagicState::Ccz => out.push(ccz_inject(c, q, "CCZ")),
            MagicState::T => ccz_network(c, q[0], q[1], q[2], out),
        },
    }
}
