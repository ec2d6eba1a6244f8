//! Logical circuit data model.
//!
//! Ops are stored in insertion order. Data dependencies follow wire order: an
//! op depends on the previous op on each of its operands. [`commute`] refines
//! this into a commutation-aware DAG.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

pub mod commute;
pub mod generators;
pub mod rewrite;
pub mod text;

pub use commute::{commutation_dag, commutes};
pub use generators::{
    default_aqft_truncation, generate_aqft, generate_cuccaro_adder, generate_fermi_hubbard_step,
    generate_rsa_subroutine, AdderLayout, RsaSubroutine,
};
pub use rewrite::rewrite_depth_reduce;
pub use text::{parse_text, to_text};

pub type QubitId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitRole {
    Data,
    Ancilla,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogicalQubit {
    pub id: QubitId,
    pub role: QubitRole,
}

/// Logical gate kinds. Rotation angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    S,
    X,
    Z,
    Cnot,
    Cz,
    Swap,
    T,
    Tdg,
    Rz(f64),
    CPhase(f64),
    Toffoli,
    Ccz,
    Measure,
    Prep,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::H
            | GateKind::S
            | GateKind::X
            | GateKind::Z
            | GateKind::T
            | GateKind::Tdg
            | GateKind::Rz(_)
            | GateKind::Measure
            | GateKind::Prep => 1,
            GateKind::Cnot | GateKind::Cz | GateKind::Swap | GateKind::CPhase(_) => 2,
            GateKind::Toffoli | GateKind::Ccz => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::T => "T",
            GateKind::Tdg => "Tdg",
            GateKind::Rz(_) => "Rz",
            GateKind::CPhase(_) => "CPhase",
            GateKind::Toffoli => "Toffoli",
            GateKind::Ccz => "CCZ",
            GateKind::Measure => "Measure",
            GateKind::Prep => "Prep",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            GateKind::Rz(a) | GateKind::CPhase(a) => Some(*a),
            _ => None,
        }
    }

    pub fn is_non_clifford(&self) -> bool {
        matches!(
            self,
            GateKind::T | GateKind::Tdg | GateKind::Rz(_) | GateKind::CPhase(_) | GateKind::Toffoli | GateKind::Ccz
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<QubitId>,
    pub tag: Option<String>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: &[QubitId]) -> Self {
        GateOp { kind, qubits: qubits.to_vec(), tag: None }
    }

    pub fn tagged(mut self, tag: &str) -> Self {
        self.tag = Some(tag.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CircuitMetadata {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("op {index}: {kind} expects {expected} operands, got {got}")]
    Arity { index: usize, kind: &'static str, expected: usize, got: usize },
    #[error("op {index}: undeclared qubit q{qubit}")]
    UndeclaredQubit { index: usize, qubit: QubitId },
    #[error("op {index}: repeated operand q{qubit}")]
    RepeatedOperand { index: usize, qubit: QubitId },
    #[error("op {index}: rotation angle is not finite")]
    NonFiniteAngle { index: usize },
    #[error("duplicate qubit id q{0}")]
    DuplicateQubit(QubitId),
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(&'static str),
}

/// A logical circuit over qubits `0..n`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LogicalCircuit {
    pub qubits: Vec<LogicalQubit>,
    pub ops: Vec<GateOp>,
    pub metadata: CircuitMetadata,
}

impl LogicalCircuit {
    pub fn new(name: &str, n: u32) -> Self {
        LogicalCircuit {
            qubits: (0..n).map(|id| LogicalQubit { id, role: QubitRole::Data }).collect(),
            ops: Vec::new(),
            metadata: CircuitMetadata { name: name.into(), params: BTreeMap::new() },
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn push(&mut self, kind: GateKind, qubits: &[QubitId]) {
        self.ops.push(GateOp::new(kind, qubits));
    }

    pub fn push_op(&mut self, op: GateOp) {
        self.ops.push(op);
    }

    pub fn set_role(&mut self, id: QubitId, role: QubitRole) {
        if let Some(q) = self.qubits.iter_mut().find(|q| q.id == id) {
            q.role = role;
        }
    }

    pub fn set_param(&mut self, key: &str, value: impl core::fmt::Display) {
        self.metadata.params.insert(key.into(), alloc::format!("{value}"));
    }

    pub fn count(&self, pred: impl Fn(&GateKind) -> bool) -> usize {
        self.ops.iter().filter(|op| pred(&op.kind)).count()
    }

    /// Checks operand arity, declarations and angle finiteness.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut declared = alloc::collections::BTreeSet::new();
        for q in &self.qubits {
            if !declared.insert(q.id) {
                return Err(CircuitError::DuplicateQubit(q.id));
            }
        }
        for (index, op) in self.ops.iter().enumerate() {
            let expected = op.kind.arity();
            if op.qubits.len() != expected {
                return Err(CircuitError::Arity { index, kind: op.kind.name(), expected, got: op.qubits.len() });
            }
            for (i, &q) in op.qubits.iter().enumerate() {
                if !declared.contains(&q) {
                    return Err(CircuitError::UndeclaredQubit { index, qubit: q });
                }
                if op.qubits[..i].contains(&q) {
                    return Err(CircuitError::RepeatedOperand { index, qubit: q });
                }
            }
            if let Some(a) = op.kind.angle() {
                if !a.is_finite() {
                    return Err(CircuitError::NonFiniteAngle { index });
                }
            }
        }
        Ok(())
    }

    /// Wire-order predecessors of every op, deduplicated and sorted.
    pub fn dependencies(&self) -> Vec<Vec<usize>> {
        let mut last: BTreeMap<QubitId, usize> = BTreeMap::new();
        let mut deps = Vec::with_capacity(self.ops.len());
        for (i, op) in self.ops.iter().enumerate() {
            let mut d: Vec<usize> = op.qubits.iter().filter_map(|q| last.get(q).copied()).collect();
            d.sort_unstable();
            d.dedup();
            deps.push(d);
            for &q in &op.qubits {
                last.insert(q, i);
            }
        }
        deps
    }

    /// Largest qubit id plus one, i.e. the dense register width.
    pub fn width(&self) -> usize {
        self.qubits.iter().map(|q| q.id as usize + 1).max().unwrap_or(0)
    }
}
