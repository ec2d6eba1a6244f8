//! Conservative commutation rules and the commutation-aware dependency DAG.
//!
//! Every op acts on each operand wire either diagonally (Z-type), as a
//! controlled bit flip target (X-type) or in some other way. Two ops commute
//! when every shared wire sees the same non-general action from both.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{GateKind, GateOp, LogicalCircuit, QubitId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WireAction {
    ZType,
    XType,
    General,
}

/// Action of `kind` on its operand at `position`.
pub fn wire_action(kind: &GateKind, position: usize) -> WireAction {
    use GateKind::*;
    match kind {
        Z | S | T | Tdg | Rz(_) | Cz | CPhase(_) | Ccz => WireAction::ZType,
        X => WireAction::XType,
        Cnot => {
            if position == 0 {
                WireAction::ZType
            } else {
                WireAction::XType
            }
        }
        Toffoli => {
            if position < 2 {
                WireAction::ZType
            } else {
                WireAction::XType
            }
        }
        H | Swap | Measure | Prep => WireAction::General,
    }
}

pub fn action_on(op: &GateOp, qubit: QubitId) -> Option<WireAction> {
    op.qubits.iter().position(|&q| q == qubit).map(|p| wire_action(&op.kind, p))
}

pub fn shares_qubit(a: &GateOp, b: &GateOp) -> bool {
    a.qubits.iter().any(|q| b.qubits.contains(q))
}

pub fn commutes(a: &GateOp, b: &GateOp) -> bool {
    for (pa, q) in a.qubits.iter().enumerate() {
        if let Some(pb) = b.qubits.iter().position(|x| x == q) {
            let wa = wire_action(&a.kind, pa);
            let wb = wire_action(&b.kind, pb);
            if wa == WireAction::General || wa != wb {
                return false;
            }
        }
    }
    true
}

#[derive(Default)]
struct WireGroups {
    action: Option<WireAction>,
    current: Vec<usize>,
    previous: Vec<usize>,
}

/// Predecessor lists of the commutation-aware DAG.
///
/// On each wire, consecutive ops with the same non-general action form a
/// group; an op depends on every member of the preceding group on each of its
/// wires. The result is sorted and deduplicated per op.
pub fn commutation_dag(c: &LogicalCircuit) -> Vec<Vec<usize>> {
    let mut wires: BTreeMap<QubitId, WireGroups> = BTreeMap::new();
    let mut preds = Vec::with_capacity(c.ops.len());
    for (i, op) in c.ops.iter().enumerate() {
        let mut p = Vec::new();
        for (pos, &q) in op.qubits.iter().enumerate() {
            let a = wire_action(&op.kind, pos);
            let w = wires.entry(q).or_default();
            let joins = a != WireAction::General && w.action == Some(a);
            if !joins {
                w.previous = core::mem::take(&mut w.current);
                w.action = Some(a);
            }
            p.extend_from_slice(&w.previous);
            w.current.push(i);
        }
        p.sort_unstable();
        p.dedup();
        preds.push(p);
    }
    preds
}
