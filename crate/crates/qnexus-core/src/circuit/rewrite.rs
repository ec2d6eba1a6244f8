//! Semantics-preserving peephole rewrites.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::commute::{commutes, shares_qubit};
use super::{GateKind, GateOp, LogicalCircuit, QubitId};

/// How many earlier ops sharing a qubit the backward scan may pass.
const SCAN_LIMIT: usize = 64;

const ANGLE_EPS: f64 = 1e-12;

fn same_set(a: &[QubitId], b: &[QubitId]) -> bool {
    a.len() == b.len() && a.iter().all(|q| b.contains(q))
}

/// Operand equality modulo the symmetries of the gate.
fn same_operands(kind: &GateKind, a: &[QubitId], b: &[QubitId]) -> bool {
    match kind {
        GateKind::Cz | GateKind::Swap | GateKind::CPhase(_) | GateKind::Ccz => same_set(a, b),
        GateKind::Toffoli => a[2] == b[2] && same_set(&a[..2], &b[..2]),
        _ => a == b,
    }
}

fn are_inverses(a: &GateOp, b: &GateOp) -> bool {
    use GateKind::*;
    let pair = matches!(
        (&a.kind, &b.kind),
        (H, H)
            | (X, X)
            | (Z, Z)
            | (Cnot, Cnot)
            | (Cz, Cz)
            | (Swap, Swap)
            | (T, Tdg)
            | (Tdg, T)
            | (Toffoli, Toffoli)
            | (Ccz, Ccz)
    );
    pair && same_operands(&a.kind, &a.qubits, &b.qubits)
}

fn merged_rotation(a: &GateOp, b: &GateOp) -> Option<GateKind> {
    match (&a.kind, &b.kind) {
        (GateKind::Rz(x), GateKind::Rz(y)) if a.qubits == b.qubits => Some(GateKind::Rz(x + y)),
        (GateKind::CPhase(x), GateKind::CPhase(y)) if same_set(&a.qubits, &b.qubits) => Some(GateKind::CPhase(x + y)),
        _ => None,
    }
}

/// Whether a rotation is the identity up to a global phase.
fn is_trivial_rotation(kind: &GateKind) -> bool {
    match kind {
        GateKind::Rz(a) | GateKind::CPhase(a) => {
            let r = libm::fmod(libm::fabs(*a), 2.0 * PI);
            r < ANGLE_EPS || 2.0 * PI - r < ANGLE_EPS
        }
        _ => false,
    }
}

/// Cancels inverse pairs and merges rotations, looking through ops that
/// commute with the incoming gate.
///
/// Each incoming op scans backwards over earlier ops it shares a qubit with.
/// It cancels against an inverse, merges into a rotation on the same
/// operands, passes a commuting op, or stops at the first blocker. Tags of
/// surviving ops are kept; a merged rotation keeps the earlier op's tag.
pub fn rewrite_depth_reduce(c: &LogicalCircuit) -> LogicalCircuit {
    let mut out: Vec<Option<GateOp>> = Vec::with_capacity(c.ops.len());
    // Live slots per qubit, in order, so the backward scan only visits relevant ops.
    let width = c.width();
    let mut on_wire: Vec<Vec<usize>> = alloc::vec![Vec::new(); width];

    for op in &c.ops {
        if is_trivial_rotation(&op.kind) {
            continue;
        }
        let mut candidates: Vec<usize> = Vec::new();
        for &q in &op.qubits {
            candidates.extend(on_wire[q as usize].iter().rev().take(SCAN_LIMIT).copied());
        }
        candidates.sort_unstable_by(|a, b| b.cmp(a));
        candidates.dedup();

        let mut absorbed = false;
        for (seen, &idx) in candidates.iter().enumerate() {
            if seen >= SCAN_LIMIT {
                break;
            }
            let Some(prev) = out[idx].as_ref() else { continue };
            debug_assert!(shares_qubit(prev, op));
            if are_inverses(prev, op) {
                out[idx] = None;
                absorbed = true;
                break;
            }
            if let Some(kind) = merged_rotation(prev, op) {
                if is_trivial_rotation(&kind) {
                    out[idx] = None;
                } else if let Some(p) = out[idx].as_mut() {
                    p.kind = kind;
                }
                absorbed = true;
                break;
            }
            if !commutes(prev, op) {
                break;
            }
        }
        if absorbed {
            // Cancellation and merging need identical operand sets.
            for &q in &op.qubits {
                on_wire[q as usize].retain(|&i| out[i].is_some());
            }
            continue;
        }
        let idx = out.len();
        out.push(Some(op.clone()));
        for &q in &op.qubits {
            on_wire[q as usize].push(idx);
        }
    }

    let mut r = LogicalCircuit {
        qubits: c.qubits.clone(),
        ops: out.into_iter().flatten().collect(),
        metadata: c.metadata.clone(),
    };
    r.metadata.params.insert("rewritten".into(), "true".into());
    r
}
