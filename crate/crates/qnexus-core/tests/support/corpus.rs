//! Random circuits on up to 64 qubits and the structural checks every
//! heterogeneous schedule must pass.

use std::collections::BTreeMap;

use proptest::prelude::*;
use qnexus_core::arch::{builtin_architecture, ArchitectureSpec};
use qnexus_core::circuit::{GateKind, GateOp, LogicalCircuit};
use qnexus_core::compiler::{audit, Decision, EventKind, KeepReason, MoveReason, ScheduledProgram};

pub fn op(n: u32) -> impl Strategy<Value = GateOp> {
    let kinds = prop_oneof![
        3 => Just(GateKind::H),
        1 => Just(GateKind::S),
        2 => Just(GateKind::T),
        1 => (1u32..6).prop_map(|k| GateKind::Rz(std::f64::consts::PI / (1 << k) as f64)),
        4 => Just(GateKind::Cnot),
        1 => Just(GateKind::Cz),
        2 => (1u32..6).prop_map(|k| GateKind::CPhase(std::f64::consts::PI / (1 << k) as f64)),
        1 => Just(GateKind::Swap),
        1 => Just(GateKind::Toffoli),
        1 => Just(GateKind::Measure),
    ];
    (kinds, Just((0..n).collect::<Vec<u32>>()).prop_shuffle()).prop_filter_map("arity", move |(k, q)| {
        let a = k.arity();
        (a as u32 <= n).then(|| GateOp::new(k, &q[..a]))
    })
}

pub fn circuit() -> impl Strategy<Value = LogicalCircuit> {
    (1u32..=64).prop_flat_map(|n| {
        prop::collection::vec(op(n), 1..80).prop_map(move |ops| {
            let mut c = LogicalCircuit::new("random", n);
            for o in ops {
                c.push_op(o);
            }
            c
        })
    })
}

pub fn archs() -> Vec<ArchitectureSpec> {
    ["A1", "A2", "A3"].iter().map(|n| builtin_architecture(n).unwrap()).collect()
}

pub fn check(p: &ScheduledProgram) -> Result<(), TestCaseError> {
    let violations = audit(p);
    prop_assert!(violations.is_empty(), "{:?}", violations);
    prop_assert!(p.events.iter().all(|e| e.label != "SWAP"));
    prop_assert_eq!(p.counters.swap, 0);

    // Every write is matched by a later read on the same qubit and memory.
    let mut open: BTreeMap<(u32, usize), i64> = BTreeMap::new();
    for e in &p.events {
        let key = (e.qubits[0], e.module);
        match e.kind {
            EventKind::TransferWrite => *open.entry(key).or_default() += 1,
            EventKind::TransferRead => {
                let n = open.entry(key).or_default();
                prop_assert!(*n > 0, "read without write at {}", e.start_ns);
                *n -= 1;
            }
            _ => {}
        }
    }
    prop_assert!(open.values().all(|&n| n == 0), "unread writes");

    for r in &p.routes {
        match (r.decision, r.reason) {
            (Decision::Move(_), Some(MoveReason::Router)) => prop_assert!(r.move_cost.unwrap() <= r.keep_cost),
            (Decision::Keep(KeepReason::Cheaper), None) => prop_assert!(r.move_cost.unwrap() >= r.keep_cost),
            _ => {}
        }
    }
    let masses: f64 = qnexus_core::compiler::Category::ALL.iter().map(|&c| p.budget.mass(c)).sum();
    prop_assert!((masses - p.total_error()).abs() <= 1e-12);
    Ok(())
}
