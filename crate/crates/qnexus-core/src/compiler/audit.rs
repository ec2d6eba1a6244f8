//! Structural checks over a finished schedule.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::circuit::QubitId;
use crate::time::Nanos;

use super::{Counters, Decision, ErrorBudget, EventKind, KeepReason, ScheduledProgram};

#[derive(Clone, Debug, PartialEq)]
pub enum AuditViolation {
    /// Two events on the same qubit overlap in time.
    QubitOverlap { qubit: QubitId, at_ns: Nanos },
    /// Two qubits occupy the same processor slot at once.
    SlotOverlap { unit: u32, slot: u32, at_ns: Nanos },
    /// A read with no earlier write on the same qubit.
    ReadWithoutWrite { qubit: QubitId, at_ns: Nanos },
    /// A SWAP in a schedule that routes through memory.
    SwapInHeterogeneous { at_ns: Nanos },
    /// A router decision that contradicts its recorded costs.
    RouterInconsistent { qubit: QubitId, at_ns: Nanos, detail: String },
    /// Stored counters or budget differ from the events.
    StaleSummary(String),
}

/// Returns every violation found in `p`; an empty list means the schedule
/// is consistent.
pub fn audit(p: &ScheduledProgram) -> Vec<AuditViolation> {
    let mut out = Vec::new();

    let mut per_qubit: BTreeMap<QubitId, Vec<(Nanos, Nanos, EventKind)>> = BTreeMap::new();
    for e in &p.events {
        for &q in &e.qubits {
            per_qubit.entry(q).or_default().push((e.start_ns, e.end_ns(), e.kind));
        }
    }
    for (&q, evs) in per_qubit.iter_mut() {
        evs.sort_by_key(|&(s, e, _)| (s, e));
        for w in evs.windows(2) {
            if w[1].0 < w[0].1 {
                out.push(AuditViolation::QubitOverlap { qubit: q, at_ns: w[1].0 });
            }
        }
        let mut stored = 0i64;
        for &(s, _, kind) in evs.iter() {
            match kind {
                EventKind::TransferWrite => stored += 1,
                EventKind::TransferRead => {
                    if stored == 0 {
                        out.push(AuditViolation::ReadWithoutWrite { qubit: q, at_ns: s });
                    } else {
                        stored -= 1;
                    }
                }
                _ => {}
            }
        }
    }

    let mut per_slot: BTreeMap<(u32, u32), Vec<(Nanos, Nanos)>> = BTreeMap::new();
    for s in &p.slots {
        per_slot.entry((s.unit, s.slot)).or_default().push((s.start_ns, s.end_ns));
    }
    for (&(unit, slot), iv) in per_slot.iter_mut() {
        iv.sort_unstable();
        for w in iv.windows(2) {
            if w[1].0 < w[0].1 {
                out.push(AuditViolation::SlotOverlap { unit, slot, at_ns: w[1].0 });
            }
        }
    }

    if p.modules.len() > 1 {
        for e in p.events.iter().filter(|e| e.label == "SWAP") {
            out.push(AuditViolation::SwapInHeterogeneous { at_ns: e.start_ns });
        }
    }

    for r in &p.routes {
        if r.reason.is_some() && r.reason != Some(super::MoveReason::Router) {
            continue;
        }
        let bad = match (r.decision, r.move_cost) {
            (Decision::Move(_), Some(m)) => {
                (m > r.keep_cost).then(|| format!("moved at {m:e} over keep {:e}", r.keep_cost))
            }
            (Decision::Move(_), None) => Some(String::from("move without a cost")),
            (Decision::Keep(KeepReason::Cheaper), Some(m)) => {
                (m < r.keep_cost).then(|| format!("kept at {:e} over move {m:e}", r.keep_cost))
            }
            _ => None,
        };
        if let Some(detail) = bad {
            out.push(AuditViolation::RouterInconsistent { qubit: r.qubit, at_ns: r.gap_start_ns, detail });
        }
    }

    if Counters::from_events(&p.events) != p.counters {
        out.push(AuditViolation::StaleSummary(String::from("counters")));
    }
    if ErrorBudget::from_events(&p.events) != p.budget {
        out.push(AuditViolation::StaleSummary(String::from("error budget")));
    }
    let makespan = p.events.iter().map(|e| e.end_ns()).max().unwrap_or(0);
    if makespan != p.makespan_ns {
        out.push(AuditViolation::StaleSummary(String::from("makespan")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{Category, ScheduledEvent};

    fn ev(kind: EventKind, start: Nanos, dur: Nanos, q: QubitId) -> ScheduledEvent {
        ScheduledEvent {
            module: 0,
            core: 0,
            kind,
            start_ns: start,
            duration_ns: dur,
            qubits: alloc::vec![q],
            error: 0.0,
            category: Category::Transfer,
            label: "",
            magic_states: 0,
        }
    }

    fn program(events: Vec<ScheduledEvent>) -> ScheduledProgram {
        ScheduledProgram::finalize(
            "t".into(),
            alloc::vec!["a".into(), "b".into()],
            events,
            Vec::new(),
            Vec::new(),
            0,
            Vec::new(),
        )
    }

    #[test]
    fn clean_program_passes() {
        let p = program(alloc::vec![ev(EventKind::TransferWrite, 0, 10, 0), ev(EventKind::TransferRead, 20, 10, 0)]);
        assert!(audit(&p).is_empty());
    }

    #[test]
    fn catches_overlap_and_orphan_read() {
        let p = program(alloc::vec![ev(EventKind::Gate, 0, 10, 0), ev(EventKind::TransferRead, 5, 10, 0)]);
        let v = audit(&p);
        assert!(v.contains(&AuditViolation::QubitOverlap { qubit: 0, at_ns: 5 }));
        assert!(v.contains(&AuditViolation::ReadWithoutWrite { qubit: 0, at_ns: 5 }));
    }

    #[test]
    fn catches_stale_counters() {
        let mut p = program(alloc::vec![ev(EventKind::TransferWrite, 0, 10, 0)]);
        p.counters.st = 7;
        assert_eq!(audit(&p), alloc::vec![AuditViolation::StaleSummary("counters".into())]);
    }
}
