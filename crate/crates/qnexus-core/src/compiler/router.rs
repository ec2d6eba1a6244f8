//! Keep-or-move decision for idle qubits.
//!
//! Keeping a qubit in the processor for a gap costs its integrated idle
//! error. Moving it costs a write, a read and the storage error accrued in
//! between. The cheaper option wins and ties keep the qubit in place.

use crate::qec::idle_error;

/// Why a qubit stayed in the processor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeepReason {
    /// Some memory could take the qubit but idling was no more expensive.
    Cheaper,
    /// The gap was too short for a round trip to any linked memory.
    Infeasible,
    /// Round trips fit but every such memory was full.
    NoCapacity,
    /// No memory is linked to the processor.
    NoMemory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Keep(KeepReason),
    /// Move to the module with this index.
    Move(usize),
}

/// A memory the qubit could be parked in for the gap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub memory: usize,
    /// Total cost of the round trip, or `None` if the gap is too short.
    pub cost: Option<f64>,
    pub has_capacity: bool,
}

/// Picks the cheapest feasible candidate with room, if it beats `keep_cost`.
/// Candidates are compared in order, so earlier ones win ties.
pub fn decide(keep_cost: f64, candidates: &[Candidate]) -> (Decision, Option<f64>) {
    if candidates.is_empty() {
        return (Decision::Keep(KeepReason::NoMemory), None);
    }
    let mut best: Option<(usize, f64)> = None;
    let mut any_feasible = false;
    for c in candidates {
        let Some(cost) = c.cost else { continue };
        any_feasible = true;
        if !c.has_capacity {
            continue;
        }
        if best.is_none_or(|(_, b)| cost < b) {
            best = Some((c.memory, cost));
        }
    }
    match best {
        Some((m, cost)) if cost < keep_cost => (Decision::Move(m), Some(cost)),
        Some((_, cost)) => (Decision::Keep(KeepReason::Cheaper), Some(cost)),
        None if any_feasible => (Decision::Keep(KeepReason::NoCapacity), None),
        None => (Decision::Keep(KeepReason::Infeasible), None),
    }
}

/// Single-memory form of the decision for an idle gap of `idle_gap_s`.
///
/// The move costs two transfers of error `eps_st` and duration
/// `transfer_s` each, plus storage error accruing at `storage_rate_per_s`
/// over the remaining dwell.
pub fn route_or_idle(
    idle_gap_s: f64,
    qpu_eps_per_cycle: f64,
    qpu_cycle_s: f64,
    eps_st: f64,
    transfer_s: f64,
    storage_rate_per_s: f64,
) -> Decision {
    let keep = idle_error(qpu_eps_per_cycle, idle_gap_s / qpu_cycle_s);
    let dwell = idle_gap_s - 2.0 * transfer_s;
    let cost = (dwell >= 0.0).then_some(2.0 * eps_st + storage_rate_per_s * dwell);
    decide(keep, &[Candidate { memory: 0, cost, has_capacity: true }]).0
}
