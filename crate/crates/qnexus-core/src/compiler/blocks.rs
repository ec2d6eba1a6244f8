//! Block consolidation over the commutation-aware DAG.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::circuit::commute::commutation_dag;
use crate::circuit::{GateOp, LogicalCircuit, QubitId};

/// A dependency-closed group of ops executed on one processor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryBlock {
    /// Op indices in execution order.
    pub ops: Vec<usize>,
    /// Sorted qubits touched by the block.
    pub footprint: Vec<QubitId>,
    /// Processor class the block targets (0 is the general-purpose processor).
    pub class: usize,
}

/// Greedy consolidation with one capacity for every op.
pub fn consolidate_blocks(c: &LogicalCircuit, capacity: usize) -> Vec<UnitaryBlock> {
    consolidate_by_class(c, |_| 0, |_| capacity)
}

/// Greedy consolidation where each op belongs to a processor class with its
/// own capacity.
///
/// A block starts at the lowest-index ready op and repeatedly absorbs the
/// lowest-index ready op of the same class whose qubits still fit. An op that
/// does not fit once never fits later in the same block, since the footprint
/// only grows.
pub fn consolidate_by_class(
    c: &LogicalCircuit,
    class_of: impl Fn(&GateOp) -> usize,
    capacity_of: impl Fn(usize) -> usize,
) -> Vec<UnitaryBlock> {
    let preds = commutation_dag(c);
    let n = c.ops.len();
    let mut succs: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    let mut waiting: Vec<usize> = alloc::vec![0; n];
    for (i, p) in preds.iter().enumerate() {
        waiting[i] = p.len();
        for &j in p {
            succs[j].push(i);
        }
    }
    let classes: Vec<usize> = c.ops.iter().map(&class_of).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| waiting[i] == 0).collect();
    let mut blocks = Vec::new();

    while let Some(&first) = ready.iter().next() {
        let class = classes[first];
        let cap = capacity_of(class).max(c.ops[first].qubits.len());
        let mut ops = Vec::new();
        let mut footprint: Vec<QubitId> = Vec::new();
        let mut candidates: BTreeSet<usize> = ready.iter().copied().filter(|&i| classes[i] == class).collect();
        while let Some(i) = candidates.pop_first() {
            let extra = c.ops[i].qubits.iter().filter(|q| !footprint.contains(q)).count();
            if footprint.len() + extra > cap {
                continue;
            }
            for &q in &c.ops[i].qubits {
                if !footprint.contains(&q) {
                    footprint.push(q);
                }
            }
            ops.push(i);
            ready.remove(&i);
            for &s in &succs[i] {
                waiting[s] -= 1;
                if waiting[s] == 0 {
                    ready.insert(s);
                    if classes[s] == class {
                        candidates.insert(s);
                    }
                }
            }
        }
        footprint.sort_unstable();
        blocks.push(UnitaryBlock { ops, footprint, class });
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{generate_aqft, GateKind};

    #[test]
    fn small_circuit_is_one_block() {
        let mut c = LogicalCircuit::new("bell", 2);
        c.push(GateKind::H, &[0]);
        c.push(GateKind::Cnot, &[0, 1]);
        let b = consolidate_blocks(&c, 3);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].ops, alloc::vec![0, 1]);
    }

    #[test]
    fn cnot_chain_needs_many_blocks() {
        let mut c = LogicalCircuit::new("chain", 10);
        for i in 0..9 {
            c.push(GateKind::Cnot, &[i, i + 1]);
        }
        let b = consolidate_blocks(&c, 3);
        assert!(b.len() >= 5);
        assert!(b.iter().all(|b| b.footprint.len() <= 3));
    }

    #[test]
    fn aqft_blocks_partition_ops() {
        let c = generate_aqft(10, 8).unwrap();
        let b = consolidate_blocks(&c, 3);
        let mut seen: Vec<usize> = b.iter().flat_map(|b| b.ops.iter().copied()).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..c.ops.len()).collect::<Vec<_>>());
    }
}
