//! Breadth-first search oracle for transfer-patch layouts.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use qnexus_core::resources::{place_transfer_patches, placement};

/// Grid distances from the 2x2 block at the origin, out to `k`.
pub fn block_bfs(k: u32) -> BTreeMap<(i64, i64), u32> {
    let mut dist = BTreeMap::new();
    let mut queue = VecDeque::new();
    for c in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        dist.insert(c, 0);
        queue.push_back(c);
    }
    while let Some((x, y)) = queue.pop_front() {
        let d = dist[&(x, y)];
        if d == k {
            continue;
        }
        for n in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
            dist.entry(n).or_insert_with(|| {
                queue.push_back(n);
                d + 1
            });
        }
    }
    dist
}

/// Every layout for `n <= max_n` and `k <= max_k` places each qubit at its
/// BFS distance from its transfer block, within `k`, on a cell of its own.
pub fn layouts_within_bound(max_n: u64, max_k: u32) -> Result<(), String> {
    for k in 1..=max_k {
        let reach = block_bfs(k);
        for n in 1..=max_n {
            let layout = placement(n, k);
            if layout.slots.len() != n as usize || layout.transfers.len() as u64 != place_transfer_patches(n, k) {
                return Err(format!("n={n} k={k}: slot or transfer count mismatch"));
            }
            let mut cells = BTreeSet::new();
            for s in &layout.slots {
                let (bx, by) = layout.transfers[s.transfer];
                let d = reach.get(&(s.x - bx, s.y - by)).copied();
                if d != Some(s.swaps) || s.swaps > k {
                    return Err(format!("n={n} k={k}: slot {s:?} is at BFS distance {d:?}"));
                }
                if !cells.insert((s.x, s.y)) {
                    return Err(format!("n={n} k={k}: two qubits share {:?}", (s.x, s.y)));
                }
                if s.swaps > 0 && layout.is_transfer_cell(s.x, s.y) {
                    return Err(format!("n={n} k={k}: stored qubit on a transfer cell"));
                }
            }
        }
    }
    Ok(())
}
