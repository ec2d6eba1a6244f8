//! Transfer-patch placement inside a random-access memory.
//!
//! A transfer patch occupies a 2x2 block of storage cells. Storage patches
//! within Manhattan distance `k` of the block are served by it; there are
//! `2k^2 + 6k` such cells, and the transfer patch itself holds one more
//! logical qubit. Blocks sit on the lattice spanned by `(0, 2k+2)` and
//! `(k+2, k+1)`, whose neighborhoods tile the plane without overlap.

use alloc::vec::Vec;

/// Logical qubits one transfer patch serves within `k` swaps.
pub fn neighborhood_capacity(k: u32) -> u64 {
    let k = k as u64;
    2 * k * k + 6 * k + 1
}

/// Number of transfer patches needed so every stored qubit is at most `k`
/// swaps from one.
pub fn place_transfer_patches(n: u64, k: u32) -> u64 {
    n.div_ceil(neighborhood_capacity(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub x: i64,
    pub y: i64,
    /// Index of the serving transfer patch.
    pub transfer: usize,
    /// Swaps needed to bring this slot's qubit onto its transfer patch.
    pub swaps: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferLayout {
    pub k: u32,
    /// Lower-left corner of each 2x2 transfer block.
    pub transfers: Vec<(i64, i64)>,
    /// One slot per stored logical qubit, in qubit order.
    pub slots: Vec<Slot>,
}

impl TransferLayout {
    pub fn max_swaps(&self) -> u32 {
        self.slots.iter().map(|s| s.swaps).max().unwrap_or(0)
    }

    pub fn is_transfer_cell(&self, x: i64, y: i64) -> bool {
        self.transfers.iter().any(|&(bx, by)| (bx..bx + 2).contains(&x) && (by..by + 2).contains(&y))
    }
}

fn block_distance(bx: i64, by: i64, x: i64, y: i64) -> i64 {
    let dx = if x < bx { bx - x } else { (x - (bx + 1)).max(0) };
    let dy = if y < by { by - y } else { (y - (by + 1)).max(0) };
    dx + dy
}

/// Cells around the block at the origin at distances `1..=k`, nearest first.
fn neighborhood(k: u32) -> Vec<(i64, i64, u32)> {
    let k = k as i64;
    let mut cells = Vec::new();
    for y in -k..=k + 1 {
        for x in -k..=k + 1 {
            let d = block_distance(0, 0, x, y);
            if (1..=k).contains(&d) {
                cells.push((x, y, d as u32));
            }
        }
    }
    cells.sort_by_key(|&(x, y, d)| (d, y, x));
    cells
}

/// The `count` lattice sites nearest the origin, in a deterministic order.
fn lattice_sites(k: u32, count: usize) -> Vec<(i64, i64)> {
    let k = k as i64;
    let (v1, v2) = ((0i64, 2 * k + 2), (k + 2, k + 1));
    let mut radius = 1i64;
    loop {
        let mut sites = Vec::new();
        for a in -radius..=radius {
            for b in -radius..=radius {
                sites.push((a * v1.0 + b * v2.0, a * v1.1 + b * v2.1));
            }
        }
        sites.sort_by_key(|&(x, y)| (x * x + y * y, y, x));
        // Sites within the inscribed disc of the enumerated parallelogram are complete.
        let area = v1.0 * v2.1 - v1.1 * v2.0;
        let longest = (v1.0 * v1.0 + v1.1 * v1.1).max(v2.0 * v2.0 + v2.1 * v2.1);
        let inside = |x: i64, y: i64| (x * x + y * y) * longest <= radius * radius * area * area;
        if sites.iter().filter(|&&(x, y)| inside(x, y)).count() >= count {
            sites.truncate(count);
            return sites;
        }
        radius *= 2;
    }
}

/// Concrete layout for `n` stored qubits with at most `k` swaps each.
pub fn placement(n: u64, k: u32) -> TransferLayout {
    let patches = place_transfer_patches(n, k) as usize;
    let transfers = lattice_sites(k, patches);
    let around = neighborhood(k);
    let mut slots = Vec::with_capacity(n as usize);
    let mut remaining = n as usize;
    for (t, &(bx, by)) in transfers.iter().enumerate() {
        slots.push(Slot { x: bx, y: by, transfer: t, swaps: 0 });
        remaining -= 1;
        let take = around.len().min(remaining);
        for &(dx, dy, d) in &around[..take] {
            slots.push(Slot { x: bx + dx, y: by + dy, transfer: t, swaps: d });
        }
        remaining -= take;
    }
    TransferLayout { k, transfers, slots }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(place_transfer_patches(1254, 4), 22);
        assert_eq!(place_transfer_patches(57, 4), 1);
        assert_eq!(place_transfer_patches(58, 4), 2);
        assert_eq!(place_transfer_patches(400, 2), 20);
        assert_eq!(place_transfer_patches(0, 3), 0);
        assert_eq!(neighborhood(4).len() as u64 + 1, neighborhood_capacity(4));
    }

    #[test]
    fn rsa_surface_memory_fills_exactly() {
        let l = placement(1254, 4);
        assert_eq!(l.transfers.len(), 22);
        assert_eq!(l.slots.len(), 1254);
        assert_eq!(l.max_swaps(), 4);
    }
}
