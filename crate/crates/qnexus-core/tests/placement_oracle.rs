//! Transfer-patch layouts checked by breadth-first search on the grid.

mod support;

use qnexus_core::resources::{place_transfer_patches, placement};

#[test]
fn layouts_respect_swap_bound() {
    support::grid::layouts_within_bound(2000, 6).unwrap();
}

#[test]
fn rsa_memory_layout() {
    assert_eq!(place_transfer_patches(1254, 4), 22);
    let layout = placement(1254, 4);
    assert_eq!(layout.max_swaps(), 4);
}
