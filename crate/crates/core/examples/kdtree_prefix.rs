//! Build a median-split KD-tree and map points to prefixes and back to boxes.

use espat::spatial::{KdTree, GridConfig, cell_to_prefix, prefix_cell_range};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let pts: Vec<[f64; 3]> = (0..64)
        .map(|_| [rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0), rng.gen_range(0.0..2.0)])
        .collect();
    let tree = KdTree::build(&pts, 6).unwrap();
    println!("explicit tree: {} nodes, height {}", tree.node_count(), tree.height());

    let probe = [3.3, 7.1, 0.4];
    let prefix = tree.point_to_prefix(probe, 5).unwrap();
    let region = tree.prefix_region(&prefix).unwrap();
    println!("{probe:?} -> prefix {prefix}, box {:?}..{:?}", region.min, region.max);
    assert!(region.contains(probe));

    // The grid-aligned tree works on integer cell indices.
    let grid = GridConfig::new([0.0; 3], [1.0; 3], 3).unwrap();
    let aligned = KdTree::grid_aligned(&grid).unwrap();
    let cell = grid.quantize_coords([0.6, 0.1, 0.9]).unwrap();
    let p = cell_to_prefix(cell, grid.bits, 4).unwrap();
    let (lo, hi) = prefix_cell_range(&p, grid.bits).unwrap();
    println!("aligned tree height {}: cell {:?} prefix {p} covers cells {lo:?}..{hi:?}", aligned.height(), cell.as_array());
}
