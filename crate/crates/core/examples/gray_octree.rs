//! Quantize a point and show its per-axis Gray codes and octree path.

use espat::spatial::{binary_to_gray, cell_to_octree_path, GridConfig, SpatialPoint};

fn main() {
    let grid = GridConfig::new([39.6, 116.0, 0.0], [40.2, 116.8, 500.0], 4).unwrap();
    let p = SpatialPoint::new("walker", 39.93, 116.41, 52.0);
    let cell = grid.quantize(&p).unwrap();
    println!("point {:?} -> cell {:?}", p.coords(), cell.as_array());
    for (axis, v) in ["lat", "lon", "alt"].iter().zip(cell.as_array()) {
        println!("  {axis}: index {v:>2} gray {}", binary_to_gray(v, grid.bits).unwrap());
    }
    let path = cell_to_octree_path(cell, &grid).unwrap();
    println!("octree path {path} (slots {:?})", path.slots().collect::<Vec<_>>());
    assert_eq!(path.to_cell(), cell);

    // Neighbouring cells differ in a single Gray bit on the moved axis.
    let next = binary_to_gray(cell.ix + 1, grid.bits).unwrap();
    let here = binary_to_gray(cell.ix, grid.bits).unwrap();
    println!("lat neighbour gray {next}, differing bits {}", (here.bits() ^ next.bits()).count_ones());
}
