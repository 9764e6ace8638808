//! eSpat-B keys for a few points, summed per octree region by two servers.

use espat::espat_b::{keygen_b, CellRegions};
use espat::group::GroupValue;
use espat::prg::Lambda;
use espat::spatial::{cell_to_octree_path, GridConfig, OctreePath};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let grid = GridConfig::new([0.0; 3], [8.0; 3], 3).unwrap();
    let points = [[0.5, 0.5, 0.5], [1.5, 0.2, 0.9], [7.0, 7.0, 7.0], [0.1, 0.3, 0.2]];

    // Regions: the eight top-level octants plus one leaf.
    let mut regions: Vec<OctreePath> = (0..8).map(|s| OctreePath::root().child(s)).collect();
    regions.push(cell_to_octree_path(grid.quantize_coords([0.5; 3]).unwrap(), &grid).unwrap());
    let index = CellRegions::new(&regions);

    let mut acc = [vec![GroupValue::ZERO; regions.len()], vec![GroupValue::ZERO; regions.len()]];
    for p in points {
        let alpha = cell_to_octree_path(grid.quantize_coords(p).unwrap(), &grid).unwrap();
        let (k0, k1) = keygen_b(Lambda::L128, &alpha, GroupValue::ONE, &mut rng).unwrap();
        for (b, key) in [k0, k1].iter().enumerate() {
            for (a, y) in acc[b].iter_mut().zip(key.eval_indexed(&index).unwrap()) {
                *a += y;
            }
        }
    }
    for (r, (a, b)) in regions.iter().zip(acc[0].iter().zip(&acc[1])) {
        println!("region {:<4} count {}", r.to_string(), (*a + *b).as_signed());
    }
}
