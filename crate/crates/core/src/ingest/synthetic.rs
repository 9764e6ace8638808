use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::spatial::{GridConfig, SpatialPoint};

/// `n` points drawn uniformly inside the grid box.
pub fn uniform_points<R: Rng + ?Sized>(n: usize, grid: &GridConfig, rng: &mut R) -> Vec<SpatialPoint> {
    (0..n)
        .map(|i| {
            let c: [f64; 3] = std::array::from_fn(|a| rng.gen_range(grid.min[a]..grid.max[a]));
            SpatialPoint::new(format!("u{i}"), c[0], c[1], c[2])
        })
        .collect()
}

/// `n` points around `k` random centres with per-axis standard deviation
/// `spread` times the box side. Draws outside the box are redrawn.
pub fn gaussian_clusters<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    spread: f64,
    grid: &GridConfig,
    rng: &mut R,
) -> Vec<SpatialPoint> {
    let k = k.max(1);
    let centres: Vec<[f64; 3]> = (0..k)
        .map(|_| std::array::from_fn(|a| rng.gen_range(grid.min[a]..grid.max[a])))
        .collect();
    let noise: [Normal<f64>; 3] = std::array::from_fn(|a| {
        Normal::new(0.0, spread.abs() * (grid.max[a] - grid.min[a])).expect("finite spread")
    });
    (0..n)
        .map(|i| {
            let centre = centres[rng.gen_range(0..k)];
            let c = loop {
                let c: [f64; 3] = std::array::from_fn(|a| centre[a] + noise[a].sample(rng));
                if grid.contains(c) {
                    break c;
                }
            };
            SpatialPoint::new(format!("u{i}"), c[0], c[1], c[2])
        })
        .collect()
}
