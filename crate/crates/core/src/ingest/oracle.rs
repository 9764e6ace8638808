use crate::sim::{Deployment, RegionSet};
use crate::spatial::{prefix_cell_range, SpatialPoint};

/// Exact plaintext counts per region.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlainHistogram {
    pub counts: Vec<u64>,
    /// Indices of input points outside the grid.
    pub excluded: Vec<usize>,
}

impl PlainHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Count points per region by direct membership: cell coordinates against
/// the region's cell block, or coordinates against an explicit prefix box.
pub fn oracle_count(points: &[SpatialPoint], regions: &RegionSet, dep: &Deployment) -> PlainHistogram {
    let mut hist = PlainHistogram {
        counts: vec![0; regions.len()],
        excluded: Vec::new(),
    };
    let bits = dep.grid.bits;
    // Precompute each region's membership test once.
    let boxes: Vec<Option<([u64; 3], [u64; 3])>> = match regions {
        RegionSet::Cells(paths) => paths
            .iter()
            .map(|p| {
                let shift = bits - p.depth() as u32;
                let c = p.to_cell().as_array();
                Some((c.map(|v| v << shift), c.map(|v| (v + 1) << shift)))
            })
            .collect(),
        RegionSet::Prefixes(prefixes) if dep.is_grid_aligned() => prefixes
            .iter()
            .map(|p| prefix_cell_range(p, bits).ok())
            .collect(),
        RegionSet::Prefixes(prefixes) => prefixes.iter().map(|_| None).collect(),
    };
    let explicit: Vec<_> = match regions {
        RegionSet::Prefixes(prefixes) if !dep.is_grid_aligned() => {
            prefixes.iter().map(|p| dep.tree.prefix_region(p).ok()).collect()
        }
        _ => Vec::new(),
    };
    for (i, p) in points.iter().enumerate() {
        let Ok(cell) = dep.grid.quantize(p) else {
            hist.excluded.push(i);
            continue;
        };
        let c = cell.as_array();
        for (r, count) in hist.counts.iter_mut().enumerate() {
            let inside = match &boxes[r] {
                Some((lo, hi)) => (0..3).all(|a| lo[a] <= c[a] && c[a] < hi[a]),
                None => explicit
                    .get(r)
                    .and_then(|b| b.as_ref())
                    .is_some_and(|b| b.contains(p.coords())),
            };
            *count += inside as u64;
        }
    }
    hist
}
