use std::hash::{Hash, Hasher};
use std::ops::Range;

use crate::spatial::{cell_to_octree_path, prefix_cell_range, CellIndex, KdPrefix, OctreePath, Region3};

use super::{Deployment, RequesterResult, Scheme, SimError};

/// Regions a server aggregates over, in the encoding of one scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionSet {
    Cells(Vec<OctreePath>),
    Prefixes(Vec<KdPrefix>),
}

impl RegionSet {
    pub fn empty(scheme: Scheme) -> Self {
        match scheme {
            Scheme::B => RegionSet::Cells(Vec::new()),
            Scheme::Plus => RegionSet::Prefixes(Vec::new()),
        }
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            RegionSet::Cells(_) => Scheme::B,
            RegionSet::Prefixes(_) => Scheme::Plus,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            RegionSet::Cells(v) => v.len(),
            RegionSet::Prefixes(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            RegionSet::Cells(v) => v.iter().map(ToString::to_string).collect(),
            RegionSet::Prefixes(v) => v.iter().map(ToString::to_string).collect(),
        }
    }

    /// Digest carried in server reports so the requester can tell whether
    /// both servers aggregated over the same regions.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.scheme().tag().hash(&mut h);
        match self {
            RegionSet::Cells(v) => v.iter().for_each(|p| p.symbols().hash(&mut h)),
            RegionSet::Prefixes(v) => v.iter().for_each(|p| p.bits().hash(&mut h)),
        }
        h.finish()
    }

    fn extend(&mut self, other: RegionSet) {
        match (self, other) {
            (RegionSet::Cells(a), RegionSet::Cells(b)) => a.extend(b),
            (RegionSet::Prefixes(a), RegionSet::Prefixes(b)) => a.extend(b),
            _ => unreachable!("region sets of one plan share a scheme"),
        }
    }
}

/// A counting query from the requester.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionQuery {
    Whole,
    Cell(CellIndex),
    /// Half-open range of cell indices per axis.
    CellBox { lo: [u64; 3], hi: [u64; 3] },
    /// Half-open world-coordinate box.
    Box(Region3),
}

/// Disjoint cover of `q` by maximal octree cells (B) or KD prefixes (Plus).
pub fn decompose_region(q: &RegionQuery, dep: &Deployment, scheme: Scheme) -> Result<RegionSet, SimError> {
    let n = dep.grid.cells_per_axis();
    let (lo, hi) = match q {
        RegionQuery::Whole => ([0; 3], [n; 3]),
        RegionQuery::Cell(c) => {
            if !dep.grid.is_valid_cell(*c) {
                return Err(SimError::UnalignedBox(format!("cell {c:?} outside grid")));
            }
            let c = c.as_array();
            (c, c.map(|v| v + 1))
        }
        RegionQuery::CellBox { lo, hi } => {
            if (0..3).any(|a| lo[a] > hi[a] || hi[a] > n) {
                return Err(SimError::UnalignedBox(format!("{lo:?}..{hi:?} outside grid")));
            }
            (*lo, *hi)
        }
        RegionQuery::Box(r) => {
            if scheme == Scheme::Plus && !dep.is_grid_aligned() {
                return cover_explicit(dep, r);
            }
            world_to_cells(dep, r)?
        }
    };
    match scheme {
        Scheme::B => {
            let mut out = Vec::new();
            cover_octree(dep, &lo, &hi, [0; 3], n, 0, &mut out)?;
            Ok(RegionSet::Cells(out))
        }
        Scheme::Plus if dep.is_grid_aligned() => {
            let mut out = Vec::new();
            cover_prefixes(dep, &lo, &hi, KdPrefix::empty(), &mut out)?;
            Ok(RegionSet::Prefixes(out))
        }
        Scheme::Plus => {
            let g = &dep.grid;
            let r = Region3 {
                min: std::array::from_fn(|a| g.boundary(a, lo[a], g.bits)),
                max: std::array::from_fn(|a| g.boundary(a, hi[a], g.bits)),
            };
            cover_explicit(dep, &r)
        }
    }
}

fn world_to_cells(dep: &Deployment, r: &Region3) -> Result<([u64; 3], [u64; 3]), SimError> {
    let g = &dep.grid;
    let n = g.cells_per_axis() as f64;
    let snap = |a: usize, v: f64| -> Result<u64, SimError> {
        let f = (v - g.min[a]) / (g.max[a] - g.min[a]) * n;
        let k = f.round();
        if (f - k).abs() > 1e-9 * n.max(1.0) || k < 0.0 || k > n {
            return Err(SimError::UnalignedBox(format!(
                "coordinate {v} on axis {a} is not a cell boundary"
            )));
        }
        Ok(k as u64)
    };
    let mut lo = [0; 3];
    let mut hi = [0; 3];
    for a in 0..3 {
        lo[a] = snap(a, r.min[a])?;
        hi[a] = snap(a, r.max[a])?;
    }
    Ok((lo, hi))
}

fn overlap(lo: &[u64; 3], hi: &[u64; 3], a: &[u64; 3], b: &[u64; 3]) -> (bool, bool) {
    let disjoint = (0..3).any(|i| b[i] <= lo[i] || a[i] >= hi[i]);
    let inside = (0..3).all(|i| lo[i] <= a[i] && b[i] <= hi[i]);
    (disjoint, inside)
}

fn cover_octree(
    dep: &Deployment,
    lo: &[u64; 3],
    hi: &[u64; 3],
    origin: [u64; 3],
    size: u64,
    level: usize,
    out: &mut Vec<OctreePath>,
) -> Result<(), SimError> {
    let end = origin.map(|v| v + size);
    let (disjoint, inside) = overlap(lo, hi, &origin, &end);
    if disjoint {
        return Ok(());
    }
    if inside {
        let leaf = cell_to_octree_path(CellIndex::from(origin), &dep.grid)?;
        out.push(leaf.prefix(level));
        return Ok(());
    }
    let half = size / 2;
    for slot in 0..8 {
        let child: [u64; 3] = std::array::from_fn(|a| origin[a] + half * ((slot >> (2 - a)) & 1));
        cover_octree(dep, lo, hi, child, half, level + 1, out)?;
    }
    Ok(())
}

fn cover_prefixes(
    dep: &Deployment,
    lo: &[u64; 3],
    hi: &[u64; 3],
    prefix: KdPrefix,
    out: &mut Vec<KdPrefix>,
) -> Result<(), SimError> {
    let (a, b) = prefix_cell_range(&prefix, dep.grid.bits)?;
    let (disjoint, inside) = overlap(lo, hi, &a, &b);
    if disjoint {
        return Ok(());
    }
    // The empty prefix has no share, so a whole-grid query splits once.
    if inside && !prefix.is_empty() {
        out.push(prefix);
        return Ok(());
    }
    if prefix.len() == dep.plus_depth() {
        return Err(SimError::UnalignedBox(format!("prefix {prefix} straddles the box")));
    }
    cover_prefixes(dep, lo, hi, prefix.child(false), out)?;
    cover_prefixes(dep, lo, hi, prefix.child(true), out)
}

fn cover_explicit(dep: &Deployment, q: &Region3) -> Result<RegionSet, SimError> {
    let g = &dep.grid;
    let grid_box = Region3 { min: g.min, max: g.max };
    let q = q.intersect(&grid_box);
    let mut out = Vec::new();
    if !q.is_empty() {
        explicit_rec(dep, &grid_box, &q, KdPrefix::empty(), &mut out)?;
    }
    Ok(RegionSet::Prefixes(out))
}

fn explicit_rec(
    dep: &Deployment,
    grid_box: &Region3,
    q: &Region3,
    prefix: KdPrefix,
    out: &mut Vec<KdPrefix>,
) -> Result<(), SimError> {
    let r = dep.tree.prefix_region(&prefix)?.intersect(grid_box);
    if r.intersect(q).is_empty() {
        return Ok(());
    }
    if q.contains_region(&r) && !prefix.is_empty() {
        out.push(prefix);
        return Ok(());
    }
    if prefix.len() == dep.plus_depth() {
        return Err(SimError::UnalignedBox(format!("prefix {prefix} straddles the box")));
    }
    explicit_rec(dep, grid_box, q, prefix.child(false), out)?;
    explicit_rec(dep, grid_box, q, prefix.child(true), out)
}

/// One query per coarse cell at `level`: `8^level` disjoint boxes tiling the grid.
pub fn cover_queries(dep: &Deployment, level: u32) -> Vec<RegionQuery> {
    let level = level.min(dep.grid.bits);
    let shift = dep.grid.bits - level;
    let k = 1u64 << level;
    let mut out = Vec::with_capacity((k * k * k) as usize);
    for x in 0..k {
        for y in 0..k {
            for z in 0..k {
                let lo = [x, y, z].map(|v| v << shift);
                out.push(RegionQuery::CellBox {
                    lo,
                    hi: lo.map(|v| v + (1 << shift)),
                });
            }
        }
    }
    out
}

/// Regions for a list of queries, with the slice of regions each query owns.
#[derive(Debug, Clone)]
pub struct QueryPlan {
    pub regions: RegionSet,
    pub groups: Vec<Range<usize>>,
}

impl QueryPlan {
    /// Per-query counts: sums of the counts of each query's regions.
    pub fn query_counts(&self, counts: &[u64]) -> Vec<u64> {
        self.groups.iter().map(|g| counts[g.clone()].iter().sum()).collect()
    }

    pub fn query_counts_of(&self, result: &RequesterResult) -> Vec<u64> {
        self.query_counts(&result.counts)
    }
}

pub fn plan_queries(queries: &[RegionQuery], dep: &Deployment, scheme: Scheme) -> Result<QueryPlan, SimError> {
    let mut regions = RegionSet::empty(scheme);
    let mut groups = Vec::with_capacity(queries.len());
    for q in queries {
        let start = regions.len();
        regions.extend(decompose_region(q, dep, scheme)?);
        groups.push(start..regions.len());
    }
    Ok(QueryPlan { regions, groups })
}
