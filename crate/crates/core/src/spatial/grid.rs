use super::EncodeError;

/// Largest supported bits-per-axis; keeps octree depths within 43 levels
/// and packed cell ids within 129 bits.
pub const MAX_GRID_BITS: u32 = 43;

/// Axis-aligned box over (lat °, lon °, alt m) split into `2^bits` cells per
/// axis. Boxes are half-open: `[min, max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub min: [f64; 3],
    pub max: [f64; 3],
    pub bits: u32,
}

impl GridConfig {
    pub fn new(min: [f64; 3], max: [f64; 3], bits: u32) -> Result<Self, EncodeError> {
        if bits == 0 || bits > MAX_GRID_BITS {
            return Err(EncodeError::InvalidGrid(format!(
                "bits per axis must be in 1..={MAX_GRID_BITS}, got {bits}"
            )));
        }
        for axis in 0..3 {
            if !(min[axis].is_finite() && max[axis].is_finite() && min[axis] < max[axis]) {
                return Err(EncodeError::InvalidGrid(format!(
                    "axis {axis}: need finite min < max, got [{}, {})",
                    min[axis], max[axis]
                )));
            }
        }
        Ok(GridConfig { min, max, bits })
    }

    /// Octree depth; equal to the bits per axis.
    pub fn depth(&self) -> usize {
        self.bits as usize
    }

    pub fn cells_per_axis(&self) -> u64 {
        1u64 << self.bits
    }

    pub fn contains(&self, coords: [f64; 3]) -> bool {
        (0..3).all(|a| coords[a] >= self.min[a] && coords[a] < self.max[a])
    }

    pub fn quantize(&self, p: &SpatialPoint) -> Result<CellIndex, EncodeError> {
        self.quantize_coords(p.coords())
    }

    pub fn quantize_coords(&self, c: [f64; 3]) -> Result<CellIndex, EncodeError> {
        if !self.contains(c) {
            return Err(EncodeError::OutOfBounds(c[0], c[1], c[2]));
        }
        let n = self.cells_per_axis();
        let scale = n as f64;
        let idx: [u64; 3] = std::array::from_fn(|a| {
            let f = (c[a] - self.min[a]) / (self.max[a] - self.min[a]) * scale;
            // Rounding can land exactly on n just below the upper bound.
            (f.floor() as u64).min(n - 1)
        });
        Ok(CellIndex::from(idx))
    }

    /// Coordinate of the boundary `numerator / 2^level` of the way along `axis`.
    pub fn boundary(&self, axis: usize, numerator: u64, level: u32) -> f64 {
        let frac = numerator as f64 / (1u64 << level) as f64;
        self.min[axis] + (self.max[axis] - self.min[axis]) * frac
    }

    /// World-space box of a cell.
    pub fn cell_box(&self, cell: CellIndex) -> ([f64; 3], [f64; 3]) {
        let c = cell.as_array();
        (
            std::array::from_fn(|a| self.boundary(a, c[a], self.bits)),
            std::array::from_fn(|a| self.boundary(a, c[a] + 1, self.bits)),
        )
    }

    pub fn is_valid_cell(&self, cell: CellIndex) -> bool {
        cell.as_array().iter().all(|&v| v < self.cells_per_axis())
    }
}

/// A time-stamped location reported by one client.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialPoint {
    pub lat: f64,
    pub lon: f64,
    pub alt: f64,
    pub timestamp: i64,
    pub client_id: String,
}

impl SpatialPoint {
    pub fn new(client_id: impl Into<String>, lat: f64, lon: f64, alt: f64) -> Self {
        SpatialPoint {
            lat,
            lon,
            alt,
            timestamp: 0,
            client_id: client_id.into(),
        }
    }

    /// `(lat, lon, alt)` as the x, y, z axes.
    pub fn coords(&self) -> [f64; 3] {
        [self.lat, self.lon, self.alt]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub ix: u64,
    pub iy: u64,
    pub iz: u64,
}

impl CellIndex {
    pub fn new(ix: u64, iy: u64, iz: u64) -> Self {
        CellIndex { ix, iy, iz }
    }

    pub fn as_array(self) -> [u64; 3] {
        [self.ix, self.iy, self.iz]
    }

    /// The ancestor cell `levels` resolution steps up.
    pub fn coarsen(self, levels: u32) -> CellIndex {
        let s = |v: u64| v.checked_shr(levels).unwrap_or(0);
        CellIndex::new(s(self.ix), s(self.iy), s(self.iz))
    }
}

impl From<[u64; 3]> for CellIndex {
    fn from(a: [u64; 3]) -> Self {
        CellIndex::new(a[0], a[1], a[2])
    }
}
