//! Spatial encodings: grid quantization, Gray-coded octree paths and KD-tree
//! prefixes.

mod grid;
mod gray;
mod kdtree;
mod octree;

pub use grid::{CellIndex, GridConfig, SpatialPoint};
pub use gray::{binary_to_gray, gray_to_binary, GrayCode, G3};
pub use kdtree::{cell_to_prefix, prefix_cell_range, Axis, KdNode, KdPrefix, KdTree, Region3};
pub use octree::{cell_to_octree_path, OctreePath};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EncodeError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("point ({0}, {1}, {2}) lies outside the grid")]
    OutOfBounds(f64, f64, f64),
    #[error("value {value} does not fit in {width} bits")]
    WidthOverflow { value: u64, width: u32 },
    #[error("cell index exceeds grid resolution")]
    InvalidCell,
    #[error("octree symbol {0} out of range")]
    InvalidSymbol(u8),
    #[error("cannot build a KD-tree from an empty point set")]
    EmptyInput,
    #[error("KD-tree walk ended at depth {reached}, requested {requested}")]
    DepthExceeded { reached: usize, requested: usize },
    #[error("invalid KD-tree depth {0}")]
    InvalidDepth(u32),
    #[error("malformed prefix string {0:?}")]
    BadPrefix(String),
    #[error("KD-tree encoding: {0}")]
    Codec(#[from] crate::codec::CodecError),
}
