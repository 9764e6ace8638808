use std::fmt;
use std::str::FromStr;

use super::{CellIndex, EncodeError, GridConfig};
use crate::codec::{CodecError, FORMAT_VERSION};

const KDTREE_MAGIC: [u8; 4] = *b"EKDT";
const EMPTY_MARKER: u8 = 0xff;
/// Deepest uniform tree: 43 halvings per axis keeps split points exact in f64.
const MAX_UNIFORM_DEPTH: usize = 129;
/// Largest tree that will be materialised into explicit nodes.
const MAX_MATERIALIZED_DEPTH: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub fn at_depth(depth: usize) -> Axis {
        match depth % 3 {
            0 => Axis::X,
            1 => Axis::Y,
            _ => Axis::Z,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdNode {
    /// The construction point stored at this node.
    pub point: [f64; 3],
    pub axis: Axis,
    left: Option<usize>,
    right: Option<usize>,
}

impl KdNode {
    pub fn split(&self) -> f64 {
        self.point[self.axis.index()]
    }

    pub fn left(&self) -> Option<usize> {
        self.left
    }

    pub fn right(&self) -> Option<usize> {
        self.right
    }
}

/// Half-open box `[min, max)`; unbounded sides are infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region3 {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Region3 {
    pub fn unbounded() -> Self {
        Region3 {
            min: [f64::NEG_INFINITY; 3],
            max: [f64::INFINITY; 3],
        }
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|a| self.min[a] <= p[a] && p[a] < self.max[a])
    }

    pub fn intersect(&self, other: &Region3) -> Region3 {
        Region3 {
            min: std::array::from_fn(|a| self.min[a].max(other.min[a])),
            max: std::array::from_fn(|a| self.max[a].min(other.max[a])),
        }
    }

    pub fn is_empty(&self) -> bool {
        (0..3).any(|a| self.min[a] >= self.max[a])
    }

    pub fn contains_region(&self, other: &Region3) -> bool {
        (0..3).all(|a| self.min[a] <= other.min[a] && other.max[a] <= self.max[a])
    }
}

/// Branch decisions from the root: `false` = left (`<` split), `true` = right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KdPrefix {
    bits: Vec<bool>,
}

impl KdPrefix {
    pub fn new(bits: Vec<bool>) -> Self {
        KdPrefix { bits }
    }

    pub fn empty() -> Self {
        KdPrefix::default()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn prefix(&self, len: usize) -> KdPrefix {
        KdPrefix::new(self.bits[..len].to_vec())
    }

    pub fn is_prefix_of(&self, other: &KdPrefix) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn child(&self, bit: bool) -> KdPrefix {
        let mut bits = self.bits.clone();
        bits.push(bit);
        KdPrefix { bits }
    }

    /// Length of the longest common prefix.
    pub fn common_len(&self, other: &KdPrefix) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Index among all prefixes of this length (first decision most significant).
    pub fn to_index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| acc * 2 + b as usize)
    }

    pub fn from_index(index: usize, len: usize) -> KdPrefix {
        KdPrefix::new((0..len).map(|i| (index >> (len - 1 - i)) & 1 == 1).collect())
    }
}

impl fmt::Display for KdPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("-");
        }
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for KdPrefix {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "-" {
            return Ok(KdPrefix::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(EncodeError::BadPrefix(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(KdPrefix::new)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Layout {
    /// Arena in pre-order; index 0 is the root.
    Explicit(Vec<KdNode>),
    /// Complete tree splitting every region at its midpoint.
    Uniform { min: [f64; 3], max: [f64; 3] },
}

/// A static 3-d tree. Node at depth `d` splits on axis `d mod 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct KdTree {
    layout: Layout,
    height: usize,
}

/// Per-axis dyadic interval `[k / 2^j, (k+1) / 2^j)` used by uniform trees.
#[derive(Clone, Copy)]
struct Dyadic {
    k: [u64; 3],
    j: [u32; 3],
}

impl Dyadic {
    fn root() -> Self {
        Dyadic { k: [0; 3], j: [0; 3] }
    }

    fn coord(min: f64, max: f64, num: u64, level: u32) -> f64 {
        min + (max - min) * (num as f64 / 2f64.powi(level as i32))
    }

    fn split(&self, axis: usize, min: &[f64; 3], max: &[f64; 3]) -> f64 {
        Self::coord(min[axis], max[axis], 2 * self.k[axis] + 1, self.j[axis] + 1)
    }

    fn step(&mut self, axis: usize, right: bool) {
        self.k[axis] = 2 * self.k[axis] + right as u64;
        self.j[axis] += 1;
    }

    fn region(&self, min: &[f64; 3], max: &[f64; 3]) -> Region3 {
        Region3 {
            min: std::array::from_fn(|a| Self::coord(min[a], max[a], self.k[a], self.j[a])),
            max: std::array::from_fn(|a| Self::coord(min[a], max[a], self.k[a] + 1, self.j[a])),
        }
    }

    fn center(&self, min: &[f64; 3], max: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|a| {
            Self::coord(min[a], max[a], 2 * self.k[a] + 1, self.j[a] + 1)
        })
    }
}

impl KdTree {
    /// Median-split construction: sort by the depth's axis, store the median
    /// point at the node, recurse on the points strictly before and after it.
    /// Stops on empty slices or at `max_depth` levels.
    pub fn build(points: &[[f64; 3]], max_depth: usize) -> Result<KdTree, EncodeError> {
        if points.is_empty() {
            return Err(EncodeError::EmptyInput);
        }
        if max_depth == 0 {
            return Err(EncodeError::InvalidDepth(0));
        }
        if let Some(p) = points.iter().find(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(EncodeError::OutOfBounds(p[0], p[1], p[2]));
        }
        let mut items: Vec<(usize, [f64; 3])> = points.iter().copied().enumerate().collect();
        let mut nodes = Vec::with_capacity(points.len());
        build_rec(&mut items, 0, max_depth, &mut nodes);
        let height = explicit_height(&nodes, Some(0));
        Ok(KdTree {
            layout: Layout::Explicit(nodes),
            height,
        })
    }

    /// Complete tree of the given depth whose splits are region midpoints.
    pub fn uniform(min: [f64; 3], max: [f64; 3], depth: usize) -> Result<KdTree, EncodeError> {
        if depth == 0 || depth > MAX_UNIFORM_DEPTH {
            return Err(EncodeError::InvalidDepth(depth as u32));
        }
        if (0..3).any(|a| !(min[a].is_finite() && max[a].is_finite() && min[a] < max[a])) {
            return Err(EncodeError::InvalidGrid("uniform tree bounds".into()));
        }
        Ok(KdTree {
            layout: Layout::Uniform { min, max },
            height: depth,
        })
    }

    /// Uniform tree whose depth-`3m` leaves are exactly the grid cells.
    pub fn grid_aligned(grid: &GridConfig) -> Result<KdTree, EncodeError> {
        KdTree::uniform(grid.min, grid.max, 3 * grid.depth())
    }

    /// Number of node levels on the longest root path.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.layout, Layout::Uniform { .. })
    }

    pub fn node_count(&self) -> usize {
        match &self.layout {
            Layout::Explicit(nodes) => nodes.len(),
            Layout::Uniform { .. } => (1usize << self.height.min(63)) - 1,
        }
    }

    /// Whether every root path has exactly `height()` nodes.
    pub fn is_complete(&self) -> bool {
        match &self.layout {
            Layout::Explicit(nodes) => nodes.len() + 1 == 1usize << self.height.min(63),
            Layout::Uniform { .. } => true,
        }
    }

    /// Root node in explicit form, for explicit trees.
    pub fn root(&self) -> Option<&KdNode> {
        match &self.layout {
            Layout::Explicit(nodes) => nodes.first(),
            Layout::Uniform { .. } => None,
        }
    }

    pub fn explicit_nodes(&self) -> Option<&[KdNode]> {
        match &self.layout {
            Layout::Explicit(nodes) => Some(nodes),
            Layout::Uniform { .. } => None,
        }
    }

    /// The node reached by following `path` from the root, if it exists.
    pub fn node_at(&self, path: &[bool]) -> Option<KdNode> {
        match &self.layout {
            Layout::Explicit(nodes) => {
                let mut idx = 0;
                for &bit in path {
                    let n = &nodes[idx];
                    idx = if bit { n.right? } else { n.left? };
                }
                Some(nodes[idx])
            }
            Layout::Uniform { min, max } => {
                if path.len() >= self.height {
                    return None;
                }
                let mut d = Dyadic::root();
                for (depth, &bit) in path.iter().enumerate() {
                    d.step(depth % 3, bit);
                }
                let depth = path.len();
                Some(KdNode {
                    point: d.center(min, max),
                    axis: Axis::at_depth(depth),
                    left: None,
                    right: None,
                })
            }
        }
    }

    /// Walks from the root emitting `0` when the coordinate on the node's axis
    /// is below the split and `1` otherwise.
    pub fn point_to_prefix(&self, p: [f64; 3], len: usize) -> Result<KdPrefix, EncodeError> {
        let mut bits = Vec::with_capacity(len);
        match &self.layout {
            Layout::Explicit(nodes) => {
                let mut cur = Some(0);
                while bits.len() < len {
                    let Some(idx) = cur else {
                        return Err(EncodeError::DepthExceeded {
                            reached: bits.len(),
                            requested: len,
                        });
                    };
                    let n = &nodes[idx];
                    let right = p[n.axis.index()] >= n.split();
                    bits.push(right);
                    cur = if right { n.right } else { n.left };
                }
            }
            Layout::Uniform { min, max } => {
                if len > self.height {
                    return Err(EncodeError::DepthExceeded {
                        reached: self.height,
                        requested: len,
                    });
                }
                let mut d = Dyadic::root();
                for depth in 0..len {
                    let axis = depth % 3;
                    let right = p[axis] >= d.split(axis, min, max);
                    bits.push(right);
                    d.step(axis, right);
                }
            }
        }
        Ok(KdPrefix::new(bits))
    }

    /// Box of points whose walk starts with `prefix`. Sides not constrained by
    /// any split on the path are unbounded for explicit trees.
    pub fn prefix_region(&self, prefix: &KdPrefix) -> Result<Region3, EncodeError> {
        let depth_err = |reached| EncodeError::DepthExceeded {
            reached,
            requested: prefix.len(),
        };
        match &self.layout {
            Layout::Explicit(nodes) => {
                let mut region = Region3::unbounded();
                let mut cur = Some(0);
                for (i, &bit) in prefix.bits().iter().enumerate() {
                    let n = &nodes[cur.ok_or_else(|| depth_err(i))?];
                    let a = n.axis.index();
                    if bit {
                        region.min[a] = region.min[a].max(n.split());
                    } else {
                        region.max[a] = region.max[a].min(n.split());
                    }
                    cur = if bit { n.right } else { n.left };
                }
                Ok(region)
            }
            Layout::Uniform { min, max } => {
                if prefix.len() > self.height {
                    return Err(depth_err(self.height));
                }
                let mut d = Dyadic::root();
                for (depth, &bit) in prefix.bits().iter().enumerate() {
                    d.step(depth % 3, bit);
                }
                Ok(d.region(min, max))
            }
        }
    }

    /// Outer box of a uniform tree.
    pub fn bounds(&self) -> Option<Region3> {
        match &self.layout {
            Layout::Uniform { min, max } => Some(Region3 {
                min: *min,
                max: *max,
            }),
            Layout::Explicit(_) => None,
        }
    }

    fn materialize(&self) -> Result<Vec<KdNode>, EncodeError> {
        match &self.layout {
            Layout::Explicit(nodes) => Ok(nodes.clone()),
            Layout::Uniform { .. } => {
                if self.height > MAX_MATERIALIZED_DEPTH {
                    return Err(EncodeError::InvalidDepth(self.height as u32));
                }
                let mut nodes = Vec::with_capacity(self.node_count());
                self.materialize_rec(&mut Vec::new(), &mut nodes);
                Ok(nodes)
            }
        }
    }

    fn materialize_rec(&self, path: &mut Vec<bool>, nodes: &mut Vec<KdNode>) -> Option<usize> {
        let node = self.node_at(path)?;
        let idx = nodes.len();
        nodes.push(node);
        for bit in [false, true] {
            path.push(bit);
            let child = self.materialize_rec(path, nodes);
            path.pop();
            if bit {
                nodes[idx].right = child;
            } else {
                nodes[idx].left = child;
            }
        }
        Some(idx)
    }

    /// `EKDT | version u8 | depth u16 LE | pre-order nodes`, where each slot is
    /// either `0xff` (no node) or `axis u8` followed by the point as three
    /// little-endian f64 values.
    pub fn to_bytes(&self) -> Result<Vec<u8>, EncodeError> {
        let nodes = self.materialize()?;
        let mut out = Vec::with_capacity(7 + nodes.len() * 25 + nodes.len() + 1);
        out.extend_from_slice(&KDTREE_MAGIC);
        out.push(FORMAT_VERSION);
        out.extend_from_slice(&(self.height as u16).to_le_bytes());
        write_preorder(&nodes, Some(0), &mut out);
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<KdTree, EncodeError> {
        if bytes.len() < 7 {
            return Err(CodecError::Truncated.into());
        }
        let magic: [u8; 4] = bytes[..4].try_into().unwrap();
        if magic != KDTREE_MAGIC {
            return Err(CodecError::BadMagic {
                expected: KDTREE_MAGIC,
                found: magic,
            }
            .into());
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(CodecError::UnsupportedVersion(bytes[4]).into());
        }
        let height = u16::from_le_bytes([bytes[5], bytes[6]]) as usize;
        let mut pos = 7;
        let mut nodes = Vec::new();
        let root = read_preorder(bytes, &mut pos, 0, &mut nodes)?;
        if root.is_none() {
            return Err(EncodeError::EmptyInput);
        }
        if pos != bytes.len() {
            return Err(CodecError::LengthMismatch {
                expected: pos,
                found: bytes.len(),
            }
            .into());
        }
        if explicit_height(&nodes, Some(0)) != height {
            return Err(CodecError::Invalid("depth field disagrees with nodes").into());
        }
        Ok(KdTree {
            layout: Layout::Explicit(nodes),
            height,
        })
    }
}

fn build_rec(
    items: &mut [(usize, [f64; 3])],
    depth: usize,
    max_depth: usize,
    nodes: &mut Vec<KdNode>,
) -> Option<usize> {
    if items.is_empty() || depth >= max_depth {
        return None;
    }
    let axis = Axis::at_depth(depth);
    let a = axis.index();
    items.sort_by(|(i, p), (j, q)| {
        p[a].total_cmp(&q[a])
            .then(p[1].total_cmp(&q[1]))
            .then(p[2].total_cmp(&q[2]))
            .then(i.cmp(j))
    });
    let median = items.len() / 2;
    let idx = nodes.len();
    nodes.push(KdNode {
        point: items[median].1,
        axis,
        left: None,
        right: None,
    });
    let (left, rest) = items.split_at_mut(median);
    nodes[idx].left = build_rec(left, depth + 1, max_depth, nodes);
    nodes[idx].right = build_rec(&mut rest[1..], depth + 1, max_depth, nodes);
    Some(idx)
}

fn explicit_height(nodes: &[KdNode], idx: Option<usize>) -> usize {
    match idx {
        None => 0,
        Some(i) => {
            1 + explicit_height(nodes, nodes[i].left).max(explicit_height(nodes, nodes[i].right))
        }
    }
}

fn write_preorder(nodes: &[KdNode], idx: Option<usize>, out: &mut Vec<u8>) {
    match idx {
        None => out.push(EMPTY_MARKER),
        Some(i) => {
            let n = &nodes[i];
            out.push(n.axis as u8);
            for c in n.point {
                out.extend_from_slice(&c.to_le_bytes());
            }
            write_preorder(nodes, n.left, out);
            write_preorder(nodes, n.right, out);
        }
    }
}

fn read_preorder(
    bytes: &[u8],
    pos: &mut usize,
    depth: usize,
    nodes: &mut Vec<KdNode>,
) -> Result<Option<usize>, EncodeError> {
    let marker = *bytes.get(*pos).ok_or(CodecError::Truncated)?;
    *pos += 1;
    if marker == EMPTY_MARKER {
        return Ok(None);
    }
    if marker != Axis::at_depth(depth) as u8 {
        return Err(CodecError::Invalid("axis does not match depth").into());
    }
    let raw = bytes.get(*pos..*pos + 24).ok_or(CodecError::Truncated)?;
    *pos += 24;
    let point: [f64; 3] =
        std::array::from_fn(|i| f64::from_le_bytes(raw[i * 8..i * 8 + 8].try_into().unwrap()));
    let idx = nodes.len();
    nodes.push(KdNode {
        point,
        axis: Axis::at_depth(depth),
        left: None,
        right: None,
    });
    nodes[idx].left = read_preorder(bytes, pos, depth + 1, nodes)?;
    nodes[idx].right = read_preorder(bytes, pos, depth + 1, nodes)?;
    Ok(Some(idx))
}

/// Prefix of the grid-aligned tree for a cell of a `bits`-per-axis grid,
/// computed on integer indices: level `j` takes the next most significant
/// bit of axis `j mod 3`.
pub fn cell_to_prefix(cell: CellIndex, bits: u32, len: usize) -> Result<KdPrefix, EncodeError> {
    if len > 3 * bits as usize {
        return Err(EncodeError::DepthExceeded {
            reached: 3 * bits as usize,
            requested: len,
        });
    }
    let c = cell.as_array();
    if c.iter().any(|&v| bits < 64 && v >> bits != 0) {
        return Err(EncodeError::InvalidCell);
    }
    Ok(KdPrefix::new(
        (0..len)
            .map(|j| (c[j % 3] >> (bits - 1 - (j / 3) as u32)) & 1 == 1)
            .collect(),
    ))
}

/// Half-open per-axis cell ranges covered by a grid-aligned prefix.
pub fn prefix_cell_range(prefix: &KdPrefix, bits: u32) -> Result<([u64; 3], [u64; 3]), EncodeError> {
    if prefix.len() > 3 * bits as usize {
        return Err(EncodeError::DepthExceeded {
            reached: 3 * bits as usize,
            requested: prefix.len(),
        });
    }
    let mut k = [0u64; 3];
    let mut j = [0u32; 3];
    for (depth, &bit) in prefix.bits().iter().enumerate() {
        let a = depth % 3;
        k[a] = 2 * k[a] + bit as u64;
        j[a] += 1;
    }
    let lo = std::array::from_fn(|a| k[a] << (bits - j[a]));
    let hi = std::array::from_fn(|a| (k[a] + 1) << (bits - j[a]));
    Ok((lo, hi))
}
