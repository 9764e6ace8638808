use crate::prg::Lambda;
use crate::spatial::{cell_to_octree_path, cell_to_prefix, GridConfig, KdPrefix, KdTree, OctreePath, SpatialPoint};

use super::SimError;

/// How eSpat+ public parameters reach the servers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PpDelivery {
    /// The client sends a copy to each server.
    #[default]
    PerServer,
    /// The client posts one copy to a public board both servers read.
    Broadcast,
}

impl std::str::FromStr for PpDelivery {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-server" | "per_server" => Ok(PpDelivery::PerServer),
            "broadcast" => Ok(PpDelivery::Broadcast),
            _ => Err(format!("unknown pp delivery {s:?}")),
        }
    }
}

impl std::fmt::Display for PpDelivery {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PpDelivery::PerServer => "per-server",
            PpDelivery::Broadcast => "broadcast",
        })
    }
}

/// Public setup shared by every party: grid, KD-tree and security parameter.
#[derive(Debug, Clone)]
pub struct Deployment {
    pub grid: GridConfig,
    pub tree: KdTree,
    pub lambda: Lambda,
    pub pp_delivery: PpDelivery,
    plus_depth: usize,
    aligned: bool,
}

impl Deployment {
    /// eSpat+ over the uniform tree whose leaves are the grid cells.
    pub fn new(grid: GridConfig, lambda: Lambda) -> Result<Self, SimError> {
        let tree = KdTree::grid_aligned(&grid)?;
        Ok(Deployment {
            plus_depth: tree.height(),
            grid,
            tree,
            lambda,
            pp_delivery: PpDelivery::default(),
            aligned: true,
        })
    }

    /// eSpat+ over an explicit tree, keyed at prefixes of length `depth`.
    pub fn with_tree(grid: GridConfig, tree: KdTree, depth: usize, lambda: Lambda) -> Self {
        Deployment {
            grid,
            plus_depth: depth,
            tree,
            lambda,
            pp_delivery: PpDelivery::default(),
            aligned: false,
        }
    }

    pub fn with_delivery(mut self, delivery: PpDelivery) -> Self {
        self.pp_delivery = delivery;
        self
    }

    pub fn b_depth(&self) -> usize {
        self.grid.depth()
    }

    pub fn plus_depth(&self) -> usize {
        self.plus_depth
    }

    /// True when the tree's depth-3m leaves coincide with the grid cells.
    pub fn is_grid_aligned(&self) -> bool {
        self.aligned
    }

    pub fn encode_b(&self, p: &SpatialPoint) -> Result<OctreePath, SimError> {
        let cell = self.grid.quantize(p)?;
        Ok(cell_to_octree_path(cell, &self.grid)?)
    }

    pub fn encode_plus(&self, p: &SpatialPoint) -> Result<KdPrefix, SimError> {
        let cell = self.grid.quantize(p)?;
        if self.aligned {
            Ok(cell_to_prefix(cell, self.grid.bits, self.plus_depth)?)
        } else {
            Ok(self.tree.point_to_prefix(p.coords(), self.plus_depth)?)
        }
    }
}
