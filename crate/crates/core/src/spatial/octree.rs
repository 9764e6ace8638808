use std::fmt;
use std::str::FromStr;

use super::gray::{binary_to_gray, decode_bits, G3};
use super::{CellIndex, EncodeError, GridConfig};

/// A cell's root-to-leaf path in the octree. Each symbol is the 3-bit
/// concatenation of the x, y and z Gray bits at that level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OctreePath {
    symbols: Vec<u8>,
}

impl OctreePath {
    pub fn new(symbols: Vec<u8>) -> Result<Self, EncodeError> {
        if let Some(&bad) = symbols.iter().find(|&&s| s > 7) {
            return Err(EncodeError::InvalidSymbol(bad));
        }
        Ok(OctreePath { symbols })
    }

    pub fn root() -> Self {
        OctreePath { symbols: vec![] }
    }

    pub fn depth(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Canonical child slot (LLL = 0 … RRR = 7) of each symbol.
    pub fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.symbols.iter().map(|&s| Self::symbol_slot(s))
    }

    /// Position of a symbol in the Gray sequence, which is its child slot.
    pub fn symbol_slot(symbol: u8) -> usize {
        G3.iter().position(|&g| g == symbol).expect("symbol < 8")
    }

    pub fn slot_symbol(slot: usize) -> u8 {
        G3[slot]
    }

    pub fn prefix(&self, len: usize) -> OctreePath {
        OctreePath {
            symbols: self.symbols[..len].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &OctreePath) -> bool {
        other.symbols.starts_with(&self.symbols)
    }

    pub fn child(&self, slot: usize) -> OctreePath {
        let mut symbols = self.symbols.clone();
        symbols.push(G3[slot]);
        OctreePath { symbols }
    }

    /// Index of the path among all paths of the same depth, in slot order.
    pub fn to_index(&self) -> usize {
        self.slots().fold(0, |acc, s| acc * 8 + s)
    }

    pub fn from_index(mut index: usize, depth: usize) -> OctreePath {
        let mut symbols = vec![0u8; depth];
        for sym in symbols.iter_mut().rev() {
            *sym = G3[index % 8];
            index /= 8;
        }
        OctreePath { symbols }
    }

    /// The cell, at resolution `depth()` bits per axis, that this path names.
    pub fn to_cell(&self) -> CellIndex {
        let mut gray = [0u64; 3];
        for &s in &self.symbols {
            for (axis, g) in gray.iter_mut().enumerate() {
                *g = (*g << 1) | ((s >> (2 - axis)) & 1) as u64;
            }
        }
        CellIndex::from(gray.map(decode_bits))
    }
}

/// Per-axis reflected Gray codes interleaved level by level (x, y, z; most
/// significant bit first).
pub fn cell_to_octree_path(c: CellIndex, g: &GridConfig) -> Result<OctreePath, EncodeError> {
    if !g.is_valid_cell(c) {
        return Err(EncodeError::InvalidCell);
    }
    let codes = c.as_array().map(|v| binary_to_gray(v, g.bits).expect("valid cell"));
    let symbols = (1..=g.bits)
        .map(|level| {
            codes
                .iter()
                .fold(0u8, |sym, code| (sym << 1) | code.bit(level) as u8)
        })
        .collect();
    Ok(OctreePath { symbols })
}

impl fmt::Display for OctreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("-");
        }
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s:03b}")?;
        }
        Ok(())
    }
}

impl FromStr for OctreePath {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(OctreePath::root());
        }
        let symbols = s
            .split('.')
            .map(|tok| {
                if tok.len() == 3 {
                    u8::from_str_radix(tok, 2).ok()
                } else {
                    None
                }
                .ok_or_else(|| EncodeError::BadPrefix(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        OctreePath::new(symbols)
    }
}
