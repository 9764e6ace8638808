use std::fmt;

use super::EncodeError;

/// The 3-bit reflected Gray sequence; position `i` is the octree child slot
/// whose symbol is `G3[i]`.
pub const G3: [u8; 8] = [0b000, 0b001, 0b011, 0b010, 0b110, 0b111, 0b101, 0b100];

/// An `width`-bit reflected Gray codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GrayCode {
    bits: u64,
    width: u32,
}

impl GrayCode {
    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn width(self) -> u32 {
        self.width
    }

    /// Bit at 1-based position `level`, most significant first.
    pub fn bit(self, level: u32) -> bool {
        debug_assert!(level >= 1 && level <= self.width);
        (self.bits >> (self.width - level)) & 1 == 1
    }
}

impl fmt::Display for GrayCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for level in 1..=self.width {
            f.write_str(if self.bit(level) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn fits(v: u64, width: u32) -> bool {
    width >= 64 || v >> width == 0
}

pub fn binary_to_gray(v: u64, width: u32) -> Result<GrayCode, EncodeError> {
    if width == 0 || width > 64 || !fits(v, width) {
        return Err(EncodeError::WidthOverflow { value: v, width });
    }
    Ok(GrayCode {
        bits: v ^ (v >> 1),
        width,
    })
}

pub fn gray_to_binary(g: GrayCode) -> u64 {
    decode_bits(g.bits)
}

pub(crate) fn decode_bits(g: u64) -> u64 {
    let mut v = g;
    let mut shift = 1;
    while shift < 64 {
        v ^= v >> shift;
        shift <<= 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_bit_sequence() {
        let codes: Vec<String> = (0..8)
            .map(|v| binary_to_gray(v, 3).unwrap().to_string())
            .collect();
        assert_eq!(
            codes,
            ["000", "001", "011", "010", "110", "111", "101", "100"]
        );
        for v in 0..8u64 {
            assert_eq!(binary_to_gray(v, 3).unwrap().bits() as u8, G3[v as usize]);
        }
    }

    #[test]
    fn zero_is_all_zero() {
        for m in 1..=16 {
            assert_eq!(binary_to_gray(0, m).unwrap().to_string(), "0".repeat(m as usize));
        }
    }

    #[test]
    fn four_bit_ten() {
        assert_eq!(binary_to_gray(10, 4).unwrap().to_string(), "1111");
    }

    #[test]
    fn width_overflow() {
        assert_eq!(
            binary_to_gray(8, 3),
            Err(EncodeError::WidthOverflow { value: 8, width: 3 })
        );
        assert!(binary_to_gray(u64::MAX, 64).is_ok());
    }

    #[test]
    fn adjacency_and_round_trip_small_widths() {
        for m in 1..=12u32 {
            for v in 0..(1u64 << m) {
                let g = binary_to_gray(v, m).unwrap();
                assert_eq!(gray_to_binary(g), v);
                if v + 1 < 1 << m {
                    let h = binary_to_gray(v + 1, m).unwrap();
                    assert_eq!((g.bits() ^ h.bits()).count_ones(), 1);
                }
            }
        }
    }
}
