//! Bit-packed wire encoding shared by all key and parameter formats.
//!
//! Every message starts with a fixed 9-byte header:
//! `magic[4] | version u8 | tag u8 | lambda u8 | depth u16 LE`, followed by a
//! body packed LSB-first and zero-padded to a whole byte.

use crate::group::GroupValue;
use crate::prg::{Lambda, Seed};

pub const FORMAT_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("unexpected tag {0}")]
    BadTag(u8),
    #[error("invalid security parameter {0}")]
    BadLambda(u8),
    #[error("message truncated")]
    Truncated,
    #[error("message length {found} does not match expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid field: {0}")]
    Invalid(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub magic: [u8; 4],
    pub tag: u8,
    pub lambda: Lambda,
    pub depth: u16,
}

impl Header {
    pub fn write(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.magic);
        out.push(FORMAT_VERSION);
        out.push(self.tag);
        out.push(self.lambda.bits() as u8);
        out.extend_from_slice(&self.depth.to_le_bytes());
    }

    pub fn read(bytes: &[u8], magic: [u8; 4]) -> Result<Header, CodecError> {
        if bytes.len() < HEADER_LEN {
            return Err(CodecError::Truncated);
        }
        let found: [u8; 4] = bytes[..4].try_into().unwrap();
        if found != magic {
            return Err(CodecError::BadMagic {
                expected: magic,
                found,
            });
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(CodecError::UnsupportedVersion(bytes[4]));
        }
        let lambda = Lambda::new(bytes[6] as u32).map_err(|_| CodecError::BadLambda(bytes[6]))?;
        Ok(Header {
            magic,
            tag: bytes[5],
            lambda,
            depth: u16::from_le_bytes([bytes[7], bytes[8]]),
        })
    }
}

/// Number of bytes needed to hold `bits` bits.
pub fn packed_len(bits: usize) -> usize {
    bits.div_ceil(8)
}

#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitWriter {
    pub fn with_capacity_bits(bits: usize) -> Self {
        BitWriter {
            bytes: Vec::with_capacity(packed_len(bits)),
            bit_len: 0,
        }
    }

    pub fn write_bits(&mut self, mut value: u128, mut nbits: u32) {
        debug_assert!(nbits == 128 || value >> nbits == 0);
        while nbits > 0 {
            let offset = self.bit_len % 8;
            if offset == 0 {
                self.bytes.push(0);
            }
            let take = (8 - offset as u32).min(nbits);
            let chunk = (value & ((1u128 << take) - 1)) as u8;
            *self.bytes.last_mut().unwrap() |= chunk << offset;
            value = value.checked_shr(take).unwrap_or(0);
            nbits -= take;
            self.bit_len += take as usize;
        }
    }

    pub fn write_bit(&mut self, bit: bool) {
        self.write_bits(bit as u128, 1);
    }

    pub fn write_seed(&mut self, seed: Seed, lambda: Lambda) {
        self.write_bits(seed.value(), lambda.bits());
    }

    pub fn write_group(&mut self, v: GroupValue) {
        self.write_bits(v.0 as u128, 64);
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

#[derive(Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    pub fn read_bits(&mut self, nbits: u32) -> Result<u128, CodecError> {
        if self.pos + nbits as usize > self.bytes.len() * 8 {
            return Err(CodecError::Truncated);
        }
        let mut value = 0u128;
        let mut got = 0u32;
        while got < nbits {
            let offset = (self.pos % 8) as u32;
            let take = (8 - offset).min(nbits - got);
            let byte = self.bytes[self.pos / 8] >> offset;
            let chunk = (byte as u128) & ((1u128 << take) - 1);
            value |= chunk << got;
            got += take;
            self.pos += take as usize;
        }
        Ok(value)
    }

    pub fn read_bit(&mut self) -> Result<bool, CodecError> {
        Ok(self.read_bits(1)? == 1)
    }

    pub fn read_seed(&mut self, lambda: Lambda) -> Result<Seed, CodecError> {
        Ok(Seed::new(self.read_bits(lambda.bits())?, lambda))
    }

    pub fn read_group(&mut self) -> Result<GroupValue, CodecError> {
        Ok(GroupValue(self.read_bits(64)? as u64))
    }

    /// Fails unless only zero padding (fewer than 8 bits) remains.
    pub fn finish(self) -> Result<(), CodecError> {
        let total = self.bytes.len() * 8;
        if total - self.pos >= 8 {
            return Err(CodecError::LengthMismatch {
                expected: packed_len(self.pos),
                found: self.bytes.len(),
            });
        }
        if !self.pos.is_multiple_of(8) {
            let tail = self.bytes[self.pos / 8] >> (self.pos % 8);
            if tail != 0 {
                return Err(CodecError::Invalid("nonzero padding"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn bit_fields_round_trip(fields in proptest::collection::vec((any::<u128>(), 1u32..=128), 0..40)) {
            let mut w = BitWriter::default();
            let fields: Vec<(u128, u32)> = fields
                .into_iter()
                .map(|(v, n)| (if n == 128 { v } else { v & ((1u128 << n) - 1) }, n))
                .collect();
            for &(v, n) in &fields {
                w.write_bits(v, n);
            }
            let bits = w.bit_len();
            let bytes = w.into_bytes();
            prop_assert_eq!(bytes.len(), packed_len(bits));
            let mut r = BitReader::new(&bytes);
            for &(v, n) in &fields {
                prop_assert_eq!(r.read_bits(n).unwrap(), v);
            }
            prop_assert!(r.finish().is_ok());
        }
    }

    #[test]
    fn header_rejects_wrong_magic_and_version() {
        let mut out = Vec::new();
        Header {
            magic: *b"TEST",
            tag: 1,
            lambda: Lambda::L128,
            depth: 7,
        }
        .write(&mut out);
        assert_eq!(out.len(), HEADER_LEN);
        let h = Header::read(&out, *b"TEST").unwrap();
        assert_eq!(h.depth, 7);
        assert_eq!(h.tag, 1);
        assert!(matches!(
            Header::read(&out, *b"NOPE"),
            Err(CodecError::BadMagic { .. })
        ));
        out[4] = 9;
        assert_eq!(
            Header::read(&out, *b"TEST"),
            Err(CodecError::UnsupportedVersion(9))
        );
        assert_eq!(Header::read(&out[..5], *b"TEST"), Err(CodecError::Truncated));
    }

    #[test]
    fn reader_detects_truncation_and_trailing_bytes() {
        let mut w = BitWriter::default();
        w.write_bits(0x1ff, 9);
        let bytes = w.into_bytes();
        let mut r = BitReader::new(&bytes);
        assert!(r.read_bits(17).is_err());

        let mut padded = bytes.clone();
        padded.push(0);
        let mut r = BitReader::new(&padded);
        r.read_bits(9).unwrap();
        assert!(matches!(r.finish(), Err(CodecError::LengthMismatch { .. })));
    }
}
