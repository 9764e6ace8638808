//! Seed expansion and seed-to-group conversion.
//!
//! Every output block is `AES_k(s) ^ s` where `k` is one of a small set of
//! public fixed keys, one per counter. The counter separates the eight (or two)
//! child seeds, the block holding the control bits, and the conversion outputs.
//! Seeds shorter than 128 bits occupy the low bits of the AES input block and
//! outputs are truncated to the same width.

use std::fmt;
use std::sync::OnceLock;

use aes::cipher::{BlockEncrypt, KeyInit};
use aes::Aes128;
use rand::{CryptoRng, RngCore};

use crate::group::GroupValue;

/// Counters `0..8` are child seeds; counter 8 carries the packed control bits.
const CTR_CONTROL_8: usize = 8;
/// `expand2` uses counters 0 and 1 for seeds and 2 for control bits.
const CTR_CONTROL_2: usize = 2;
const CTR_CONVERT: usize = 9;
const CTR_PAIR_SEED: usize = 10;
const CTR_PAIR_VALUE: usize = 11;
const NUM_COUNTERS: usize = 12;

// Hex digits of pi; the counter goes in the low byte.
const FIXED_KEY_BASE: u128 = 0x243f_6a88_85a3_08d3_1319_8a2e_0370_7300;

fn fixed_ciphers() -> &'static [Aes128; NUM_COUNTERS] {
    static CIPHERS: OnceLock<[Aes128; NUM_COUNTERS]> = OnceLock::new();
    CIPHERS.get_or_init(|| {
        std::array::from_fn(|ctr| {
            let key = (FIXED_KEY_BASE | ctr as u128).to_le_bytes();
            Aes128::new(&key.into())
        })
    })
}

#[inline]
fn block(ctr: usize, input: u128) -> u128 {
    let mut b = input.to_le_bytes().into();
    fixed_ciphers()[ctr].encrypt_block(&mut b);
    u128::from_le_bytes(b.into()) ^ input
}

/// Security parameter λ in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lambda(u32);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("security parameter must be a multiple of 8 in 32..=128, got {0}")]
pub struct InvalidLambda(pub u32);

impl Lambda {
    pub const L128: Lambda = Lambda(128);
    pub const L64: Lambda = Lambda(64);

    pub fn new(bits: u32) -> Result<Self, InvalidLambda> {
        if (32..=128).contains(&bits) && bits.is_multiple_of(8) {
            Ok(Lambda(bits))
        } else {
            Err(InvalidLambda(bits))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn bytes(self) -> usize {
        self.0 as usize / 8
    }

    #[inline]
    pub fn mask(self) -> u128 {
        if self.0 == 128 {
            u128::MAX
        } else {
            (1u128 << self.0) - 1
        }
    }
}

impl Default for Lambda {
    fn default() -> Self {
        Lambda::L128
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A λ-bit seed, stored in the low bits of a `u128`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Seed(u128);

impl Seed {
    pub const ZERO: Seed = Seed(0);

    /// Builds a seed, discarding bits above λ.
    pub fn new(value: u128, lambda: Lambda) -> Self {
        Seed(value & lambda.mask())
    }

    pub fn random<R: RngCore + CryptoRng + ?Sized>(rng: &mut R, lambda: Lambda) -> Self {
        let mut buf = [0u8; 16];
        rng.fill_bytes(&mut buf);
        Seed::new(u128::from_le_bytes(buf), lambda)
    }

    pub fn value(self) -> u128 {
        self.0
    }

    /// `self` when `flag` is set, the zero seed otherwise.
    #[inline]
    pub fn select(self, flag: bool) -> Seed {
        if flag {
            self
        } else {
            Seed::ZERO
        }
    }
}

impl std::ops::BitXor for Seed {
    type Output = Seed;
    #[inline]
    fn bitxor(self, rhs: Seed) -> Seed {
        Seed(self.0 ^ rhs.0)
    }
}

impl std::ops::BitXorAssign for Seed {
    #[inline]
    fn bitxor_assign(&mut self, rhs: Seed) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seed({:032x})", self.0)
    }
}

/// Eight children in canonical order LLL, LLR, LRL, LRR, RLL, RLR, RRL, RRR.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandedBlock8 {
    pub children: [(Seed, bool); 8],
}

/// Left and right children.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandedBlock2 {
    pub children: [(Seed, bool); 2],
}

impl ExpandedBlock2 {
    pub fn left(&self) -> (Seed, bool) {
        self.children[0]
    }

    pub fn right(&self) -> (Seed, bool) {
        self.children[1]
    }
}

/// Stateless PRG bound to a security parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prg {
    lambda: Lambda,
}

impl Prg {
    pub fn new(lambda: Lambda) -> Self {
        Prg { lambda }
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    #[inline]
    fn seed_block(&self, ctr: usize, s: Seed) -> Seed {
        Seed::new(block(ctr, s.0), self.lambda)
    }

    /// `G: {0,1}^λ → {0,1}^{8λ+8}`.
    pub fn expand8(&self, s: Seed) -> ExpandedBlock8 {
        let controls = block(CTR_CONTROL_8, s.0);
        ExpandedBlock8 {
            children: std::array::from_fn(|i| {
                (self.seed_block(i, s), (controls >> i) & 1 == 1)
            }),
        }
    }

    /// `G: {0,1}^λ → {0,1}^{2λ+2}`.
    pub fn expand2(&self, s: Seed) -> ExpandedBlock2 {
        let controls = block(CTR_CONTROL_2, s.0);
        ExpandedBlock2 {
            children: [
                (self.seed_block(0, s), controls & 1 == 1),
                (self.seed_block(1, s), (controls >> 1) & 1 == 1),
            ],
        }
    }

    /// Maps a seed to a pseudorandom group element (low 64 bits, little-endian).
    pub fn convert(&self, s: Seed) -> GroupValue {
        GroupValue(block(CTR_CONVERT, s.0) as u64)
    }

    /// Maps a seed to a fresh seed and a group element, from disjoint counters.
    pub fn convert_pair(&self, s: Seed) -> (Seed, GroupValue) {
        (
            self.seed_block(CTR_PAIR_SEED, s),
            GroupValue(block(CTR_PAIR_VALUE, s.0) as u64),
        )
    }
}
