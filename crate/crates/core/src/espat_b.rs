//! Octree DPF: one tree level per octree level, eight children per node.
//! Keys for a depth-n path carry n levels of eight slot corrections.

use rand::{CryptoRng, RngCore};

use crate::codec::{packed_len, BitReader, BitWriter, CodecError, Header, HEADER_LEN};
use crate::error::FssError;
use crate::group::GroupValue;
use crate::prg::{Lambda, Prg, Seed};
use crate::spatial::OctreePath;
use crate::trie::{PrefixTrie, TrieNode};

const MAGIC: [u8; 4] = *b"ESPB";
/// Full-domain evaluation is refused above 8^8 = 2^24 leaves.
pub const MAX_FULL_EVAL_DEPTH: usize = 8;

/// Seed and control-bit correction for one child slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SlotCorrection {
    pub seed: Seed,
    pub control: bool,
}

pub type LevelCorrection = [SlotCorrection; 8];

/// Octree region paths indexed once for evaluation under many keys.
#[derive(Debug, Clone)]
pub struct CellRegions(PrefixTrie);

impl CellRegions {
    pub fn new(regions: &[OctreePath]) -> Self {
        CellRegions(PrefixTrie::build(regions.iter().map(|r| r.slots().collect::<Vec<_>>())))
    }

    pub fn len(&self) -> usize {
        self.0.len
    }

    pub fn is_empty(&self) -> bool {
        self.0.len == 0
    }

    pub fn max_depth(&self) -> usize {
        self.0.max_depth
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyB {
    party: bool,
    lambda: Lambda,
    seed: Seed,
    levels: Vec<LevelCorrection>,
    final_correction: GroupValue,
}

/// Keys whose shares sum to `beta` at the leaf `alpha` and to zero at every
/// other leaf of the depth-`alpha.depth()` octree.
pub fn keygen_b<R: RngCore + CryptoRng + ?Sized>(
    lambda: Lambda,
    alpha: &OctreePath,
    beta: GroupValue,
    rng: &mut R,
) -> Result<(KeyB, KeyB), FssError> {
    if alpha.depth() == 0 {
        return Err(FssError::EmptyPath);
    }
    let prg = Prg::new(lambda);
    let roots = [Seed::random(rng, lambda), Seed::random(rng, lambda)];
    let mut s = roots;
    let mut t = [false, true];
    let mut levels = Vec::with_capacity(alpha.depth());

    for keep in alpha.slots() {
        let e = [prg.expand8(s[0]).children, prg.expand8(s[1]).children];
        let mut cw = [SlotCorrection::default(); 8];
        let mut keep_seed = Seed::ZERO;
        for (i, c) in cw.iter_mut().enumerate() {
            if i != keep {
                c.seed = e[0][i].0 ^ e[1][i].0;
                c.control = e[0][i].1 ^ e[1][i].1;
                keep_seed ^= c.seed;
            }
        }
        // The keep seed correction is the XOR of the seven lose corrections,
        // so all eight slot seeds XOR to zero whatever the keep slot is.
        cw[keep] = SlotCorrection {
            seed: keep_seed,
            control: e[0][keep].1 ^ e[1][keep].1 ^ true,
        };
        for b in 0..2 {
            let (ks, kt) = e[b][keep];
            s[b] = ks ^ keep_seed.select(t[b]);
            t[b] = kt ^ (t[b] & cw[keep].control);
        }
        levels.push(cw);
    }
    let final_correction = (beta - prg.convert(s[0]) + prg.convert(s[1])).neg_if(t[1]);

    let key = |party: bool| KeyB {
        party,
        lambda,
        seed: roots[party as usize],
        levels: levels.clone(),
        final_correction,
    };
    Ok((key(false), key(true)))
}

impl KeyB {
    pub fn party(&self) -> bool {
        self.party
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn corrections(&self) -> &[LevelCorrection] {
        &self.levels
    }

    #[inline]
    fn children(&self, prg: &Prg, s: Seed, t: bool, level: usize) -> [(Seed, bool); 8] {
        let mut c = prg.expand8(s).children;
        if t {
            for (child, cw) in c.iter_mut().zip(&self.levels[level]) {
                child.0 ^= cw.seed;
                child.1 ^= cw.control;
            }
        }
        c
    }

    #[inline]
    fn output(&self, prg: &Prg, s: Seed, t: bool) -> GroupValue {
        (prg.convert(s) + self.final_correction.select(t)).neg_if(self.party)
    }

    pub fn eval(&self, x: &OctreePath) -> Result<GroupValue, FssError> {
        if x.depth() != self.depth() {
            return Err(FssError::DepthMismatch {
                expected: self.depth(),
                found: x.depth(),
            });
        }
        let prg = Prg::new(self.lambda);
        let (mut s, mut t) = (self.seed, self.party);
        for (level, slot) in x.slots().enumerate() {
            let (cs, ct) = prg.expand8(s).children[slot];
            let cw = self.levels[level][slot];
            s = cs ^ cw.seed.select(t);
            t = ct ^ (t & cw.control);
        }
        Ok(self.output(&prg, s, t))
    }

    /// Shares for every leaf, indexed as [`OctreePath::to_index`].
    pub fn full_eval(&self) -> Result<Vec<GroupValue>, FssError> {
        let n = self.depth();
        if n > MAX_FULL_EVAL_DEPTH {
            return Err(FssError::DomainTooLarge { levels: n });
        }
        let prg = Prg::new(self.lambda);
        let mut frontier = vec![(self.seed, self.party)];
        for level in 0..n {
            frontier = frontier
                .iter()
                .flat_map(|&(s, t)| self.children(&prg, s, t, level))
                .collect();
        }
        Ok(frontier
            .into_iter()
            .map(|(s, t)| self.output(&prg, s, t))
            .collect())
    }

    /// Share of the sum over all leaves below each region. A region is an
    /// octree path of length at most the key depth; the root covers the grid.
    pub fn eval_regions(&self, regions: &[OctreePath]) -> Result<Vec<GroupValue>, FssError> {
        self.eval_indexed(&CellRegions::new(regions))
    }

    /// As [`KeyB::eval_regions`] with a prebuilt index, for evaluating many
    /// keys against one region set.
    pub fn eval_indexed(&self, regions: &CellRegions) -> Result<Vec<GroupValue>, FssError> {
        if regions.max_depth() > self.depth() {
            return Err(FssError::PrefixTooLong {
                len: regions.max_depth(),
                levels: self.depth(),
            });
        }
        let prg = Prg::new(self.lambda);
        let trie = &regions.0;
        let mut out = vec![GroupValue::ZERO; trie.len];
        self.walk(&prg, trie, trie.root(), self.seed, self.party, 0, &mut out);
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        prg: &Prg,
        trie: &PrefixTrie,
        node: &TrieNode,
        s: Seed,
        t: bool,
        level: usize,
        out: &mut [GroupValue],
    ) {
        if !node.ends.is_empty() {
            let sum = if level == self.depth() {
                self.output(prg, s, t)
            } else {
                self.subtree_sum(prg, s, t, level)
            };
            for &id in &node.ends {
                out[id] = sum;
            }
        }
        if node.children.iter().all(Option::is_none) {
            return;
        }
        let kids = self.children(prg, s, t, level);
        for (slot, child) in node.children.iter().enumerate() {
            if let Some(idx) = child {
                let (cs, ct) = kids[slot];
                self.walk(prg, trie, trie.node(*idx), cs, ct, level + 1, out);
            }
        }
    }

    fn subtree_sum(&self, prg: &Prg, s: Seed, t: bool, level: usize) -> GroupValue {
        let (mut converted, mut flagged) = (GroupValue::ZERO, 0u64);
        self.accumulate(prg, s, t, level, &mut converted, &mut flagged);
        let corr = GroupValue(self.final_correction.0.wrapping_mul(flagged));
        (converted + corr).neg_if(self.party)
    }

    fn accumulate(&self, prg: &Prg, s: Seed, t: bool, level: usize, converted: &mut GroupValue, flagged: &mut u64) {
        if level == self.depth() {
            *converted += prg.convert(s);
            *flagged += t as u64;
            return;
        }
        for (cs, ct) in self.children(prg, s, t, level) {
            self.accumulate(prg, cs, ct, level + 1, converted, flagged);
        }
    }

    /// Body size in bits: `λ + 1 + n(8λ + 8) + 64`.
    pub fn body_bits(lambda: Lambda, n: usize) -> usize {
        let l = lambda.bits() as usize;
        l + 1 + n * (8 * l + 8) + 64
    }

    pub fn serialized_len(lambda: Lambda, n: usize) -> usize {
        HEADER_LEN + packed_len(Self::body_bits(lambda, n))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.depth();
        let mut out = Vec::with_capacity(Self::serialized_len(self.lambda, n));
        Header {
            magic: MAGIC,
            tag: self.party as u8,
            lambda: self.lambda,
            depth: n as u16,
        }
        .write(&mut out);
        let mut w = BitWriter::with_capacity_bits(Self::body_bits(self.lambda, n));
        w.write_seed(self.seed, self.lambda);
        w.write_bit(self.party);
        for level in &self.levels {
            for c in level {
                w.write_seed(c.seed, self.lambda);
            }
            for c in level {
                w.write_bit(c.control);
            }
        }
        w.write_group(self.final_correction);
        out.extend(w.into_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FssError> {
        let h = Header::read(bytes, MAGIC)?;
        if h.tag > 1 {
            return Err(CodecError::BadTag(h.tag).into());
        }
        let n = h.depth as usize;
        let expected = Self::serialized_len(h.lambda, n);
        if bytes.len() != expected {
            return Err(CodecError::LengthMismatch {
                expected,
                found: bytes.len(),
            }
            .into());
        }
        let mut r = BitReader::new(&bytes[HEADER_LEN..]);
        let seed = r.read_seed(h.lambda)?;
        let party = r.read_bit()?;
        if party != (h.tag == 1) {
            return Err(CodecError::Invalid("control bit disagrees with party").into());
        }
        let mut levels = Vec::with_capacity(n);
        for _ in 0..n {
            let mut cw = [SlotCorrection::default(); 8];
            for c in cw.iter_mut() {
                c.seed = r.read_seed(h.lambda)?;
            }
            for c in cw.iter_mut() {
                c.control = r.read_bit()?;
            }
            levels.push(cw);
        }
        let final_correction = r.read_group()?;
        r.finish()?;
        Ok(KeyB {
            party,
            lambda: h.lambda,
            seed,
            levels,
            final_correction,
        })
    }
}

/// A location change: cancel one at the old leaf, add one at the new leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdatePairB {
    pub cancel: (KeyB, KeyB),
    pub insert: (KeyB, KeyB),
}

impl UpdatePairB {
    pub fn party_keys(&self, party: bool) -> [&KeyB; 2] {
        if party {
            [&self.cancel.1, &self.insert.1]
        } else {
            [&self.cancel.0, &self.insert.0]
        }
    }
}

pub fn gen_update_b<R: RngCore + CryptoRng + ?Sized>(
    lambda: Lambda,
    old: &OctreePath,
    new: &OctreePath,
    rng: &mut R,
) -> Result<UpdatePairB, FssError> {
    if old.depth() != new.depth() {
        return Err(FssError::DepthMismatch {
            expected: old.depth(),
            found: new.depth(),
        });
    }
    Ok(UpdatePairB {
        cancel: keygen_b(lambda, old, GroupValue::MINUS_ONE, rng)?,
        insert: keygen_b(lambda, new, GroupValue::ONE, rng)?,
    })
}
