//! Incremental DPF over binary KD-tree prefixes. Each party holds only a
//! λ-bit seed; the per-level correction words are public and shared.
//! Evaluating a length-l prefix yields shares of β_l when the prefix lies on
//! the target path and of zero otherwise.

use rand::{CryptoRng, RngCore};

use crate::codec::{packed_len, BitReader, BitWriter, CodecError, Header, HEADER_LEN};
use crate::error::FssError;
use crate::group::GroupValue;
use crate::prg::{Lambda, Prg, Seed};
use crate::spatial::KdPrefix;
use crate::trie::{PrefixTrie, TrieNode};

const MAGIC: [u8; 4] = *b"ESPP";
const TAG_PP: u8 = 2;
const TAG_MOVE: u8 = 3;

/// KD prefixes indexed once for evaluation under many keys.
#[derive(Debug, Clone)]
pub struct PrefixRegions(PrefixTrie);

impl PrefixRegions {
    pub fn new(regions: &[KdPrefix]) -> Self {
        PrefixRegions(PrefixTrie::build(
            regions
                .iter()
                .map(|r| r.bits().iter().map(|&b| b as usize).collect::<Vec<_>>()),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len
    }

    pub fn is_empty(&self) -> bool {
        self.0.len == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyPlus {
    party: bool,
    lambda: Lambda,
    seed: Seed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CorrectionWord {
    pub seed: Seed,
    pub t_left: bool,
    pub t_right: bool,
    pub value: GroupValue,
}

impl CorrectionWord {
    fn control(&self, right: bool) -> bool {
        if right {
            self.t_right
        } else {
            self.t_left
        }
    }

    fn bits(lambda: Lambda) -> usize {
        lambda.bits() as usize + 2 + 64
    }

    fn write(&self, w: &mut BitWriter, lambda: Lambda) {
        w.write_seed(self.seed, lambda);
        w.write_bit(self.t_left);
        w.write_bit(self.t_right);
        w.write_group(self.value);
    }

    fn read(r: &mut BitReader, lambda: Lambda) -> Result<Self, CodecError> {
        Ok(CorrectionWord {
            seed: r.read_seed(lambda)?,
            t_left: r.read_bit()?,
            t_right: r.read_bit()?,
            value: r.read_group()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicParams {
    lambda: Lambda,
    levels: Vec<CorrectionWord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalState {
    pub seed: Seed,
    pub control: bool,
    pub level: usize,
}

/// Per-level payloads β_1..β_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayloadSchedule(pub Vec<GroupValue>);

impl PayloadSchedule {
    pub fn constant(n: usize, v: GroupValue) -> Self {
        PayloadSchedule(vec![v; n])
    }

    /// Counting schedule: one at every level.
    pub fn ones(n: usize) -> Self {
        Self::constant(n, GroupValue::ONE)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Both parties' internal states after the last generated level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartyStates {
    pub seeds: [Seed; 2],
    pub controls: [bool; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlusKeys {
    pub keys: (KeyPlus, KeyPlus),
    pub pp: PublicParams,
    pub final_states: PartyStates,
}

fn gen_levels(
    prg: &Prg,
    mut st: PartyStates,
    target: &[bool],
    betas: &[GroupValue],
) -> (Vec<CorrectionWord>, PartyStates) {
    let mut levels = Vec::with_capacity(target.len());
    for (&bit, &beta) in target.iter().zip(betas) {
        let e = [prg.expand2(st.seeds[0]).children, prg.expand2(st.seeds[1]).children];
        let (keep, lose) = (bit as usize, !bit as usize);
        let seed = e[0][lose].0 ^ e[1][lose].0;
        let t_left = e[0][0].1 ^ e[1][0].1 ^ bit ^ true;
        let t_right = e[0][1].1 ^ e[1][1].1 ^ bit;
        let t_keep = if bit { t_right } else { t_left };
        let mut w = [GroupValue::ZERO; 2];
        for b in 0..2 {
            let (ks, kt) = e[b][keep];
            let s_tilde = ks ^ seed.select(st.controls[b]);
            st.controls[b] = kt ^ (st.controls[b] & t_keep);
            (st.seeds[b], w[b]) = prg.convert_pair(s_tilde);
        }
        let value = (beta - w[0] + w[1]).neg_if(st.controls[1]);
        levels.push(CorrectionWord {
            seed,
            t_left,
            t_right,
            value,
        });
    }
    (levels, st)
}

pub fn keygen_plus<R: RngCore + CryptoRng + ?Sized>(
    lambda: Lambda,
    target: &KdPrefix,
    betas: &PayloadSchedule,
    rng: &mut R,
) -> Result<PlusKeys, FssError> {
    if target.is_empty() {
        return Err(FssError::EmptyPath);
    }
    if betas.len() != target.len() {
        return Err(FssError::PayloadLength {
            expected: target.len(),
            found: betas.len(),
        });
    }
    let prg = Prg::new(lambda);
    let roots = [Seed::random(rng, lambda), Seed::random(rng, lambda)];
    let start = PartyStates {
        seeds: roots,
        controls: [false, true],
    };
    let (levels, final_states) = gen_levels(&prg, start, target.bits(), &betas.0);
    Ok(PlusKeys {
        keys: (
            KeyPlus::new(false, lambda, roots[0]),
            KeyPlus::new(true, lambda, roots[1]),
        ),
        pp: PublicParams { lambda, levels },
        final_states,
    })
}

/// One level of evaluation: advance `st` along the branch `right` and return
/// the share for the child prefix.
pub fn eval_next(
    prg: &Prg,
    party: bool,
    st: &EvalState,
    cw: &CorrectionWord,
    right: bool,
) -> (EvalState, GroupValue) {
    let (cs, ct) = prg.expand2(st.seed).children[right as usize];
    let s_tilde = cs ^ cw.seed.select(st.control);
    let control = ct ^ (st.control & cw.control(right));
    let (seed, w) = prg.convert_pair(s_tilde);
    let y = (w + cw.value.select(control)).neg_if(party);
    (
        EvalState {
            seed,
            control,
            level: st.level + 1,
        },
        y,
    )
}

impl KeyPlus {
    pub fn new(party: bool, lambda: Lambda, seed: Seed) -> Self {
        KeyPlus {
            party,
            lambda,
            seed: Seed::new(seed.value(), lambda),
        }
    }

    pub fn party(&self) -> bool {
        self.party
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn initial_state(&self) -> EvalState {
        EvalState {
            seed: self.seed,
            control: self.party,
            level: 0,
        }
    }

    fn check_lambda(&self, lambda: Lambda) -> Result<(), FssError> {
        if self.lambda == lambda {
            Ok(())
        } else {
            Err(FssError::LambdaMismatch)
        }
    }

    pub fn eval_prefix(&self, pp: &PublicParams, query: &KdPrefix) -> Result<GroupValue, FssError> {
        self.check_lambda(pp.lambda)?;
        check_query(query, pp.depth())?;
        let prg = Prg::new(self.lambda);
        let mut st = self.initial_state();
        let mut y = GroupValue::ZERO;
        for (cw, &bit) in pp.levels.iter().zip(query.bits()) {
            (st, y) = eval_next(&prg, self.party, &st, cw, bit);
        }
        Ok(y)
    }

    /// Shares for many prefixes, sharing the walk over common prefixes.
    pub fn eval_regions(
        &self,
        pp: &PublicParams,
        regions: &[KdPrefix],
    ) -> Result<Vec<GroupValue>, FssError> {
        self.eval_indexed(pp, &PrefixRegions::new(regions))
    }

    pub fn eval_indexed(&self, pp: &PublicParams, regions: &PrefixRegions) -> Result<Vec<GroupValue>, FssError> {
        self.check_lambda(pp.lambda)?;
        let walker = PlainWalker {
            prg: Prg::new(self.lambda),
            party: self.party,
            levels: &pp.levels,
        };
        walk_regions(&walker, self.initial_state(), regions, pp.depth())
    }

    pub fn serialized_len(lambda: Lambda) -> usize {
        HEADER_LEN + lambda.bytes()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::serialized_len(self.lambda));
        Header {
            magic: MAGIC,
            tag: self.party as u8,
            lambda: self.lambda,
            depth: 0,
        }
        .write(&mut out);
        let mut w = BitWriter::with_capacity_bits(self.lambda.bits() as usize);
        w.write_seed(self.seed, self.lambda);
        out.extend(w.into_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FssError> {
        let h = Header::read(bytes, MAGIC)?;
        if h.tag > 1 {
            return Err(CodecError::BadTag(h.tag).into());
        }
        if h.depth != 0 {
            return Err(CodecError::Invalid("key share carries no levels").into());
        }
        let expected = Self::serialized_len(h.lambda);
        if bytes.len() != expected {
            return Err(CodecError::LengthMismatch {
                expected,
                found: bytes.len(),
            }
            .into());
        }
        let mut r = BitReader::new(&bytes[HEADER_LEN..]);
        let seed = r.read_seed(h.lambda)?;
        r.finish()?;
        Ok(KeyPlus::new(h.tag == 1, h.lambda, seed))
    }
}

fn check_query(query: &KdPrefix, levels: usize) -> Result<(), FssError> {
    if query.is_empty() {
        return Err(FssError::EmptyPrefix);
    }
    if query.len() > levels {
        return Err(FssError::PrefixTooLong {
            len: query.len(),
            levels,
        });
    }
    Ok(())
}

impl PublicParams {
    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[CorrectionWord] {
        &self.levels
    }

    /// Body size in bits: `n(λ + 2 + 64)`.
    pub fn body_bits(lambda: Lambda, n: usize) -> usize {
        n * CorrectionWord::bits(lambda)
    }

    pub fn serialized_len(lambda: Lambda, n: usize) -> usize {
        HEADER_LEN + packed_len(Self::body_bits(lambda, n))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.depth();
        let mut out = Vec::with_capacity(Self::serialized_len(self.lambda, n));
        Header {
            magic: MAGIC,
            tag: TAG_PP,
            lambda: self.lambda,
            depth: n as u16,
        }
        .write(&mut out);
        let mut w = BitWriter::with_capacity_bits(Self::body_bits(self.lambda, n));
        for cw in &self.levels {
            cw.write(&mut w, self.lambda);
        }
        out.extend(w.into_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FssError> {
        let h = Header::read(bytes, MAGIC)?;
        if h.tag != TAG_PP {
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
        let levels = (0..n)
            .map(|_| CorrectionWord::read(&mut r, h.lambda))
            .collect::<Result<Vec<_>, _>>()?;
        r.finish()?;
        Ok(PublicParams {
            lambda: h.lambda,
            levels,
        })
    }
}

/// Public part of a move: correction words for the shared prefix and for
/// the old and new tails, both of which continue from the shared state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovePublic {
    lambda: Lambda,
    common: Vec<CorrectionWord>,
    old: Vec<CorrectionWord>,
    new: Vec<CorrectionWord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveBundle {
    pub keys: (KeyPlus, KeyPlus),
    pub public: MovePublic,
}

impl MoveBundle {
    pub fn key(&self, party: bool) -> KeyPlus {
        if party {
            self.keys.1
        } else {
            self.keys.0
        }
    }
}

/// Move a unit count from `common‖old_tail` to `common‖new_tail`. Shared
/// prefix levels carry payload 0, the old tail −1 and the new tail +1.
pub fn move_gen<R: RngCore + CryptoRng + ?Sized>(
    lambda: Lambda,
    common: &KdPrefix,
    old_tail: &KdPrefix,
    new_tail: &KdPrefix,
    rng: &mut R,
) -> Result<MoveBundle, FssError> {
    if old_tail.len() != new_tail.len() {
        return Err(FssError::MismatchedTails {
            old: old_tail.len(),
            new: new_tail.len(),
        });
    }
    if old_tail.is_empty() {
        return Err(FssError::BadSplit {
            common: common.len(),
            depth: common.len(),
        });
    }
    let prg = Prg::new(lambda);
    let roots = [Seed::random(rng, lambda), Seed::random(rng, lambda)];
    let start = PartyStates {
        seeds: roots,
        controls: [false, true],
    };
    let m = common.len();
    let tail = old_tail.len();
    let (common_cw, fork) = gen_levels(&prg, start, common.bits(), &vec![GroupValue::ZERO; m]);
    let (old, _) = gen_levels(&prg, fork, old_tail.bits(), &vec![GroupValue::MINUS_ONE; tail]);
    let (new, _) = gen_levels(&prg, fork, new_tail.bits(), &vec![GroupValue::ONE; tail]);
    Ok(MoveBundle {
        keys: (
            KeyPlus::new(false, lambda, roots[0]),
            KeyPlus::new(true, lambda, roots[1]),
        ),
        public: MovePublic {
            lambda,
            common: common_cw,
            old,
            new,
        },
    })
}

/// Evaluate a move along explicit decision sequences: `common` for the
/// shared levels, then `old` against the old-tail words and `new` against
/// the new-tail words. Returns the combined share at the final level.
pub fn move_eval(
    key: &KeyPlus,
    public: &MovePublic,
    common: &[bool],
    old: &[bool],
    new: &[bool],
) -> Result<GroupValue, FssError> {
    key.check_lambda(public.lambda)?;
    if common.len() != public.common_len() {
        return Err(FssError::DepthMismatch {
            expected: public.common_len(),
            found: common.len(),
        });
    }
    for tail in [old, new] {
        if tail.len() != public.tail_len() {
            return Err(FssError::DepthMismatch {
                expected: public.tail_len(),
                found: tail.len(),
            });
        }
    }
    let prg = Prg::new(key.lambda);
    let mut st = key.initial_state();
    for (cw, &bit) in public.common.iter().zip(common) {
        st = eval_next(&prg, key.party, &st, cw, bit).0;
    }
    let tail_share = |words: &[CorrectionWord], path: &[bool]| {
        let mut s = st;
        let mut y = GroupValue::ZERO;
        for (cw, &bit) in words.iter().zip(path) {
            (s, y) = eval_next(&prg, key.party, &s, cw, bit);
        }
        y
    };
    Ok(tail_share(&public.old, old) + tail_share(&public.new, new))
}

impl MovePublic {
    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn common_len(&self) -> usize {
        self.common.len()
    }

    pub fn tail_len(&self) -> usize {
        self.old.len()
    }

    pub fn depth(&self) -> usize {
        self.common.len() + self.old.len()
    }

    /// Share of the move's effect on the count of one prefix.
    pub fn eval_prefix(&self, key: &KeyPlus, query: &KdPrefix) -> Result<GroupValue, FssError> {
        let out = self.eval_regions(key, std::slice::from_ref(query))?;
        Ok(out[0])
    }

    pub fn eval_regions(
        &self,
        key: &KeyPlus,
        regions: &[KdPrefix],
    ) -> Result<Vec<GroupValue>, FssError> {
        self.eval_indexed(key, &PrefixRegions::new(regions))
    }

    pub fn eval_indexed(&self, key: &KeyPlus, regions: &PrefixRegions) -> Result<Vec<GroupValue>, FssError> {
        key.check_lambda(self.lambda)?;
        let walker = MoveWalker {
            prg: Prg::new(key.lambda),
            party: key.party,
            public: self,
        };
        walk_regions(
            &walker,
            MoveState::Common(key.initial_state()),
            regions,
            self.depth(),
        )
    }

    /// Body size in bits: a 16-bit shared-prefix length, then
    /// `m + 2(n − m)` correction words.
    pub fn body_bits(lambda: Lambda, m: usize, n: usize) -> usize {
        16 + (m + 2 * (n - m)) * CorrectionWord::bits(lambda)
    }

    pub fn serialized_len(lambda: Lambda, m: usize, n: usize) -> usize {
        HEADER_LEN + packed_len(Self::body_bits(lambda, m, n))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let (m, n) = (self.common_len(), self.depth());
        let mut out = Vec::with_capacity(Self::serialized_len(self.lambda, m, n));
        Header {
            magic: MAGIC,
            tag: TAG_MOVE,
            lambda: self.lambda,
            depth: n as u16,
        }
        .write(&mut out);
        let mut w = BitWriter::with_capacity_bits(Self::body_bits(self.lambda, m, n));
        w.write_bits(m as u128, 16);
        for cw in self.common.iter().chain(&self.old).chain(&self.new) {
            cw.write(&mut w, self.lambda);
        }
        out.extend(w.into_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FssError> {
        let h = Header::read(bytes, MAGIC)?;
        if h.tag != TAG_MOVE {
            return Err(CodecError::BadTag(h.tag).into());
        }
        let n = h.depth as usize;
        let mut r = BitReader::new(bytes.get(HEADER_LEN..).unwrap_or_default());
        let m = r.read_bits(16)? as usize;
        if m >= n {
            return Err(FssError::BadSplit { common: m, depth: n });
        }
        let expected = Self::serialized_len(h.lambda, m, n);
        if bytes.len() != expected {
            return Err(CodecError::LengthMismatch {
                expected,
                found: bytes.len(),
            }
            .into());
        }
        let mut read = |count: usize| {
            (0..count)
                .map(|_| CorrectionWord::read(&mut r, h.lambda))
                .collect::<Result<Vec<_>, _>>()
        };
        let common = read(m)?;
        let old = read(n - m)?;
        let new = read(n - m)?;
        r.finish()?;
        Ok(MovePublic {
            lambda: h.lambda,
            common,
            old,
            new,
        })
    }
}

trait Walker {
    type State;
    fn step(&self, st: &Self::State, right: bool) -> (Self::State, GroupValue);
}

struct PlainWalker<'a> {
    prg: Prg,
    party: bool,
    levels: &'a [CorrectionWord],
}

impl Walker for PlainWalker<'_> {
    type State = EvalState;

    fn step(&self, st: &EvalState, right: bool) -> (EvalState, GroupValue) {
        eval_next(&self.prg, self.party, st, &self.levels[st.level], right)
    }
}

enum MoveState {
    Common(EvalState),
    Forked(EvalState, EvalState),
}

struct MoveWalker<'a> {
    prg: Prg,
    party: bool,
    public: &'a MovePublic,
}

impl Walker for MoveWalker<'_> {
    type State = MoveState;

    fn step(&self, st: &MoveState, right: bool) -> (MoveState, GroupValue) {
        let m = self.public.common_len();
        let (old, new) = match *st {
            MoveState::Common(s) if s.level < m => {
                let (next, y) = eval_next(&self.prg, self.party, &s, &self.public.common[s.level], right);
                return (MoveState::Common(next), y);
            }
            MoveState::Common(s) => (s, s),
            MoveState::Forked(a, b) => (a, b),
        };
        let j = old.level - m;
        let (a, ya) = eval_next(&self.prg, self.party, &old, &self.public.old[j], right);
        let (b, yb) = eval_next(&self.prg, self.party, &new, &self.public.new[j], right);
        (MoveState::Forked(a, b), ya + yb)
    }
}

fn walk_regions<W: Walker>(
    walker: &W,
    start: W::State,
    regions: &PrefixRegions,
    levels: usize,
) -> Result<Vec<GroupValue>, FssError> {
    let trie = &regions.0;
    if !trie.root().ends.is_empty() {
        return Err(FssError::EmptyPrefix);
    }
    if trie.max_depth > levels {
        return Err(FssError::PrefixTooLong {
            len: trie.max_depth,
            levels,
        });
    }
    let mut out = vec![GroupValue::ZERO; trie.len];
    walk_node(walker, trie, trie.root(), &start, &mut out);
    Ok(out)
}

fn walk_node<W: Walker>(
    walker: &W,
    trie: &PrefixTrie,
    node: &TrieNode,
    st: &W::State,
    out: &mut [GroupValue],
) {
    for (dir, child) in node.children[..2].iter().enumerate() {
        if let Some(idx) = child {
            let (next, y) = walker.step(st, dir == 1);
            let child = trie.node(*idx);
            for &id in &child.ends {
                out[id] = y;
            }
            walk_node(walker, trie, child, &next, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn prefix(s: &str) -> KdPrefix {
        s.parse().unwrap()
    }

    fn combined(keys: &PlusKeys, q: &KdPrefix) -> i64 {
        (keys.keys.0.eval_prefix(&keys.pp, q).unwrap() + keys.keys.1.eval_prefix(&keys.pp, q).unwrap())
            .as_signed()
    }

    #[test]
    fn depth_one() {
        let mut rng = ChaCha20Rng::seed_from_u64(30);
        let keys = keygen_plus(Lambda::L128, &prefix("0"), &PayloadSchedule::constant(1, GroupValue(7)), &mut rng)
            .unwrap();
        assert_eq!(combined(&keys, &prefix("0")), 7);
        assert_eq!(combined(&keys, &prefix("1")), 0);
    }

    #[test]
    fn exhaustive_prefixes_depth_six() {
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        for _ in 0..3 {
            let n = 6;
            let target = KdPrefix::from_index(rng.gen_range(0..64), n);
            let betas = PayloadSchedule((0..n).map(|_| GroupValue(rng.gen())).collect());
            let keys = keygen_plus(Lambda::L128, &target, &betas, &mut rng).unwrap();
            for l in 1..=n {
                for idx in 0..(1 << l) {
                    let q = KdPrefix::from_index(idx, l);
                    let want = if q.is_prefix_of(&target) { betas.0[l - 1] } else { GroupValue::ZERO };
                    let got = keys.keys.0.eval_prefix(&keys.pp, &q).unwrap()
                        + keys.keys.1.eval_prefix(&keys.pp, &q).unwrap();
                    assert_eq!(got, want, "{q} vs {target}");
                }
            }
        }
    }

    #[test]
    fn regions_match_pointwise() {
        let mut rng = ChaCha20Rng::seed_from_u64(32);
        let keys = keygen_plus(Lambda::L64, &prefix("10110"), &PayloadSchedule::ones(5), &mut rng).unwrap();
        let regions: Vec<_> = ["1", "0", "10", "101", "1011", "10110", "10111", "111"]
            .iter()
            .map(|s| prefix(s))
            .collect();
        let shares = keys.keys.1.eval_regions(&keys.pp, &regions).unwrap();
        for (r, s) in regions.iter().zip(&shares) {
            assert_eq!(*s, keys.keys.1.eval_prefix(&keys.pp, r).unwrap());
        }
        assert_eq!(
            keys.keys.0.eval_regions(&keys.pp, &[KdPrefix::empty()]),
            Err(FssError::EmptyPrefix)
        );
        assert!(matches!(
            keys.keys.0.eval_prefix(&keys.pp, &prefix("101101")),
            Err(FssError::PrefixTooLong { .. })
        ));
    }

    #[test]
    fn level_locality() {
        let target = prefix("0110");
        let mut betas = PayloadSchedule::ones(4);
        let a = keygen_plus(Lambda::L128, &target, &betas, &mut ChaCha20Rng::seed_from_u64(33)).unwrap();
        betas.0[2] = GroupValue(40);
        let b = keygen_plus(Lambda::L128, &target, &betas, &mut ChaCha20Rng::seed_from_u64(33)).unwrap();
        for (j, (x, y)) in a.pp.levels().iter().zip(b.pp.levels()).enumerate() {
            assert_eq!((x.seed, x.t_left, x.t_right), (y.seed, y.t_left, y.t_right));
            assert_eq!(x.value == y.value, j != 2);
        }
        assert_eq!(combined(&b, &prefix("011")), 40);
        assert_eq!(combined(&b, &prefix("0110")), 1);
    }

    #[test]
    fn move_shifts_counts() {
        let mut rng = ChaCha20Rng::seed_from_u64(34);
        let old_path = prefix("0110");
        let new_path = prefix("0101");
        let insert = keygen_plus(Lambda::L128, &old_path, &PayloadSchedule::ones(4), &mut rng).unwrap();
        let mv = move_gen(Lambda::L128, &prefix("01"), &prefix("10"), &prefix("01"), &mut rng).unwrap();
        for l in 1..=4 {
            for idx in 0..(1 << l) {
                let q = KdPrefix::from_index(idx, l);
                let base = combined(&insert, &q);
                let delta = (mv.public.eval_prefix(&mv.keys.0, &q).unwrap()
                    + mv.public.eval_prefix(&mv.keys.1, &q).unwrap())
                .as_signed();
                assert_eq!(base + delta, q.is_prefix_of(&new_path) as i64, "{q}");
            }
        }
        let full = |p: bool, c: &[bool], o: &[bool], n: &[bool]| {
            move_eval(&mv.key(p), &mv.public, c, o, n).unwrap()
        };
        let [c, o, n] = [prefix("01"), prefix("10"), prefix("01")].map(|p| p.bits().to_vec());
        let at = |x: &[bool]| (full(false, &c, x, x) + full(true, &c, x, x)).as_signed();
        assert_eq!(at(&n), 1);
        assert_eq!(at(&o), -1);
        assert_eq!(at(&[true, true]), 0);
        assert!(matches!(
            move_eval(&mv.keys.0, &mv.public, &c, &o, &[true]),
            Err(FssError::DepthMismatch { .. })
        ));
    }

    #[test]
    fn move_without_common_prefix() {
        let mut rng = ChaCha20Rng::seed_from_u64(35);
        let mv = move_gen(Lambda::L64, &KdPrefix::empty(), &prefix("00"), &prefix("11"), &mut rng).unwrap();
        let sum = |q: &str| {
            let q = prefix(q);
            (mv.public.eval_prefix(&mv.keys.0, &q).unwrap() + mv.public.eval_prefix(&mv.keys.1, &q).unwrap())
                .as_signed()
        };
        assert_eq!((sum("0"), sum("1"), sum("00"), sum("11"), sum("01")), (-1, 1, -1, 1, 0));
    }

    #[test]
    fn move_errors() {
        let mut rng = ChaCha20Rng::seed_from_u64(36);
        assert!(matches!(
            move_gen(Lambda::L128, &prefix("01"), &prefix("1"), &prefix("01"), &mut rng),
            Err(FssError::MismatchedTails { .. })
        ));
        assert!(matches!(
            move_gen(Lambda::L128, &prefix("01"), &KdPrefix::empty(), &KdPrefix::empty(), &mut rng),
            Err(FssError::BadSplit { .. })
        ));
    }

    #[test]
    fn serialization() {
        let mut rng = ChaCha20Rng::seed_from_u64(37);
        let keys = keygen_plus(Lambda::L128, &KdPrefix::new((0..128).map(|i| i % 3 == 0).collect()), &PayloadSchedule::ones(128), &mut rng)
            .unwrap();
        let kb = keys.keys.1.to_bytes();
        assert_eq!(kb.len(), HEADER_LEN + 16);
        assert_eq!(KeyPlus::from_bytes(&kb).unwrap(), keys.keys.1);
        let pb = keys.pp.to_bytes();
        assert_eq!(pb.len(), HEADER_LEN + 128 * 194 / 8);
        assert_eq!(PublicParams::from_bytes(&pb).unwrap(), keys.pp);
        assert!(PublicParams::from_bytes(&kb).is_err());

        let mv = move_gen(Lambda::L64, &prefix("0101"), &prefix("11"), &prefix("00"), &mut rng).unwrap();
        let mb = mv.public.to_bytes();
        assert_eq!(mb.len(), MovePublic::serialized_len(Lambda::L64, 4, 6));
        assert_eq!(MovePublic::from_bytes(&mb).unwrap(), mv.public);
    }
}
