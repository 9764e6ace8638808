//! Standard two-party binary-tree DPF, used as the baseline and as an
//! independent check on the tree-expansion machinery.

use rand::{CryptoRng, RngCore};

use crate::codec::{packed_len, BitReader, BitWriter, CodecError, Header, HEADER_LEN};
use crate::error::FssError;
use crate::group::GroupValue;
use crate::prg::{Lambda, Prg, Seed};

const MAGIC: [u8; 4] = *b"EDPF";
/// Full-domain evaluation is refused above this many input bits.
pub const MAX_FULL_EVAL_BITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryCorrection {
    pub seed: Seed,
    pub t_left: bool,
    pub t_right: bool,
}

impl BinaryCorrection {
    fn control(&self, right: bool) -> bool {
        if right {
            self.t_right
        } else {
            self.t_left
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryDpfKey {
    party: bool,
    lambda: Lambda,
    seed: Seed,
    corrections: Vec<BinaryCorrection>,
    final_correction: GroupValue,
}

/// Keys for the point function that is `beta` at `alpha` and zero elsewhere.
pub fn gen<R: RngCore + CryptoRng + ?Sized>(
    lambda: Lambda,
    alpha: &[bool],
    beta: GroupValue,
    rng: &mut R,
) -> Result<(BinaryDpfKey, BinaryDpfKey), FssError> {
    if alpha.is_empty() {
        return Err(FssError::EmptyPath);
    }
    let prg = Prg::new(lambda);
    let roots = [Seed::random(rng, lambda), Seed::random(rng, lambda)];
    let mut s = roots;
    let mut t = [false, true];
    let mut corrections = Vec::with_capacity(alpha.len());

    for &bit in alpha {
        let e = [prg.expand2(s[0]), prg.expand2(s[1])];
        let (keep, lose) = (bit as usize, !bit as usize);
        let cw = BinaryCorrection {
            seed: e[0].children[lose].0 ^ e[1].children[lose].0,
            t_left: e[0].children[0].1 ^ e[1].children[0].1 ^ bit ^ true,
            t_right: e[0].children[1].1 ^ e[1].children[1].1 ^ bit,
        };
        for b in 0..2 {
            let (ks, kt) = e[b].children[keep];
            s[b] = ks ^ cw.seed.select(t[b]);
            t[b] = kt ^ (t[b] & cw.control(bit));
        }
        corrections.push(cw);
    }
    let final_correction = (beta - prg.convert(s[0]) + prg.convert(s[1])).neg_if(t[1]);

    let key = |party: bool| BinaryDpfKey {
        party,
        lambda,
        seed: roots[party as usize],
        corrections: corrections.clone(),
        final_correction,
    };
    Ok((key(false), key(true)))
}

impl BinaryDpfKey {
    pub fn party(&self) -> bool {
        self.party
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn domain_bits(&self) -> usize {
        self.corrections.len()
    }

    #[inline]
    fn step(&self, prg: &Prg, s: Seed, t: bool, level: usize, right: bool) -> (Seed, bool) {
        let (cs, ct) = prg.expand2(s).children[right as usize];
        let cw = &self.corrections[level];
        (cs ^ cw.seed.select(t), ct ^ (t & cw.control(right)))
    }

    #[inline]
    fn output(&self, prg: &Prg, s: Seed, t: bool) -> GroupValue {
        (prg.convert(s) + self.final_correction.select(t)).neg_if(self.party)
    }

    pub fn eval(&self, x: &[bool]) -> Result<GroupValue, FssError> {
        if x.len() != self.domain_bits() {
            return Err(FssError::LengthMismatch {
                expected: self.domain_bits(),
                found: x.len(),
            });
        }
        let prg = Prg::new(self.lambda);
        let (s, t) = x
            .iter()
            .enumerate()
            .fold((self.seed, self.party), |(s, t), (level, &bit)| {
                self.step(&prg, s, t, level, bit)
            });
        Ok(self.output(&prg, s, t))
    }

    /// Shares for every input, indexed with the first bit most significant.
    pub fn full_eval(&self) -> Result<Vec<GroupValue>, FssError> {
        let n = self.domain_bits();
        if n > MAX_FULL_EVAL_BITS {
            return Err(FssError::DomainTooLarge { levels: n });
        }
        let prg = Prg::new(self.lambda);
        let mut frontier = vec![(self.seed, self.party)];
        for level in 0..n {
            frontier = frontier
                .iter()
                .flat_map(|&(s, t)| {
                    let e = prg.expand2(s);
                    let cw = &self.corrections[level];
                    e.children.map(|(cs, ct)| (cs, ct)).into_iter().enumerate().map(
                        move |(dir, (cs, ct))| {
                            (cs ^ cw.seed.select(t), ct ^ (t & cw.control(dir == 1)))
                        },
                    )
                })
                .collect();
        }
        Ok(frontier
            .into_iter()
            .map(|(s, t)| self.output(&prg, s, t))
            .collect())
    }

    /// Body size in bits: `λ + 1 + n(λ + 2) + 64`.
    pub fn body_bits(lambda: Lambda, n: usize) -> usize {
        let l = lambda.bits() as usize;
        l + 1 + n * (l + 2) + 64
    }

    pub fn serialized_len(lambda: Lambda, n: usize) -> usize {
        HEADER_LEN + packed_len(Self::body_bits(lambda, n))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.domain_bits();
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
        for cw in &self.corrections {
            w.write_seed(cw.seed, self.lambda);
            w.write_bit(cw.t_left);
            w.write_bit(cw.t_right);
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
        let corrections = (0..n)
            .map(|_| {
                Ok(BinaryCorrection {
                    seed: r.read_seed(h.lambda)?,
                    t_left: r.read_bit()?,
                    t_right: r.read_bit()?,
                })
            })
            .collect::<Result<Vec<_>, CodecError>>()?;
        let final_correction = r.read_group()?;
        r.finish()?;
        Ok(BinaryDpfKey {
            party,
            lambda: h.lambda,
            seed,
            corrections,
            final_correction,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn bits_of(v: usize, n: usize) -> Vec<bool> {
        (0..n).map(|i| (v >> (n - 1 - i)) & 1 == 1).collect()
    }

    #[test]
    fn one_bit_domain() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let (k0, k1) = gen(Lambda::L128, &[false], GroupValue(5), &mut rng).unwrap();
        let at = |x: bool| k0.eval(&[x]).unwrap() + k1.eval(&[x]).unwrap();
        assert_eq!(at(false), GroupValue(5));
        assert_eq!(at(true), GroupValue::ZERO);
        assert_eq!(k0.full_eval().unwrap().len(), 2);
    }

    #[test]
    fn exhaustive_eight_bits() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..4 {
            let alpha = rng.gen_range(0..256);
            let beta = GroupValue(rng.gen());
            let (k0, k1) = gen(Lambda::L128, &bits_of(alpha, 8), beta, &mut rng).unwrap();
            for x in 0..256 {
                let y = k0.eval(&bits_of(x, 8)).unwrap() + k1.eval(&bits_of(x, 8)).unwrap();
                assert_eq!(y, if x == alpha { beta } else { GroupValue::ZERO });
            }
        }
    }

    #[test]
    fn zero_payload_is_zero_everywhere() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let (k0, k1) = gen(Lambda::L64, &bits_of(9, 5), GroupValue::ZERO, &mut rng).unwrap();
        let (a, b) = (k0.full_eval().unwrap(), k1.full_eval().unwrap());
        assert!(a.iter().zip(&b).all(|(x, y)| (*x + *y).is_zero()));
    }

    #[test]
    fn full_eval_matches_pointwise() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let (k0, k1) = gen(Lambda::L128, &bits_of(37, 6), GroupValue(3), &mut rng).unwrap();
        for k in [&k0, &k1] {
            let full = k.full_eval().unwrap();
            for (x, v) in full.iter().enumerate() {
                assert_eq!(*v, k.eval(&bits_of(x, 6)).unwrap());
            }
        }
        let total: GroupValue = k0.full_eval().unwrap().iter().chain(&k1.full_eval().unwrap()).sum();
        assert_eq!(total, GroupValue(3));
    }

    #[test]
    fn errors() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        assert_eq!(
            gen(Lambda::L128, &[], GroupValue::ONE, &mut rng),
            Err(FssError::EmptyPath)
        );
        let (k0, _) = gen(Lambda::L128, &[true; 25], GroupValue::ONE, &mut rng).unwrap();
        assert_eq!(k0.full_eval(), Err(FssError::DomainTooLarge { levels: 25 }));
        assert!(matches!(k0.eval(&[true]), Err(FssError::LengthMismatch { .. })));
    }

    #[test]
    fn serialized_size_and_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        for (lambda, n) in [(Lambda::L128, 1), (Lambda::L128, 20), (Lambda::L64, 7)] {
            let (k0, k1) = gen(lambda, &vec![true; n], GroupValue::ONE, &mut rng).unwrap();
            for k in [k0, k1] {
                let bytes = k.to_bytes();
                assert_eq!(
                    bytes.len(),
                    HEADER_LEN + BinaryDpfKey::body_bits(lambda, n).div_ceil(8)
                );
                assert_eq!(BinaryDpfKey::from_bytes(&bytes).unwrap(), k);
                assert!(BinaryDpfKey::from_bytes(&bytes[..bytes.len() - 1]).is_err());
            }
        }
    }
}
