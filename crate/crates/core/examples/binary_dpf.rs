//! Binary-tree DPF: two keys whose outputs sum to β at one point.

use espat::dpf;
use espat::group::GroupValue;
use espat::prg::Lambda;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let alpha = [true, false, true, true, false, false, true, false];
    let (k0, k1) = dpf::gen(Lambda::L128, &alpha, GroupValue(42), &mut rng).unwrap();
    println!("key size {} bytes", k0.to_bytes().len());

    let (f0, f1) = (k0.full_eval().unwrap(), k1.full_eval().unwrap());
    let hits: Vec<(usize, i64)> = f0
        .iter()
        .zip(&f1)
        .enumerate()
        .filter(|(_, (a, b))| !(**a + **b).is_zero())
        .map(|(i, (a, b))| (i, (*a + *b).as_signed()))
        .collect();
    println!("nonzero outputs over 256 points: {hits:?}");
    println!("party 0 share at alpha alone: {}", f0[0b1011_0010]);
}
