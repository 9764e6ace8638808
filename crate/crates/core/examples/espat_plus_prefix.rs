//! eSpat+ keys: one short seed per server plus public per-level words; every
//! prefix of the target evaluates to its level payload.

use espat::espat_plus::{keygen_plus, PayloadSchedule};
use espat::group::GroupValue;
use espat::prg::Lambda;
use espat::spatial::KdPrefix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let target: KdPrefix = "101101".parse().unwrap();
    let schedule = PayloadSchedule((1..=6).map(GroupValue).collect());
    let keys = keygen_plus(Lambda::L128, &target, &schedule, &mut rng).unwrap();
    println!(
        "key {} bytes each, public params {} bytes",
        keys.keys.0.to_bytes().len(),
        keys.pp.to_bytes().len()
    );
    for q in ["1", "10", "11", "1011", "1010", "101101", "101100"] {
        let q: KdPrefix = q.parse().unwrap();
        let y = keys.keys.0.eval_prefix(&keys.pp, &q).unwrap() + keys.keys.1.eval_prefix(&keys.pp, &q).unwrap();
        println!("prefix {q:<7} -> {}", y.as_signed());
    }
}
