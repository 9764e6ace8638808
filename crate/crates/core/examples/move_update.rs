//! Move one count between two leaves that share a prefix: the bundle carries
//! the shared levels once and two short tails.

use espat::bench::{b_update_bytes, plus_move_bytes};
use espat::espat_plus::move_gen;
use espat::prg::Lambda;
use espat::sim::PpDelivery;
use espat::spatial::KdPrefix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let old: KdPrefix = "110010".parse().unwrap();
    let new: KdPrefix = "110101".parse().unwrap();
    let m = old.common_len(&new);
    let tail = |p: &KdPrefix| KdPrefix::new(p.bits()[m..].to_vec());
    let bundle = move_gen(Lambda::L128, &old.prefix(m), &tail(&old), &tail(&new), &mut rng).unwrap();

    for q in ["1", "11", "110", "1100", "1101", "110010", "110101", "111"] {
        let q: KdPrefix = q.parse().unwrap();
        let y = bundle.public.eval_prefix(&bundle.key(false), &q).unwrap()
            + bundle.public.eval_prefix(&bundle.key(true), &q).unwrap();
        println!("prefix {q:<7} change {:+}", y.as_signed());
    }

    println!("\nupload bytes at 128-level strings, per-server delivery:");
    let lam = Lambda::L128;
    for m in [0, 32, 64, 96, 127] {
        println!(
            "  shared {m:>3}: eSpat+ move {:>6}  eSpat-B cancel+insert {:>6}",
            plus_move_bytes(lam, m, 128, PpDelivery::PerServer),
            b_update_bytes(lam, 43)
        );
    }
}
