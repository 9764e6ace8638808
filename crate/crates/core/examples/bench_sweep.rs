//! Small timing sweep over string lengths, printed as a table.

use espat::bench::{bench_bits, to_table, BenchConfig, BenchScheme};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let mut cfg = BenchConfig::new(vec![BenchScheme::Dpf, BenchScheme::B, BenchScheme::Plus]);
    cfg.bits = vec![16, 64, 128];
    cfg.reps = 5;
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    print!("{}", to_table(&bench_bits(&cfg, &mut rng)));
}
