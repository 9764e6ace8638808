//! Serialized key and upload sizes for both schemes across string lengths.

use espat::bench::{b_depth, b_upload_bytes, plus_upload_bytes};
use espat::espat_b::KeyB;
use espat::espat_plus::{KeyPlus, PublicParams};
use espat::prg::Lambda;
use espat::sim::PpDelivery;

fn main() {
    let lam = Lambda::L128;
    println!("{:>5} {:>8} {:>8} {:>8} {:>10} {:>10} {:>9}", "bits", "KeyB", "KeyPlus", "pp", "B upload", "+ upload", "+ bcast");
    for bits in [16u32, 32, 64, 96, 128] {
        let n = bits as usize;
        println!(
            "{bits:>5} {:>8} {:>8} {:>8} {:>10} {:>10} {:>9}",
            KeyB::serialized_len(lam, b_depth(bits)),
            KeyPlus::serialized_len(lam),
            PublicParams::serialized_len(lam, n),
            b_upload_bytes(lam, b_depth(bits)),
            plus_upload_bytes(lam, n, PpDelivery::PerServer),
            plus_upload_bytes(lam, n, PpDelivery::Broadcast),
        );
    }
}
