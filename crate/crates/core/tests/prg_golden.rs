//! Frozen outputs for the all-zero seed at λ = 128. Any change here means the
//! key formats are no longer compatible with previously generated keys.

use espat::group::GroupValue;
use espat::prg::{Lambda, Prg, Seed};

const EXPAND8_ZERO: [(u128, bool); 8] = [
    (0xf1473689a8e654b60502d677963c4c6a, false),
    (0x3dba8d62b5c4d071ec908e7853fc49e6, true),
    (0x78104512f0435bf9724d92080d5d80fa, true),
    (0x0210dcf1e208b859bc34f8dea023a08d, true),
    (0xd536ca09494b1374a69f7e00a02c5c18, false),
    (0x6acd76a03c88772d5607b23ad2c1361c, true),
    (0xcf9e2ac895c71e5e0eb78855f01081de, true),
    (0x02b1cd8f47e40582a7f8e6252c97a47c, false),
];

fn prg() -> Prg {
    Prg::new(Lambda::L128)
}

#[test]
fn expand8_zero_seed() {
    let got = prg().expand8(Seed::ZERO);
    for (i, &(seed, t)) in EXPAND8_ZERO.iter().enumerate() {
        assert_eq!(got.children[i].0.value(), seed, "child {i} seed");
        assert_eq!(got.children[i].1, t, "child {i} control");
    }
}

#[test]
fn expand2_zero_seed() {
    let got = prg().expand2(Seed::ZERO);
    assert_eq!(got.left().0.value(), 0xf1473689a8e654b60502d677963c4c6a);
    assert!(!got.left().1);
    assert_eq!(got.right().0.value(), 0x3dba8d62b5c4d071ec908e7853fc49e6);
    assert!(got.right().1);
}

#[test]
fn convert_zero_seed() {
    assert_eq!(prg().convert(Seed::ZERO), GroupValue(0x39b309d8929f5ba5));
    let (s, v) = prg().convert_pair(Seed::ZERO);
    assert_eq!(s.value(), 0xbb267eafbc2c814259ea775b797051cc);
    assert_eq!(v, GroupValue(0x1cfe1305b3eb6568));
}
