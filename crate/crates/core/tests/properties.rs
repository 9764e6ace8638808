use espat::dpf;
use espat::espat_b::{keygen_b, KeyB};
use espat::espat_plus::{keygen_plus, move_gen, KeyPlus, MovePublic, PayloadSchedule, PublicParams};
use espat::group::GroupValue;
use espat::prg::Lambda;
use espat::spatial::{
    binary_to_gray, cell_to_octree_path, cell_to_prefix, gray_to_binary, prefix_cell_range, CellIndex,
    GridConfig, KdPrefix, KdTree, OctreePath,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn octree_path(max: usize) -> impl Strategy<Value = OctreePath> {
    prop::collection::vec(0u8..8, 1..=max).prop_map(|s| OctreePath::new(s).unwrap())
}

fn bits(min: usize, max: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), min..=max)
}

fn lambda() -> impl Strategy<Value = Lambda> {
    prop::sample::select(vec![Lambda::L64, Lambda::L128, Lambda::new(80).unwrap()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_add_sub_inverse(a: u64, b: u64) {
        let (a, b) = (GroupValue(a), GroupValue(b));
        prop_assert_eq!(a + b - b, a);
        prop_assert_eq!(a + (-a), GroupValue::ZERO);
        prop_assert_eq!(a.neg_if(true), -a);
    }

    #[test]
    fn gray_round_trip_and_adjacency(width in 1u32..=63, raw: u64) {
        let v = raw & ((1u64 << width) - 2);
        let g = binary_to_gray(v, width).unwrap();
        prop_assert_eq!(gray_to_binary(g), v);
        let next = binary_to_gray(v + 1, width).unwrap();
        prop_assert_eq!((g.bits() ^ next.bits()).count_ones(), 1);
    }

    #[test]
    fn octree_path_round_trip(bits in 1u32..=20, raw: [u64; 3]) {
        let grid = GridConfig::new([0.0; 3], [1.0; 3], bits).unwrap();
        let cell = CellIndex::from(raw.map(|v| v % grid.cells_per_axis()));
        let path = cell_to_octree_path(cell, &grid).unwrap();
        prop_assert_eq!(path.depth(), bits as usize);
        prop_assert_eq!(path.to_cell(), cell);
    }

    #[test]
    fn aligned_prefix_range_contains_cell(bits in 1u32..=12, raw: [u64; 3], frac in 0.0f64..=1.0) {
        let cell = CellIndex::from(raw.map(|v| v % (1u64 << bits)));
        let len = (frac * 3.0 * bits as f64) as usize;
        let prefix = cell_to_prefix(cell, bits, len).unwrap();
        let (lo, hi) = prefix_cell_range(&prefix, bits).unwrap();
        let c = cell.as_array();
        for a in 0..3 {
            prop_assert!(lo[a] <= c[a] && c[a] < hi[a]);
        }
        let volume: u64 = (0..3).map(|a| hi[a] - lo[a]).product();
        prop_assert_eq!(volume, 1u64 << (3 * bits as usize - len));
    }

    #[test]
    fn espat_b_point_function(lam in lambda(), alpha in octree_path(8), seed: u64, beta: u64, xs in prop::collection::vec(0u8..8, 8)) {
        let beta = GroupValue(beta);
        let (k0, k1) = keygen_b(lam, &alpha, beta, &mut rng(seed)).unwrap();
        let x = OctreePath::new(xs[..alpha.depth()].to_vec()).unwrap();
        let expect = if x == alpha { beta } else { GroupValue::ZERO };
        prop_assert_eq!(k0.eval(&x).unwrap() + k1.eval(&x).unwrap(), expect);
        prop_assert_eq!(k0.eval(&alpha).unwrap() + k1.eval(&alpha).unwrap(), beta);
        prop_assert_eq!(KeyB::from_bytes(&k1.to_bytes()).unwrap(), k1);
    }

    #[test]
    fn espat_b_region_sums(alpha in octree_path(4), seed: u64, region in prop::collection::vec(0u8..8, 0..=4)) {
        let (k0, k1) = keygen_b(Lambda::L64, &alpha, GroupValue(7), &mut rng(seed)).unwrap();
        let mut r = region;
        r.truncate(alpha.depth());
        let r = OctreePath::new(r).unwrap();
        let sum = k0.eval_regions(std::slice::from_ref(&r)).unwrap()[0] + k1.eval_regions(std::slice::from_ref(&r)).unwrap()[0];
        let expect = if r.is_prefix_of(&alpha) { GroupValue(7) } else { GroupValue::ZERO };
        prop_assert_eq!(sum, expect);
    }

    #[test]
    fn binary_dpf_point_function(lam in lambda(), alpha in bits(1, 24), seed: u64, beta: u64, flip in any::<prop::sample::Index>()) {
        let beta = GroupValue(beta);
        let (k0, k1) = dpf::gen(lam, &alpha, beta, &mut rng(seed)).unwrap();
        prop_assert_eq!(k0.eval(&alpha).unwrap() + k1.eval(&alpha).unwrap(), beta);
        let mut x = alpha.clone();
        let i = flip.index(x.len());
        x[i] = !x[i];
        prop_assert_eq!(k0.eval(&x).unwrap() + k1.eval(&x).unwrap(), GroupValue::ZERO);
        prop_assert_eq!(dpf::BinaryDpfKey::from_bytes(&k0.to_bytes()).unwrap(), k0);
    }

    #[test]
    fn espat_plus_prefixes(lam in lambda(), target in bits(1, 16), seed: u64, betas in prop::collection::vec(any::<u64>(), 16), query in bits(1, 16)) {
        let n = target.len();
        let target = KdPrefix::new(target);
        let schedule = PayloadSchedule(betas[..n].iter().map(|&b| GroupValue(b)).collect());
        let keys = keygen_plus(lam, &target, &schedule, &mut rng(seed)).unwrap();
        let q = KdPrefix::new(query[..query.len().min(n)].to_vec());
        let sum = keys.keys.0.eval_prefix(&keys.pp, &q).unwrap() + keys.keys.1.eval_prefix(&keys.pp, &q).unwrap();
        let expect = if q.is_prefix_of(&target) { schedule.0[q.len() - 1] } else { GroupValue::ZERO };
        prop_assert_eq!(sum, expect);
        prop_assert_eq!(PublicParams::from_bytes(&keys.pp.to_bytes()).unwrap(), keys.pp.clone());
        prop_assert_eq!(KeyPlus::from_bytes(&keys.keys.1.to_bytes()).unwrap(), keys.keys.1);
    }

    #[test]
    fn move_bundle_prefixes(common in bits(0, 8), tails in prop::collection::vec((any::<bool>(), any::<bool>()), 1..=8), seed: u64, query in bits(1, 16)) {
        let common = KdPrefix::new(common);
        let old = KdPrefix::new(tails.iter().map(|t| t.0).collect());
        let new = KdPrefix::new(tails.iter().map(|t| t.1).collect());
        let bundle = move_gen(Lambda::L128, &common, &old, &new, &mut rng(seed)).unwrap();
        let m = common.len();
        let n = m + old.len();
        let q = KdPrefix::new(query[..query.len().min(n)].to_vec());
        let full = |tail: &KdPrefix| {
            let mut p = common.clone();
            tail.bits().iter().for_each(|&b| p.push(b));
            p
        };
        let mut expect = GroupValue::ZERO;
        if q.len() > m {
            if q.is_prefix_of(&full(&old)) { expect -= GroupValue::ONE; }
            if q.is_prefix_of(&full(&new)) { expect += GroupValue::ONE; }
        }
        let public = MovePublic::from_bytes(&bundle.public.to_bytes()).unwrap();
        let sum = public.eval_prefix(&bundle.key(false), &q).unwrap() + public.eval_prefix(&bundle.key(true), &q).unwrap();
        prop_assert_eq!(sum, expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kd_tree_deterministic_partition(points in prop::collection::vec(prop::array::uniform3(-100.0f64..100.0), 1..200), probe in prop::array::uniform3(-100.0f64..100.0)) {
        let a = KdTree::build(&points, 16).unwrap();
        let b = KdTree::build(&points, 16).unwrap();
        prop_assert_eq!(&a, &b);
        // Walk as deep as the tree allows; at each level the probe lies in
        // exactly one child region.
        let mut prefix = KdPrefix::empty();
        while let Ok(next) = a.point_to_prefix(probe, prefix.len() + 1) {
            let inside: Vec<bool> = [false, true]
                .iter()
                .map(|&bit| a.prefix_region(&prefix.child(bit)).unwrap().contains(probe))
                .collect();
            prop_assert_eq!(inside.iter().filter(|&&x| x).count(), 1);
            prop_assert!(next.len() == prefix.len() + 1 && prefix.is_prefix_of(&next));
            prefix = next;
        }
        prop_assert!(prefix.len() <= a.height());
    }
}
