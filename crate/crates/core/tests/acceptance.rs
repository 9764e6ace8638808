//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

use std::time::Instant;

use espat::bench::{b_depth, median, time_ms};
use espat::codec::HEADER_LEN;
use espat::dpf;
use espat::espat_b::{gen_update_b, keygen_b};
use espat::espat_plus::{keygen_plus, move_gen, PayloadSchedule};
use espat::group::GroupValue;
use espat::ingest::{oracle_count, uniform_points};
use espat::prg::Lambda;
use espat::sim::{
    cover_queries, plan_queries, requester_combine, Deployment, PpDelivery, QueryPlan, RegionSet,
    Scheme, Simulation,
};
use espat::spatial::{
    binary_to_gray, cell_to_octree_path, gray_to_binary, CellIndex, GridConfig, KdPrefix, KdTree, OctreePath,
    SpatialPoint,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn random_bits<R: Rng>(rng: &mut R, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

fn random_path<R: Rng>(rng: &mut R, n: usize) -> OctreePath {
    OctreePath::new((0..n).map(|_| rng.gen_range(0..8)).collect()).unwrap()
}

fn grid(bits: u32) -> GridConfig {
    GridConfig::new([39.6, 116.0, 0.0], [40.2, 116.8, 500.0], bits).unwrap()
}

fn c1_point_functions() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    const TRIPLES: usize = 10_000;
    for n in 1..=8 {
        for _ in 0..TRIPLES {
            let beta = GroupValue(r.gen());
            let alpha = random_path(&mut r, n);
            let x = if r.gen() { alpha.clone() } else { random_path(&mut r, n) };
            let (k0, k1) = keygen_b(Lambda::L128, &alpha, beta, &mut r).unwrap();
            let want = if x == alpha { beta } else { GroupValue::ZERO };
            check(k0.eval(&x).unwrap() + k1.eval(&x).unwrap() == want, || format!("eSpat-B n={n} x={x}"))?;

            let alpha = random_bits(&mut r, n);
            let x = if r.gen() { alpha.clone() } else { random_bits(&mut r, n) };
            let target = KdPrefix::new(alpha.clone());
            let keys = keygen_plus(Lambda::L128, &target, &PayloadSchedule::constant(n, beta), &mut r).unwrap();
            let q = KdPrefix::new(x.clone());
            let got = keys.keys.0.eval_prefix(&keys.pp, &q).unwrap() + keys.keys.1.eval_prefix(&keys.pp, &q).unwrap();
            let want = if x == alpha { beta } else { GroupValue::ZERO };
            check(got == want, || format!("eSpat+ n={n} x={q}"))?;

            let (d0, d1) = dpf::gen(Lambda::L128, &alpha, beta, &mut r).unwrap();
            check(d0.eval(&x).unwrap() + d1.eval(&x).unwrap() == want, || format!("DPF n={n}"))?;
        }
    }
    for n in 1..=3 {
        for a in 0..8usize.pow(n as u32) {
            let alpha = OctreePath::from_index(a, n);
            let beta = GroupValue(r.gen());
            let (k0, k1) = keygen_b(Lambda::L128, &alpha, beta, &mut r).unwrap();
            let (f0, f1) = (k0.full_eval().unwrap(), k1.full_eval().unwrap());
            for (i, (y0, y1)) in f0.iter().zip(&f1).enumerate() {
                let want = if i == a { beta } else { GroupValue::ZERO };
                check(*y0 + *y1 == want, || format!("eSpat-B exhaustive n={n} alpha={alpha} x={i}"))?;
            }
        }
    }
    for n in 1..=10 {
        for a in 0..1usize << n {
            let alpha: Vec<bool> = (0..n).map(|j| (a >> (n - 1 - j)) & 1 == 1).collect();
            let beta = GroupValue(r.gen());
            let (k0, k1) = dpf::gen(Lambda::L128, &alpha, beta, &mut r).unwrap();
            let (f0, f1) = (k0.full_eval().unwrap(), k1.full_eval().unwrap());
            for (i, (y0, y1)) in f0.iter().zip(&f1).enumerate() {
                let want = if i == a { beta } else { GroupValue::ZERO };
                check(*y0 + *y1 == want, || format!("DPF exhaustive n={n} alpha={a} x={i}"))?;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 60.0, || format!("took {secs:.1} s, limit 60 s"))?;
    Ok(format!(
        "{TRIPLES} triples per scheme and depth 1..8; exhaustive eSpat-B n<=3, DPF n<=10; {secs:.1} s"
    ))
}

fn c2_prefix_exactness() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut checked = 0usize;
    for n in 1..=6 {
        let all: Vec<KdPrefix> = (1..=n)
            .flat_map(|len| (0..1usize << len).map(move |i| KdPrefix::from_index(i, len)))
            .collect();
        for t in 0..1usize << n {
            let target = KdPrefix::from_index(t, n);
            let schedule = PayloadSchedule((0..n).map(|_| GroupValue(r.gen())).collect());
            let keys = keygen_plus(Lambda::L128, &target, &schedule, &mut r).unwrap();
            let s0 = keys.keys.0.eval_regions(&keys.pp, &all).unwrap();
            let s1 = keys.keys.1.eval_regions(&keys.pp, &all).unwrap();
            for (q, (y0, y1)) in all.iter().zip(s0.iter().zip(&s1)) {
                let want = if q.is_prefix_of(&target) { schedule.0[q.len() - 1] } else { GroupValue::ZERO };
                check(*y0 + *y1 == want, || format!("n={n} target={target} prefix={q}"))?;
                // The single-prefix path must agree with the shared walk.
                if n <= 3 {
                    check(keys.keys.0.eval_prefix(&keys.pp, q).unwrap() == *y0, || format!("walk mismatch {q}"))?;
                }
                checked += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 30.0, || format!("took {secs:.1} s, limit 30 s"))?;
    Ok(format!("{checked} (target, prefix) pairs, depths 1..6; {secs:.1} s"))
}

/// Per-cell histogram computed straight from quantization.
fn naive_cells(points: &[SpatialPoint], g: &GridConfig) -> Vec<u64> {
    let k = g.cells_per_axis();
    let mut out = vec![0u64; (k * k * k) as usize];
    for p in points {
        if let Ok(c) = g.quantize(p) {
            out[((c.ix * k + c.iy) * k + c.iz) as usize] += 1;
        }
    }
    out
}

/// Per-query counts for `cover_queries(level)` from the naive histogram.
fn naive_cover(points: &[SpatialPoint], g: &GridConfig, level: u32) -> Vec<u64> {
    let k = 1u64 << level;
    let shift = g.bits - level;
    let mut out = vec![0u64; (k * k * k) as usize];
    for p in points {
        if let Ok(c) = g.quantize(p) {
            let c = c.coarsen(shift);
            out[((c.ix * k + c.iy) * k + c.iz) as usize] += 1;
        }
    }
    out
}

fn cover_plan(dep: &Deployment, scheme: Scheme, level: u32) -> QueryPlan {
    plan_queries(&cover_queries(dep, level), dep, scheme).unwrap()
}

fn c3_end_to_end() -> Outcome {
    let start = Instant::now();
    let dep = Deployment::new(grid(5), Lambda::L128).unwrap();
    let points = uniform_points(1000, &dep.grid, &mut rng(3));
    let mut notes = Vec::new();
    for scheme in [Scheme::B, Scheme::Plus] {
        for level in [2, 5] {
            let plan = cover_plan(&dep, scheme, level);
            let mut sim = Simulation::new(dep.clone(), scheme, plan.regions.clone()).map_err(|e| e.to_string())?;
            let mut r = rng(30 + level as u64);
            for pt in &points {
                sim.submit_point(pt, &mut r).map_err(|e| e.to_string())?;
            }
            let got = sim.finish().map_err(|e| e.to_string())?;
            let oracle = oracle_count(&points, &plan.regions, &dep);
            check(got.counts == oracle.counts, || format!("{scheme} level {level}: region counts differ from oracle"))?;
            let naive = naive_cover(&points, &dep.grid, level);
            check(plan.query_counts_of(&got) == naive, || format!("{scheme} level {level}: query counts differ"))?;
            check(got.total == 1000, || format!("{scheme} level {level}: total {}", got.total))?;
            notes.push(format!("{scheme}/{} queries", naive.len()));
        }
    }
    check(naive_cells(&points, &dep.grid).iter().sum::<u64>() == 1000, || "points outside grid".into())?;
    let secs = start.elapsed().as_secs_f64();
    check(secs < 120.0, || format!("took {secs:.1} s, limit 120 s"))?;
    Ok(format!("1000 points, m=5, exact for {}; {secs:.1} s", notes.join(", ")))
}

/// A destination near `p`: one cell over on a random axis, clamped to the grid.
fn nearby(p: &SpatialPoint, g: &GridConfig, r: &mut impl Rng) -> SpatialPoint {
    let c = g.quantize(p).unwrap().as_array();
    let axis = r.gen_range(0..3);
    let mut n = c;
    n[axis] = if c[axis] + 1 < g.cells_per_axis() { c[axis] + 1 } else { c[axis] - 1 };
    let (lo, hi) = g.cell_box(CellIndex::from(n));
    let coords: [f64; 3] = std::array::from_fn(|a| lo[a] + (hi[a] - lo[a]) * r.gen_range(0.1..0.9));
    SpatialPoint::new(p.client_id.clone(), coords[0], coords[1], coords[2])
}

fn c4_updates() -> Outcome {
    let dep = Deployment::new(grid(5), Lambda::L128).unwrap();
    let initial = uniform_points(500, &dep.grid, &mut rng(4));
    for scheme in [Scheme::B, Scheme::Plus] {
        let plan = cover_plan(&dep, scheme, 3);
        let mut sim = Simulation::new(dep.clone(), scheme, plan.regions.clone()).map_err(|e| e.to_string())?;
        let mut r = rng(40);
        for pt in &initial {
            sim.submit_point(pt, &mut r).map_err(|e| e.to_string())?;
        }
        let before = sim.finish().map_err(|e| e.to_string())?;

        // A -> B -> A for a handful of clients restores the histogram.
        for a in &initial[..10] {
            let b = uniform_points(1, &dep.grid, &mut r).remove(0);
            sim.move_point(a, &b, &mut r).map_err(|e| e.to_string())?;
            sim.move_point(&b, a, &mut r).map_err(|e| e.to_string())?;
        }
        let restored = sim.finish().map_err(|e| e.to_string())?;
        check(restored.counts == before.counts, || format!("{scheme}: A->B->A changed the histogram"))?;

        let mut current = initial.clone();
        for k in 0..200 {
            let i = r.gen_range(0..current.len());
            let mut dest = if k % 2 == 0 {
                nearby(&current[i], &dep.grid, &mut r)
            } else {
                uniform_points(1, &dep.grid, &mut r).remove(0)
            };
            dest.client_id = current[i].client_id.clone();
            sim.move_point(&current[i], &dest, &mut r).map_err(|e| e.to_string())?;
            current[i] = dest;
        }
        let got = sim.finish().map_err(|e| e.to_string())?;
        check(got.counts == oracle_count(&current, &plan.regions, &dep).counts, || {
            format!("{scheme}: counts after 200 moves differ from oracle")
        })?;
        check(plan.query_counts_of(&got) == naive_cover(&current, &dep.grid, 3), || {
            format!("{scheme}: query counts after 200 moves differ")
        })?;
    }
    Ok("200 moves over 500 points exact for both schemes; A->B->A restores the histogram".into())
}

fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

fn c5_sizes() -> Outcome {
    let mut r = rng(5);
    let mut detail = String::new();
    for lam in [Lambda::L64, Lambda::L128] {
        let l = lam.bits() as usize;
        for n in 1..=43 {
            let (k, _) = keygen_b(lam, &random_path(&mut r, n), GroupValue::ONE, &mut r).unwrap();
            let bits = l + 1 + n * (8 * l + 8) + 64;
            let got = k.to_bytes().len();
            check(got == HEADER_LEN + bits.div_ceil(8), || format!("KeyB λ={l} n={n}: {got} bytes for {bits} bits"))?;
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for n in 8..=43 {
            let t = KdPrefix::new(random_bits(&mut r, n));
            let keys = keygen_plus(lam, &t, &PayloadSchedule::ones(n), &mut r).unwrap();
            for key in [keys.keys.0, keys.keys.1] {
                let got = key.to_bytes().len();
                check(got == HEADER_LEN + l / 8, || format!("KeyPlus λ={l}: {got} bytes"))?;
            }
            xs.push(n as f64);
            ys.push(keys.pp.to_bytes().len() as f64);
        }
        let r2 = r_squared(&xs, &ys);
        check(r2 > 0.999, || format!("pp λ={l}: R² = {r2:.6}"))?;
        let slope = (ys[ys.len() - 1] - ys[0]) / (xs[xs.len() - 1] - xs[0]);
        detail += &format!("λ={l}: pp R²={r2:.6}, {slope:.2} B/level; ");
    }
    Ok(format!("KeyB and KeyPlus sizes exact for n=1..43; {}", detail.trim_end_matches("; ")))
}

fn c6_communication() -> Outcome {
    const STRING_BITS: u32 = 128;
    let lam = Lambda::L128;
    let mut r = rng(6);
    let n_plus = STRING_BITS as usize;
    let n_b = b_depth(STRING_BITS);

    let target = KdPrefix::new(random_bits(&mut r, n_plus));
    let keys = keygen_plus(lam, &target, &PayloadSchedule::ones(n_plus), &mut r).unwrap();
    let plus_keys = (keys.keys.0.to_bytes().len() + keys.keys.1.to_bytes().len()) as f64;
    let pp = keys.pp.to_bytes().len() as f64;
    let (b0, b1) = keygen_b(lam, &random_path(&mut r, n_b), GroupValue::ONE, &mut r).unwrap();
    let b_upload = (b0.to_bytes().len() + b1.to_bytes().len()) as f64;

    let plus_upload = |d: PpDelivery| match d {
        PpDelivery::PerServer => plus_keys + 2.0 * pp,
        PpDelivery::Broadcast => plus_keys + pp,
    };
    let configured = PpDelivery::default();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for d in [PpDelivery::PerServer, PpDelivery::Broadcast] {
        let up = plus_upload(d);
        let factor = (up / 1200.0).max(1200.0 / up);
        let ratio = b_upload / up;
        notes.push(format!(
            "{d}: eSpat+ {up:.0} B ({factor:.2}x of 1.2 KB), eSpat-B {b_upload:.0} B (ratio {ratio:.2})"
        ));
        if d == configured {
            if factor > 4.0 {
                failures.push(format!("eSpat+ upload {up:.0} B is {factor:.2}x from 1.2 KB"));
            }
            if ratio < 4.0 {
                failures.push(format!("eSpat-B/eSpat+ upload ratio {ratio:.2} < 4"));
            }
        }
    }

    let reps = 15;
    let tb = median(&time_ms(reps, 20, || {
        let a = random_path(&mut r, n_b);
        keygen_b(lam, &a, GroupValue::ONE, &mut r).unwrap();
    }));
    let tp = median(&time_ms(reps, 20, || {
        let t = KdPrefix::new(random_bits(&mut r, n_plus));
        keygen_plus(lam, &t, &PayloadSchedule::ones(n_plus), &mut r).unwrap();
    }));
    notes.push(format!("keygen median eSpat+ {tp:.4} ms vs eSpat-B {tb:.4} ms"));
    if tp >= tb {
        failures.push(format!("eSpat+ keygen {tp:.4} ms is not below eSpat-B {tb:.4} ms"));
    }

    // Requester combine on reports of equal region count built from
    // different numbers of records.
    let dep = Deployment::new(grid(4), lam).unwrap();
    let regions = RegionSet::Cells((0..4096).map(|i| OctreePath::from_index(i, 4)).collect());
    let mut reports = Vec::new();
    for records in [100usize, 400, 1000] {
        let mut sim = Simulation::new(dep.clone(), Scheme::B, regions.clone()).unwrap();
        for p in uniform_points(records, &dep.grid, &mut r) {
            sim.submit_point(&p, &mut r).unwrap();
        }
        sim.flush().unwrap();
        let (mut s0, mut s1) = (sim.server(0).clone(), sim.server(1).clone());
        let pair = (s0.report(), s1.report());
        let combined = requester_combine(&pair.0, &pair.1).unwrap();
        if combined.total != records as u64 {
            failures.push(format!("combine total {} != {records}", combined.total));
        }
        reports.push(pair);
    }
    // Interleave the record counts so drift in machine load hits all alike.
    let mut samples = vec![Vec::new(); reports.len()];
    for _ in 0..41 {
        for (pair, out) in reports.iter().zip(&mut samples) {
            out.extend(time_ms(1, 50, || {
                std::hint::black_box(requester_combine(&pair.0, &pair.1).unwrap());
            }));
        }
    }
    let medians: Vec<f64> = samples.iter().map(|s| median(s)).collect();
    let lo = medians.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = medians.iter().cloned().fold(0.0, f64::max);
    let spread = hi / lo - 1.0;
    notes.push(format!(
        "combine medians {} ms over 100/400/1000 records (spread {:.0}%)",
        medians.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>().join("/"),
        spread * 100.0
    ));
    // Noise band for sub-millisecond timings on a shared machine.
    if spread > 0.25 {
        failures.push(format!("combine time spread {:.0}% across record counts", spread * 100.0));
    }

    let summary = format!("configured delivery {configured}; {}", notes.join("; "));
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", failures.join("; ")))
    }
}

fn c7_update_savings() -> Outcome {
    let lam = Lambda::L128;
    let configured = PpDelivery::default();
    let mut r = rng(7);
    let mut worst = 0.0f64;
    // Same encoding length: eSpat+ depth 3k, eSpat-B depth k.
    for k in [5usize, 11, 43] {
        let n = 3 * k;
        let alpha = random_path(&mut r, k);
        let beta = random_path(&mut r, k);
        let up = gen_update_b(lam, &alpha, &beta, &mut r).unwrap();
        let b_bytes: usize = [false, true]
            .iter()
            .flat_map(|&p| up.party_keys(p).map(|key| key.to_bytes().len()))
            .sum();
        let mut prev = None;
        for m in (0..n).rev() {
            let common = KdPrefix::new(random_bits(&mut r, m));
            let old = KdPrefix::new(random_bits(&mut r, n - m));
            let new = KdPrefix::new(random_bits(&mut r, n - m));
            let bundle = move_gen(lam, &common, &old, &new, &mut r).unwrap();
            let public = bundle.public.to_bytes().len();
            let copies = if configured == PpDelivery::PerServer { 2 } else { 1 };
            let bytes = bundle.key(false).to_bytes().len() + bundle.key(true).to_bytes().len() + copies * public;
            if let Some(p) = prev {
                check(bytes > p, || format!("n={n}: move bytes not strictly decreasing in n-m at m={m}"))?;
            }
            prev = Some(bytes);
            if 2 * m >= n {
                let ratio = bytes as f64 / b_bytes as f64;
                worst = worst.max(ratio);
                check(ratio <= 0.70, || {
                    format!("n={n} m={m}: move {bytes} B is {:.0}% of eSpat-B {b_bytes} B", ratio * 100.0)
                })?;
            }
        }
    }
    Ok(format!(
        "{configured} delivery: worst move/cancel+insert ratio {:.0}% for m >= n/2 at n=15,33,129",
        worst * 100.0
    ))
}

fn c8_structure() -> Outcome {
    for w in 1..=12u32 {
        let size = 1u64 << w;
        for v in 0..size {
            let g = binary_to_gray(v, w).unwrap();
            check(gray_to_binary(g) == v, || format!("round trip w={w} v={v}"))?;
            let next = binary_to_gray((v + 1) % size, w).unwrap();
            check((g.bits() ^ next.bits()).count_ones() == 1, || format!("adjacency w={w} v={v}"))?;
        }
    }
    for m in 1..=4u32 {
        let g = grid(m);
        let k = g.cells_per_axis();
        for i in 0..k * k * k {
            let c = CellIndex::new(i / (k * k), (i / k) % k, i % k);
            check(cell_to_octree_path(c, &g).unwrap().to_cell() == c, || format!("octree round trip m={m}"))?;
        }
    }
    for set in 0..10u64 {
        let mut r = rng(800 + set);
        let n = r.gen_range(50..600);
        let pts: Vec<[f64; 3]> = (0..n)
            .map(|_| [r.gen_range(-10.0..10.0), r.gen_range(-10.0..10.0), r.gen_range(0.0..5.0)])
            .collect();
        let a = KdTree::build(&pts, 12).unwrap();
        check(a == KdTree::build(&pts, 12).unwrap(), || format!("set {set}: build not deterministic"))?;
        check(KdTree::from_bytes(&a.to_bytes().unwrap()).unwrap() == a, || format!("set {set}: codec"))?;
        // Leaves are the missing-child slots of the explicit tree.
        let nodes = a.explicit_nodes().unwrap();
        let mut leaves = Vec::new();
        let mut stack = vec![(0usize, KdPrefix::empty())];
        while let Some((idx, prefix)) = stack.pop() {
            for (bit, child) in [(false, nodes[idx].left()), (true, nodes[idx].right())] {
                match child {
                    Some(c) => stack.push((c, prefix.child(bit))),
                    None => leaves.push(a.prefix_region(&prefix.child(bit)).unwrap()),
                }
            }
        }
        for p in pts.iter().take(200).chain(&[[0.0, 0.0, 0.0], [-10.0, 9.99, 4.99]]) {
            let hits = leaves.iter().filter(|l| l.contains(*p)).count();
            check(hits == 1, || format!("set {set}: point {p:?} in {hits} leaves"))?;
        }
    }
    Ok("Gray round trip and cyclic adjacency exhaustive for m<=12; KD-tree determinism and leaf partition on 10 seeded sets".into())
}

fn mean_test(samples: &[u64]) -> (f64, bool) {
    let n = samples.len() as f64;
    let mean = samples.iter().map(|&v| v as f64).sum::<f64>() / n;
    let se = 2f64.powi(64) / 12f64.sqrt() / n.sqrt();
    let z = (mean - 2f64.powi(63)) / se;
    (z, z.abs() <= 3.0)
}

fn c9_uniformity() -> Outcome {
    let mut r = rng(9);
    const KEYGENS: usize = 1000;
    let mut zs = Vec::new();
    let mut bad = Vec::new();
    let n = 8;
    for party in [false, true] {
        let mut b = Vec::with_capacity(KEYGENS);
        let mut p = Vec::with_capacity(KEYGENS);
        let mut d = Vec::with_capacity(KEYGENS);
        for _ in 0..KEYGENS {
            let alpha = random_path(&mut r, n);
            let keys = keygen_b(Lambda::L128, &alpha, GroupValue::ONE, &mut r).unwrap();
            let k = if party { keys.1 } else { keys.0 };
            b.push(k.eval(&alpha).unwrap().0);

            let t = KdPrefix::new(random_bits(&mut r, 3 * n));
            let keys = keygen_plus(Lambda::L128, &t, &PayloadSchedule::ones(3 * n), &mut r).unwrap();
            let k = if party { keys.keys.1 } else { keys.keys.0 };
            p.push(k.eval_prefix(&keys.pp, &t).unwrap().0);

            let (d0, d1) = dpf::gen(Lambda::L128, t.bits(), GroupValue::ONE, &mut r).unwrap();
            d.push(if party { d1 } else { d0 }.eval(t.bits()).unwrap().0);
        }
        for (name, s) in [("eSpat-B", &b), ("eSpat+", &p), ("DPF", &d)] {
            let (z, ok) = mean_test(s);
            zs.push(format!("{name}/p{}={z:+.2}", party as u8));
            if !ok {
                bad.push(format!("{name} party {} z={z:.2}", party as u8));
            }
        }
    }
    let summary = format!("{KEYGENS} keygens, z-scores {}", zs.join(" "));
    if bad.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{} outside 3 SE; {summary}", bad.join(", ")))
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("point-function exactness", c1_point_functions),
        ("incremental prefix exactness", c2_prefix_exactness),
        ("end-to-end accuracy", c3_end_to_end),
        ("update correctness", c4_updates),
        ("key and byte scaling", c5_sizes),
        ("communication order of magnitude", c6_communication),
        ("update savings", c7_update_savings),
        ("Gray and KD structure", c8_structure),
        ("share uniformity", c9_uniformity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {}. {name}: {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
