//! Timing and size sweeps over encoding-string length and record count.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{CryptoRng, Rng, RngCore};

use crate::dpf;
use crate::espat_b::{gen_update_b, keygen_b, KeyB};
use crate::espat_plus::{keygen_plus, move_gen, KeyPlus, MovePublic, PayloadSchedule, PublicParams};
use crate::group::GroupValue;
use crate::ingest::uniform_points;
use crate::prg::Lambda;
use crate::sim::{client_submit, cover_queries, plan_queries, requester_combine, Deployment, PpDelivery, Scheme, Server};
use crate::spatial::{KdPrefix, OctreePath};

pub const DEFAULT_BITS: [u32; 5] = [16, 32, 64, 96, 128];
pub const DEFAULT_RECORDS: [usize; 5] = [100, 200, 300, 400, 500];
/// Operations are repeated this many times inside one timed sample.
const INNER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchScheme {
    Dpf,
    B,
    Plus,
}

impl BenchScheme {
    pub fn name(self) -> &'static str {
        match self {
            BenchScheme::Dpf => "dpf",
            BenchScheme::B => "espat-b",
            BenchScheme::Plus => "espat-plus",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub scheme: BenchScheme,
    pub operation: &'static str,
    /// "bits" for string-length sweeps, "records" for record-count sweeps.
    pub parameter_kind: &'static str,
    pub parameter: u64,
    pub median_ms: f64,
    pub bytes: u64,
    pub samples_ms: Vec<f64>,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str = "scheme,operation,parameter_kind,parameter,median_ms,bytes,samples_ms";

    pub fn csv_line(&self) -> String {
        let samples: Vec<String> = self.samples_ms.iter().map(|s| format!("{s:.6}")).collect();
        format!(
            "{},{},{},{},{:.6},{},{}",
            self.scheme.name(),
            self.operation,
            self.parameter_kind,
            self.parameter,
            self.median_ms,
            self.bytes,
            samples.join(";")
        )
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub schemes: Vec<BenchScheme>,
    pub bits: Vec<u32>,
    pub records: Vec<usize>,
    pub reps: usize,
    pub lambda: Lambda,
    pub pp_delivery: PpDelivery,
}

impl BenchConfig {
    pub fn new(schemes: Vec<BenchScheme>) -> Self {
        BenchConfig {
            schemes,
            bits: DEFAULT_BITS.to_vec(),
            records: DEFAULT_RECORDS.to_vec(),
            reps: 5,
            lambda: Lambda::L128,
            pp_delivery: PpDelivery::PerServer,
        }
    }
}

pub fn median(samples: &[f64]) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    match v.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => v[n / 2],
        n => (v[n / 2 - 1] + v[n / 2]) / 2.0,
    }
}

/// Per-operation milliseconds: each sample times `inner` calls.
pub fn time_ms(reps: usize, inner: usize, mut f: impl FnMut()) -> Vec<f64> {
    f();
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            for _ in 0..inner {
                f();
            }
            t.elapsed().as_secs_f64() * 1e3 / inner as f64
        })
        .collect()
}

/// Octree depth for an encoding string of `bits` bits: three bits per level.
pub fn b_depth(bits: u32) -> usize {
    bits.div_ceil(3) as usize
}

fn random_path<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> OctreePath {
    OctreePath::new((0..depth).map(|_| rng.gen_range(0..8)).collect()).expect("symbols below 8")
}

fn random_prefix<R: Rng + ?Sized>(rng: &mut R, len: usize) -> KdPrefix {
    KdPrefix::new((0..len).map(|_| rng.gen()).collect())
}

fn pp_copies(d: PpDelivery) -> u64 {
    match d {
        PpDelivery::PerServer => 2,
        PpDelivery::Broadcast => 1,
    }
}

/// Per-client upload for one eSpat+ insertion at depth `n`.
pub fn plus_upload_bytes(lambda: Lambda, n: usize, delivery: PpDelivery) -> u64 {
    2 * KeyPlus::serialized_len(lambda) as u64 + pp_copies(delivery) * PublicParams::serialized_len(lambda, n) as u64
}

/// Per-client upload for one eSpat-B insertion at octree depth `n`.
pub fn b_upload_bytes(lambda: Lambda, n: usize) -> u64 {
    2 * KeyB::serialized_len(lambda, n) as u64
}

/// Upload for an eSpat+ move sharing `m` of `n` levels.
pub fn plus_move_bytes(lambda: Lambda, m: usize, n: usize, delivery: PpDelivery) -> u64 {
    2 * KeyPlus::serialized_len(lambda) as u64 + pp_copies(delivery) * MovePublic::serialized_len(lambda, m, n) as u64
}

/// Upload for an eSpat-B cancel plus insert at octree depth `n`.
pub fn b_update_bytes(lambda: Lambda, n: usize) -> u64 {
    2 * b_upload_bytes(lambda, n)
}

#[allow(clippy::too_many_arguments)]
fn record(
    scheme: BenchScheme,
    operation: &'static str,
    parameter_kind: &'static str,
    parameter: u64,
    bytes: u64,
    samples_ms: Vec<f64>,
) -> BenchRecord {
    BenchRecord {
        scheme,
        operation,
        parameter_kind,
        parameter,
        median_ms: median(&samples_ms),
        bytes,
        samples_ms,
    }
}

/// Keygen, eval and update timings across string lengths.
pub fn bench_bits<R: RngCore + CryptoRng>(cfg: &BenchConfig, rng: &mut R) -> Vec<BenchRecord> {
    let (lambda, reps) = (cfg.lambda, cfg.reps);
    let mut out = Vec::new();
    for &bits in &cfg.bits {
        let p = bits as u64;
        for &scheme in &cfg.schemes {
            match scheme {
                BenchScheme::Dpf => {
                    let alpha: Vec<bool> = (0..bits).map(|_| rng.gen()).collect();
                    let t = time_ms(reps, INNER, || {
                        dpf::gen(lambda, &alpha, GroupValue::ONE, rng).unwrap();
                    });
                    let bytes = 2 * dpf::BinaryDpfKey::serialized_len(lambda, bits as usize) as u64;
                    out.push(record(scheme, "keygen", "bits", p, bytes, t));
                    let (k0, _) = dpf::gen(lambda, &alpha, GroupValue::ONE, rng).unwrap();
                    let t = time_ms(reps, INNER, || {
                        k0.eval(&alpha).unwrap();
                    });
                    out.push(record(scheme, "eval", "bits", p, bytes / 2, t));
                }
                BenchScheme::B => {
                    let n = b_depth(bits);
                    let alpha = random_path(rng, n);
                    let t = time_ms(reps, INNER, || {
                        keygen_b(lambda, &alpha, GroupValue::ONE, rng).unwrap();
                    });
                    out.push(record(scheme, "keygen", "bits", p, b_upload_bytes(lambda, n), t));
                    let (k0, _) = keygen_b(lambda, &alpha, GroupValue::ONE, rng).unwrap();
                    let t = time_ms(reps, INNER, || {
                        k0.eval(&alpha).unwrap();
                    });
                    out.push(record(scheme, "eval", "bits", p, KeyB::serialized_len(lambda, n) as u64, t));
                    let other = random_path(rng, n);
                    let t = time_ms(reps, INNER, || {
                        gen_update_b(lambda, &alpha, &other, rng).unwrap();
                    });
                    out.push(record(scheme, "update", "bits", p, b_update_bytes(lambda, n), t));
                }
                BenchScheme::Plus => {
                    let n = bits as usize;
                    let target = random_prefix(rng, n);
                    let betas = PayloadSchedule::ones(n);
                    let t = time_ms(reps, INNER, || {
                        keygen_plus(lambda, &target, &betas, rng).unwrap();
                    });
                    let up = plus_upload_bytes(lambda, n, cfg.pp_delivery);
                    out.push(record(scheme, "keygen", "bits", p, up, t));
                    let keys = keygen_plus(lambda, &target, &betas, rng).unwrap();
                    let t = time_ms(reps, INNER, || {
                        keys.keys.0.eval_prefix(&keys.pp, &target).unwrap();
                    });
                    let recv = (KeyPlus::serialized_len(lambda) + PublicParams::serialized_len(lambda, n)) as u64;
                    out.push(record(scheme, "eval", "bits", p, recv, t));
                    let m = n / 2;
                    let tail = |p: &KdPrefix| KdPrefix::new(p.bits()[m..].to_vec());
                    let new = KdPrefix::new(
                        target.bits()[..m].iter().copied().chain(random_prefix(rng, n - m).bits().iter().copied()).collect(),
                    );
                    let t = time_ms(reps, INNER, || {
                        move_gen(lambda, &target.prefix(m), &tail(&target), &tail(&new), rng).unwrap();
                    });
                    let bytes = plus_move_bytes(lambda, m, n, cfg.pp_delivery);
                    out.push(record(scheme, "update", "bits", p, bytes, t));
                }
            }
        }
    }
    out
}

/// Server aggregation and requester combine across record counts, on the
/// deployment's grid with a 64-region cover.
pub fn bench_records<R: RngCore + CryptoRng>(cfg: &BenchConfig, dep: &Deployment, rng: &mut R) -> Vec<BenchRecord> {
    let mut out = Vec::new();
    let queries = cover_queries(dep, 2);
    for &scheme in &cfg.schemes {
        let s = match scheme {
            BenchScheme::B => Scheme::B,
            BenchScheme::Plus => Scheme::Plus,
            BenchScheme::Dpf => continue,
        };
        let regions = plan_queries(&queries, dep, s).expect("cover of the whole grid").regions;
        for &n in &cfg.records {
            let points = uniform_points(n, &dep.grid, rng);
            let subs: Vec<_> = points
                .iter()
                .map(|p| client_submit(dep, s, p, rng).expect("synthetic points are in bounds"))
                .collect();
            let msgs: [Vec<_>; 2] = [0, 1].map(|b| subs.iter().map(|x| x.for_server(b)).collect());
            let mut servers = [0u8, 1].map(|id| Server::new(id, dep.lambda, regions.clone()));
            let agg = time_ms(cfg.reps, 1, || {
                let mut fresh = Server::new(0, dep.lambda, regions.clone());
                fresh.ingest_batch(&msgs[0]).unwrap();
            });
            let received: u64 = msgs[0].iter().map(|m| m.wire_len() as u64).sum();
            out.push(record(scheme, "aggregate", "records", n as u64, received, agg));
            for (srv, m) in servers.iter_mut().zip(&msgs) {
                srv.ingest_batch(m).unwrap();
            }
            let [mut a, mut b] = servers;
            let (r0, r1) = (a.report(), b.report());
            let t = time_ms(cfg.reps, INNER, || {
                requester_combine(&r0, &r1).unwrap();
            });
            out.push(record(scheme, "statistics", "records", n as u64, (r0.len() + r1.len()) as u64, t));
        }
    }
    out
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from(BenchRecord::CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_line());
        s.push('\n');
    }
    s
}

pub fn to_table(records: &[BenchRecord]) -> String {
    let mut s = format!(
        "{:<11} {:<10} {:>8} {:>12} {:>10}\n",
        "scheme", "operation", "param", "median_ms", "bytes"
    );
    for r in records {
        let param = format!("{}{}", r.parameter, if r.parameter_kind == "bits" { "b" } else { "r" });
        let _ = writeln!(
            s,
            "{:<11} {:<10} {:>8} {:>12.4} {:>10}",
            r.scheme.name(),
            r.operation,
            param,
            r.median_ms,
            r.bytes
        );
    }
    s
}
