//! Command-line front end. The binary only forwards process arguments here.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bench::{self, BenchConfig, BenchScheme};
use crate::config::Config;
use crate::ingest::{oracle_count, parse_csv, parse_geolife, uniform_points, ParseOutput};
use crate::sim::{
    apply_update, client_submit, cover_queries, plan_queries, Deployment, QueryPlan, RegionQuery, Scheme,
    Simulation,
};
use crate::spatial::{CellIndex, Region3, SpatialPoint};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    B,
    Plus,
    Both,
}

impl SchemeArg {
    fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeArg::B => vec![Scheme::B],
            SchemeArg::Plus => vec![Scheme::Plus],
            SchemeArg::Both => vec![Scheme::B, Scheme::Plus],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "espat", version, about = "Two-server private spatial counting")]
pub struct Cli {
    /// key=value file: lat_min, lat_max, lon_min, lon_max, alt_min, alt_max,
    /// bits, lambda, reps, seed, pp_delivery
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both", global = true)]
    pub scheme: SchemeArg,
    /// Seed for all randomness; outputs other than timings are reproducible
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Grid bits per axis (overrides the config)
    #[arg(long, global = true)]
    pub depth: Option<u32>,
    /// Number of synthetic points when no input file is given
    #[arg(long, global = true, default_value_t = 1000)]
    pub records: usize,
    /// Region file; one query per line: `whole`, `cover L`, `cells`,
    /// `cell X Y Z`, `cellbox X0 Y0 Z0 X1 Y1 Z1` or `box LAT0 LON0 ALT0 LAT1 LON1 ALT1`
    #[arg(long, global = true)]
    pub regions: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
    /// Read inputs as Geolife .plt trajectories
    #[arg(long, global = true)]
    pub geolife: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print each point's octree path and KD prefix.
    /// CSV columns: client_id,lat,lon,alt,cell,octree_path,kd_prefix
    Encode { input: Option<PathBuf> },
    /// Generate key shares for one point and report their sizes.
    /// CSV columns: scheme,depth,share0_bytes,share1_bytes,public_bytes,upload_bytes
    Keygen {
        /// LAT,LON,ALT; random inside the grid if omitted
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Directory to write the serialized shares into
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run clients, both servers and the requester; compare with the oracle.
    /// CSV columns: scheme,query,count,oracle,match
    Simulate {
        input: Option<PathBuf>,
        /// Write the byte accounting CSV here instead of stdout
        #[arg(long)]
        accounting: Option<PathBuf>,
        /// Write the message transcript here
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long, hide = true)]
        corrupt_share: bool,
    },
    /// Timing and size sweeps.
    /// CSV columns: scheme,operation,parameter_kind,parameter,median_ms,bytes,samples_ms
    Bench {
        #[arg(long)]
        reps: Option<usize>,
        /// Comma-separated string lengths in bits
        #[arg(long, value_delimiter = ',')]
        bits: Option<Vec<u32>>,
        /// Comma-separated record counts
        #[arg(long = "record-counts", value_delimiter = ',')]
        record_counts: Option<Vec<usize>>,
    },
    /// Submit points, replay moves, and compare update traffic.
    /// A moves file has the input CSV schema; each row moves that client's
    /// current point. CSV columns: scheme,moves,bytes,mean_bytes,ms,exact
    UpdateReplay {
        input: Option<PathBuf>,
        moves: Option<PathBuf>,
        /// Number of synthetic moves when no moves file is given
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Synthetic moves stay inside the point's parent cell
        #[arg(long)]
        same_parent: bool,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn mismatch(message: impl ToString) -> Self {
        Failure {
            code: EXIT_MISMATCH,
            message: message.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

struct Context {
    config: Config,
    deployment: Deployment,
    rng: ChaCha20Rng,
}

fn context(cli: &Cli) -> Result<Context, Failure> {
    let mut config = match &cli.config {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?
            .parse::<Config>()
            .map_err(Failure::usage)?,
        None => Config::default(),
    };
    if let Some(d) = cli.depth {
        config.bits = d;
    }
    if cli.seed.is_some() {
        config.seed = cli.seed;
    }
    let deployment = config.deployment().map_err(Failure::usage)?;
    let rng = match config.seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    };
    Ok(Context {
        config,
        deployment,
        rng,
    })
}

fn read_points(path: &Path, geolife: bool) -> Result<ParseOutput, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let client = path.file_stem().map_or("0".into(), |s| s.to_string_lossy().into_owned());
    let parsed = if geolife {
        parse_geolife(file, &client)
    } else {
        parse_csv(file)
    };
    parsed.map_err(Failure::usage)
}

fn load_points(cli: &Cli, input: Option<&Path>, ctx: &mut Context, err: &mut dyn Write) -> Result<Vec<SpatialPoint>, Failure> {
    match input {
        Some(p) => {
            let parsed = read_points(p, cli.geolife)?;
            for issue in &parsed.issues {
                let _ = writeln!(err, "warning: {}:{}: {}", p.display(), issue.line, issue.message);
            }
            Ok(parsed.points())
        }
        None => Ok(uniform_points(cli.records, &ctx.deployment.grid, &mut ctx.rng)),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let mut ctx = context(cli)?;
    let io = |e: std::io::Error| Failure::usage(e);
    match &cli.command {
        Command::Encode { input } => encode(cli, &mut ctx, input.as_deref(), out, err),
        Command::Keygen { point, out: dir } => keygen(cli, &mut ctx, point.as_deref(), dir.as_deref(), out),
        Command::Simulate {
            input,
            accounting,
            transcript,
            corrupt_share,
        } => simulate(cli, &mut ctx, input.as_deref(), accounting.as_deref(), transcript.as_deref(), *corrupt_share, out, err),
        Command::Bench {
            reps,
            bits,
            record_counts,
        } => {
            let mut schemes = vec![BenchScheme::Dpf];
            for s in cli.scheme.schemes() {
                schemes.push(match s {
                    Scheme::B => BenchScheme::B,
                    Scheme::Plus => BenchScheme::Plus,
                });
            }
            let mut cfg = BenchConfig::new(schemes);
            cfg.reps = reps.unwrap_or(ctx.config.reps);
            if cfg.reps < 5 {
                return Err(Failure::usage("at least 5 repetitions are required"));
            }
            cfg.lambda = ctx.config.lambda;
            cfg.pp_delivery = ctx.config.pp_delivery;
            if let Some(b) = bits {
                cfg.bits.clone_from(b);
            }
            if let Some(r) = record_counts {
                cfg.records.clone_from(r);
            }
            let mut recs = bench::bench_bits(&cfg, &mut ctx.rng);
            recs.extend(bench::bench_records(&cfg, &ctx.deployment, &mut ctx.rng));
            let text = match cli.format {
                Format::Csv => bench::to_csv(&recs),
                Format::Table => bench::to_table(&recs),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::UpdateReplay {
            input,
            moves,
            count,
            same_parent,
        } => update_replay(cli, &mut ctx, input.as_deref(), moves.as_deref(), *count, *same_parent, out, err),
    }
}

fn encode(cli: &Cli, ctx: &mut Context, input: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let points = match input {
        Some(_) => load_points(cli, input, ctx, err)?,
        None => Vec::new(),
    };
    let dep = &ctx.deployment;
    let mut rows = vec![["client_id", "lat", "lon", "alt", "cell", "octree_path", "kd_prefix"].map(String::from).to_vec()];
    let mut rejected = Vec::new();
    for p in &points {
        match (dep.grid.quantize(p), dep.encode_b(p), dep.encode_plus(p)) {
            (Ok(c), Ok(path), Ok(prefix)) => rows.push(vec![
                p.client_id.clone(),
                p.lat.to_string(),
                p.lon.to_string(),
                p.alt.to_string(),
                format!("{}:{}:{}", c.ix, c.iy, c.iz),
                path.to_string(),
                prefix.to_string(),
            ]),
            _ => rejected.push(p),
        }
    }
    write_rows(out, cli.format, &rows).map_err(Failure::usage)?;
    if !rejected.is_empty() {
        let _ = writeln!(out, "\nout of bounds:");
        for p in &rejected {
            let _ = writeln!(out, "{},{},{},{}", p.client_id, p.lat, p.lon, p.alt);
        }
        let _ = writeln!(err, "warning: {} point(s) outside the grid", rejected.len());
    }
    Ok(EXIT_OK)
}

fn write_rows(out: &mut dyn Write, format: Format, rows: &[Vec<String>]) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            for r in rows {
                writeln!(out, "{}", r.join(","))?;
            }
        }
        Format::Table => {
            let cols = rows.first().map_or(0, Vec::len);
            let widths: Vec<usize> = (0..cols)
                .map(|i| rows.iter().map(|r| r.get(i).map_or(0, String::len)).max().unwrap_or(0))
                .collect();
            for r in rows {
                let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                writeln!(out, "{}", cells.join("  ").trim_end())?;
            }
        }
    }
    Ok(())
}

fn parse_point(s: &str) -> Result<SpatialPoint, Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("bad point {s:?}; expected LAT,LON,ALT")))?;
    match v.as_slice() {
        [lat, lon, alt] => Ok(SpatialPoint::new("cli", *lat, *lon, *alt)),
        _ => Err(Failure::usage(format!("bad point {s:?}; expected LAT,LON,ALT"))),
    }
}

fn keygen(cli: &Cli, ctx: &mut Context, point: Option<&str>, dir: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let p = match point {
        Some(s) => parse_point(s)?,
        None => uniform_points(1, &ctx.deployment.grid, &mut ctx.rng).remove(0),
    };
    let mut rows = vec![["scheme", "depth", "share0_bytes", "share1_bytes", "public_bytes", "upload_bytes"]
        .map(String::from)
        .to_vec()];
    for scheme in cli.scheme.schemes() {
        let sub = client_submit(&ctx.deployment, scheme, &p, &mut ctx.rng).map_err(Failure::usage)?;
        let depth = match scheme {
            Scheme::B => ctx.deployment.b_depth(),
            Scheme::Plus => ctx.deployment.plus_depth(),
        };
        rows.push(vec![
            scheme.to_string(),
            depth.to_string(),
            sub.share_bytes(0).to_string(),
            sub.share_bytes(1).to_string(),
            sub.public_bytes().to_string(),
            sub.upload_bytes(ctx.deployment.pp_delivery).to_string(),
        ]);
        if let Some(d) = dir {
            fs::create_dir_all(d).map_err(Failure::usage)?;
            for b in 0..2 {
                fs::write(d.join(format!("{scheme}.key{b}")), sub.shares[b].concat()).map_err(Failure::usage)?;
            }
            if let Some(pp) = &sub.public {
                fs::write(d.join(format!("{scheme}.pp")), pp).map_err(Failure::usage)?;
            }
        }
    }
    write_rows(out, cli.format, &rows).map_err(Failure::usage)?;
    Ok(EXIT_OK)
}

fn parse_regions(text: &str, dep: &Deployment) -> Result<Vec<RegionQuery>, Failure> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Failure::usage(format!("regions line {}: cannot parse {line:?}", i + 1));
        let mut words = line.split_whitespace();
        let kind = words.next().unwrap_or_default();
        let ints = |w: std::str::SplitWhitespace| w.map(str::parse::<u64>).collect::<Result<Vec<_>, _>>();
        let floats = |w: std::str::SplitWhitespace| w.map(str::parse::<f64>).collect::<Result<Vec<_>, _>>();
        match kind {
            "whole" => out.push(RegionQuery::Whole),
            "cover" => {
                let v = ints(words).map_err(|_| bad())?;
                let [level] = v.as_slice() else { return Err(bad()) };
                out.extend(cover_queries(dep, *level as u32));
            }
            "cells" => out.extend(cover_queries(dep, dep.grid.bits)),
            "cell" => match ints(words).map_err(|_| bad())?.as_slice() {
                [x, y, z] => out.push(RegionQuery::Cell(CellIndex::new(*x, *y, *z))),
                _ => return Err(bad()),
            },
            "cellbox" => match ints(words).map_err(|_| bad())?.as_slice() {
                [a, b, c, d, e, f] => out.push(RegionQuery::CellBox {
                    lo: [*a, *b, *c],
                    hi: [*d, *e, *f],
                }),
                _ => return Err(bad()),
            },
            "box" => match floats(words).map_err(|_| bad())?.as_slice() {
                [a, b, c, d, e, f] => out.push(RegionQuery::Box(Region3 {
                    min: [*a, *b, *c],
                    max: [*d, *e, *f],
                })),
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        }
    }
    Ok(out)
}

fn queries(cli: &Cli, dep: &Deployment) -> Result<Vec<RegionQuery>, Failure> {
    match &cli.regions {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            parse_regions(&text, dep)
        }
        None => Ok(cover_queries(dep, 2)),
    }
}

fn query_label(q: &RegionQuery) -> String {
    match q {
        RegionQuery::Whole => "whole".into(),
        RegionQuery::Cell(c) => format!("cell {} {} {}", c.ix, c.iy, c.iz),
        RegionQuery::CellBox { lo, hi } => {
            format!("cellbox {} {} {} {} {} {}", lo[0], lo[1], lo[2], hi[0], hi[1], hi[2])
        }
        RegionQuery::Box(r) => format!(
            "box {} {} {} {} {} {}",
            r.min[0], r.min[1], r.min[2], r.max[0], r.max[1], r.max[2]
        ),
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    cli: &Cli,
    ctx: &mut Context,
    input: Option<&Path>,
    accounting: Option<&Path>,
    transcript: Option<&Path>,
    corrupt: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let points = load_points(cli, input, ctx, err)?;
    let qs = queries(cli, &ctx.deployment)?;
    let dep = ctx.deployment.clone();
    let mut rows = vec![["scheme", "query", "count", "oracle", "match"].map(String::from).to_vec()];
    let mut all_match = true;
    let mut acct = String::new();
    let mut lines = String::new();
    for scheme in cli.scheme.schemes() {
        let plan = plan_queries(&qs, &dep, scheme).map_err(Failure::usage)?;
        let inside: Vec<SpatialPoint> = points.iter().filter(|p| dep.grid.contains(p.coords())).cloned().collect();
        let mut sim = Simulation::new(dep.clone(), scheme, plan.regions.clone()).map_err(Failure::usage)?;
        if corrupt {
            sim.corrupt_next_share();
        }
        for p in &inside {
            sim.submit_point(p, &mut ctx.rng).map_err(Failure::usage)?;
        }
        let oracle = plan.query_counts(&oracle_count(&inside, &plan.regions, &dep).counts);
        let counts = match sim.finish() {
            Ok(r) => plan.query_counts_of(&r).into_iter().map(Some).collect(),
            Err(e) => {
                let _ = writeln!(err, "{scheme}: requester rejected the reports: {e}");
                vec![None; qs.len()]
            }
        };
        for (i, (got, want)) in counts.iter().zip(&oracle).enumerate() {
            let ok = *got == Some(*want);
            all_match &= ok;
            rows.push(vec![
                scheme.to_string(),
                query_label(&qs[i]),
                got.map_or("error".into(), |v| v.to_string()),
                want.to_string(),
                ok.to_string(),
            ]);
        }
        let depth = match scheme {
            Scheme::B => dep.b_depth(),
            Scheme::Plus => dep.plus_depth(),
        };
        let csv = sim.accounting().to_csv(scheme, depth);
        acct.push_str(if acct.is_empty() { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
        for t in sim.transcript() {
            lines.push_str(&t.to_string());
            lines.push('\n');
        }
    }
    write_rows(out, cli.format, &rows).map_err(Failure::usage)?;
    match accounting {
        Some(p) => fs::write(p, &acct).map_err(Failure::usage)?,
        None => {
            let _ = write!(out, "\n{acct}");
        }
    }
    if let Some(p) = transcript {
        fs::write(p, &lines).map_err(Failure::usage)?;
    }
    if all_match {
        let _ = writeln!(out, "\nexact match: true");
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(out, "\nexact match: false");
        Err(Failure::mismatch("protocol counts differ from the plaintext oracle"))
    }
}

/// A random point in the same parent cell (one level up) as `p`.
fn sibling<R: Rng>(dep: &Deployment, p: &SpatialPoint, rng: &mut R) -> SpatialPoint {
    let g = &dep.grid;
    let parent = g.quantize(p).expect("in bounds").coarsen(1).as_array();
    let c: [f64; 3] = std::array::from_fn(|a| {
        let lo = g.boundary(a, parent[a] * 2, g.bits);
        let hi = g.boundary(a, parent[a] * 2 + 2, g.bits);
        rng.gen_range(lo..hi)
    });
    SpatialPoint::new(p.client_id.clone(), c[0], c[1], c[2])
}

#[allow(clippy::too_many_arguments)]
fn update_replay(
    cli: &Cli,
    ctx: &mut Context,
    input: Option<&Path>,
    moves: Option<&Path>,
    count: usize,
    same_parent: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let dep = ctx.deployment.clone();
    let all = load_points(cli, input, ctx, err)?;
    // One current position per client: its first in-bounds record.
    let mut start: Vec<SpatialPoint> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for p in all.into_iter().filter(|p| dep.grid.contains(p.coords())) {
        index.entry(p.client_id.clone()).or_insert_with(|| {
            start.push(p.clone());
            start.len() - 1
        });
    }
    let script: Vec<(usize, SpatialPoint)> = match moves {
        Some(path) => {
            let parsed = read_points(path, false)?;
            for issue in &parsed.issues {
                let _ = writeln!(err, "warning: {}:{}: {}", path.display(), issue.line, issue.message);
            }
            let mut v = Vec::new();
            for p in parsed.points() {
                let Some(&i) = index.get(&p.client_id) else {
                    return Err(Failure::usage(format!("UnknownPoint: no submitted point for client {:?}", p.client_id)));
                };
                if !dep.grid.contains(p.coords()) {
                    return Err(Failure::usage(format!("move for {:?} leaves the grid", p.client_id)));
                }
                v.push((i, p));
            }
            v
        }
        None if start.is_empty() => Vec::new(),
        None => {
            let mut cur = start.clone();
            (0..count)
                .map(|_| {
                    let i = ctx.rng.gen_range(0..cur.len());
                    let to = if same_parent {
                        sibling(&dep, &cur[i], &mut ctx.rng)
                    } else {
                        let mut q = uniform_points(1, &dep.grid, &mut ctx.rng).remove(0);
                        q.client_id.clone_from(&cur[i].client_id);
                        q
                    };
                    cur[i] = to.clone();
                    (i, to)
                })
                .collect()
        }
    };

    let qs = queries(cli, &dep)?;
    let mut rows = vec![["scheme", "moves", "bytes", "mean_bytes", "ms", "exact"].map(String::from).to_vec()];
    let mut all_match = true;
    let mut bytes_by_scheme = Vec::new();
    for scheme in cli.scheme.schemes() {
        let plan: QueryPlan = plan_queries(&qs, &dep, scheme).map_err(Failure::usage)?;
        let mut sim = Simulation::new(dep.clone(), scheme, plan.regions.clone()).map_err(Failure::usage)?;
        let mut cur = start.clone();
        for p in &cur {
            sim.submit_point(p, &mut ctx.rng).map_err(Failure::usage)?;
        }
        let mut bytes = 0u64;
        let mut elapsed = 0.0;
        for (i, to) in &script {
            let t = Instant::now();
            let sub = apply_update(&dep, scheme, &cur[*i], to, &mut ctx.rng).map_err(Failure::usage)?;
            elapsed += t.elapsed().as_secs_f64() * 1e3;
            bytes += sub.upload_bytes(dep.pp_delivery) as u64;
            sim.deliver(&sub);
            cur[*i] = to.clone();
        }
        let oracle = oracle_count(&cur, &plan.regions, &dep).counts;
        let exact = match sim.finish() {
            Ok(r) => r.counts == oracle,
            Err(e) => {
                let _ = writeln!(err, "{scheme}: requester rejected the reports: {e}");
                false
            }
        };
        all_match &= exact;
        let mean = if script.is_empty() { 0 } else { bytes / script.len() as u64 };
        rows.push(vec![
            scheme.to_string(),
            script.len().to_string(),
            bytes.to_string(),
            mean.to_string(),
            format!("{elapsed:.3}"),
            exact.to_string(),
        ]);
        bytes_by_scheme.push((scheme, bytes));
    }
    write_rows(out, cli.format, &rows).map_err(Failure::usage)?;
    if let [(Scheme::B, b), (Scheme::Plus, p)] = bytes_by_scheme.as_slice() {
        if *b > 0 {
            let _ = writeln!(out, "\nplus/b byte ratio: {:.4}", *p as f64 / *b as f64);
        }
    }
    if all_match {
        Ok(EXIT_OK)
    } else {
        Err(Failure::mismatch("post-replay counts differ from the plaintext oracle"))
    }
}
