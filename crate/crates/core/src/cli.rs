//! The `alphak` command line. Exit codes: 0 success, 1 verification
//! failure, 2 usage error, 3 budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{crossover_scan, cs_bound_2d, cs_bound_3d, upper_bound_report};
use crate::cache::{params, Cache, CacheRecord, ProblemKind, ProofStatus};
use crate::canon::{are_equivalent, canonical_form};
use crate::construct::ConstructionId;
use crate::error::{Error, Result};
use crate::lattice::{self, Engine3, PointSet3, Solve3};
use crate::matrix::BinaryMatrix;
use crate::solve::{self, CellStatus, Engine, Solve, SolveOptions};
use crate::verify::{brute_force_zero_minor, find_zero_minor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "alphak", version, about = "Zero-minor-free 0/1 matrices and box-hitting sets in lattice cubes")]
struct Cli {
    /// Time budget per search, in seconds.
    #[arg(long, global = true, default_value_t = 300.0)]
    budget: f64,
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Result cache file.
    #[arg(long, global = true, default_value = "results.jsonl")]
    cache: PathBuf,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact alpha(k, n) with a certificate matrix.
    Solve2d(Solve2d),
    /// Fewest marks hitting every box of the N x N x N grid.
    Solve3d(Solve3d),
    /// Build and verify a matrix from one of the explicit families.
    Construct(Construct),
    /// Check a matrix file for an all-zero k x k minor.
    Verify(VerifyArgs),
    /// Canonical form of a matrix under row and column permutations.
    Canon(CanonArgs),
    /// Solve every filled cell of the value table up to --max-n.
    Table(TableArgs),
    /// Upper-bound families and Cauchy-Schwarz bounds.
    Bounds(BoundsArgs),
    /// Inspect the result cache.
    Cache(CacheArgs),
}

#[derive(Args, Debug)]
struct Solve2d {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::RowOrderly)]
    engine: EngineArg,
    /// Also count the optimal classes up to row and column permutations.
    #[arg(long)]
    classes: bool,
    /// Ignore cached results.
    #[arg(long)]
    fresh: bool,
    /// Do not read or write the cache.
    #[arg(long)]
    no_cache: bool,
    /// Write the certificate matrix here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EngineArg {
    RowOrderly,
    Witness,
}

#[derive(Args, Debug)]
struct Solve3d {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Engine3Arg::Layered)]
    engine: Engine3Arg,
    /// Also count the optimal classes under the grid symmetries.
    #[arg(long)]
    classes: bool,
    #[arg(long)]
    fresh: bool,
    #[arg(long)]
    no_cache: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine3Arg {
    Layered,
    Corners,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Diagonal,
    EvenMiddle,
    Band4k5,
    SevenHalves,
    TenThirds,
    General,
}

#[derive(Args, Debug)]
struct Construct {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    k: usize,
    /// Matrix side, for the diagonal family.
    #[arg(long)]
    n: Option<usize>,
    /// Group width, for the general family.
    #[arg(long)]
    a: Option<usize>,
    /// Matrix output file; the sidecar goes to `<out>.json` unless --sidecar is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    sidecar: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    file: PathBuf,
}

#[derive(Args, Debug)]
struct CanonArgs {
    #[arg(long)]
    file: PathBuf,
    /// Compare against a second matrix.
    #[arg(long)]
    other: Option<PathBuf>,
    /// Also allow transposition.
    #[arg(long)]
    transpose: bool,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value_t = 7)]
    max_n: usize,
    /// Compare the verifier with brute force on random matrices instead.
    #[arg(long)]
    fuzz: bool,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Family values at this k.
    #[arg(long)]
    k: Option<u64>,
    /// Every k up to this value where the best family changes.
    #[arg(long)]
    scan: Option<u64>,
    /// Cauchy-Schwarz bounds for grid side N.
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args, Debug)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Print every record.
    List,
    /// Most recent record for a problem.
    Lookup {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Re-verify every referenced certificate.
    Verify,
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    budget: Duration,
    threads: Option<usize>,
    pool: Option<rayon::ThreadPool>,
    cache: Cache,
    seed: u64,
}

impl Ctx<'_> {
    fn par<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match &self.pool {
            Some(p) => p.install(f),
            None => f(),
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    if !(cli.budget.is_finite() && cli.budget >= 0.0) {
        let _ = writeln!(err, "error: --budget must be a nonnegative number of seconds");
        return EXIT_USAGE;
    }
    let pool = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            Ok(p) => Some(p),
            Err(e) => {
                let _ = writeln!(err, "error: thread pool: {e}");
                return EXIT_USAGE;
            }
        },
        None => None,
    };
    let mut ctx = Ctx {
        out,
        budget: Duration::from_secs_f64(cli.budget),
        threads: cli.threads,
        pool,
        cache: Cache::new(cli.cache),
        seed: cli.seed,
    };
    let result = dispatch(&mut ctx, cli.command);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Contract(_) => EXIT_VERIFY,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>, command: Command) -> Result<i32> {
    match command {
        Command::Solve2d(a) => solve2d(ctx, a),
        Command::Solve3d(a) => solve3d(ctx, a),
        Command::Construct(a) => construct(ctx, a),
        Command::Verify(a) => verify(ctx, a),
        Command::Canon(a) => canon(ctx, a),
        Command::Table(a) => table(ctx, a),
        Command::Bounds(a) => bounds(ctx, a),
        Command::Cache(a) => cache(ctx, a),
    }
}

fn read_matrix(path: &Path) -> Result<BinaryMatrix> {
    fs::read_to_string(path)?.parse()
}

fn solve2d(ctx: &mut Ctx<'_>, a: Solve2d) -> Result<i32> {
    let key = params([("k", a.k as u64), ("n", a.n as u64)]);
    let use_cache = !a.no_cache;
    if use_cache && !a.fresh && !a.classes {
        if let Some(r) = ctx.cache.lookup(ProblemKind::Alpha2d, &key)? {
            if let (ProofStatus::Exact, Some(v), Some(path)) = (r.proof_status, r.value, &r.certificate_path) {
                let m = read_matrix(&ctx.cache.resolve(path))?;
                writeln!(ctx.out, "alpha({},{}) = {v} (cached)", a.k, a.n)?;
                write!(ctx.out, "{}", m.to_text())?;
                write_out(a.out.as_deref(), &m.to_text())?;
                return Ok(EXIT_OK);
            }
        }
    }
    let opts = SolveOptions {
        budget: Some(ctx.budget),
        threads: ctx.threads,
        engine: match a.engine {
            EngineArg::RowOrderly => Engine::RowOrderly,
            EngineArg::Witness => Engine::WitnessBranching,
        },
    };
    match solve::solve_alpha_with(a.k, a.n, &opts)? {
        Solve::Exact(r) => {
            writeln!(ctx.out, "alpha({},{}) = {}", a.k, a.n, r.value)?;
            write!(ctx.out, "{}", r.certificate.to_text())?;
            writeln!(
                ctx.out,
                "nodes {} runtime_ms {} exhausted {:?}",
                r.stats.nodes_expanded, r.stats.runtime_ms, r.stats.exhausted
            )?;
            write_out(a.out.as_deref(), &r.certificate.to_text())?;
            if use_cache {
                let mut rec = CacheRecord::new(ProblemKind::Alpha2d, key.clone(), ProofStatus::Exact);
                rec.value = Some(r.value as u64);
                rec.runtime_ms = r.stats.runtime_ms;
                rec.certificate_path = Some(
                    ctx.cache
                        .store_certificate(&format!("alpha2d-k{}-n{}.txt", a.k, a.n), &r.certificate.to_text())?,
                );
                ctx.cache.append(&rec)?;
            }
            if a.classes {
                let started = Instant::now();
                let budget = ctx.budget;
                let e = ctx.par(|| solve::enumerate_optima(a.k, a.n, r.value, Some(budget)))?;
                writeln!(ctx.out, "classes {}{}", e.classes.len(), if e.complete { "" } else { " (incomplete)" })?;
                for c in &e.classes {
                    writeln!(ctx.out, "class {}", c.digest())?;
                    write!(ctx.out, "{}", c.body())?;
                }
                if use_cache {
                    let mut key = key;
                    key.insert("value".into(), (r.value as u64).into());
                    let status = if e.complete { ProofStatus::Exact } else { ProofStatus::BoundsOnly };
                    let mut rec = CacheRecord::new(ProblemKind::Enumerate, key, status);
                    rec.class_count = Some(e.classes.len() as u64);
                    rec.runtime_ms = started.elapsed().as_millis() as u64;
                    ctx.cache.append(&rec)?;
                }
                if !e.complete {
                    return Ok(EXIT_BUDGET);
                }
            }
            Ok(EXIT_OK)
        }
        Solve::Bounds(b) => {
            writeln!(
                ctx.out,
                "alpha({},{}) in [{}, {}] (budget exhausted)",
                a.k, a.n, b.lower, b.upper
            )?;
            if use_cache {
                let mut rec = CacheRecord::new(ProblemKind::Alpha2d, key, ProofStatus::BoundsOnly);
                rec.lower = Some(b.lower as u64);
                rec.upper = Some(b.upper as u64);
                rec.runtime_ms = b.stats.runtime_ms;
                ctx.cache.append(&rec)?;
            }
            Ok(EXIT_BUDGET)
        }
    }
}

fn solve3d(ctx: &mut Ctx<'_>, a: Solve3d) -> Result<i32> {
    let key = params([("n", a.n as u64)]);
    let use_cache = !a.no_cache;
    if use_cache && !a.fresh && !a.classes {
        if let Some(r) = ctx.cache.lookup(ProblemKind::Marks3d, &key)? {
            if let (ProofStatus::Exact, Some(v), Some(path)) = (r.proof_status, r.value, &r.certificate_path) {
                let s: PointSet3 = fs::read_to_string(ctx.cache.resolve(path))?.parse()?;
                let cube = (a.n * a.n * a.n) as u64;
                writeln!(ctx.out, "marks({}) = {v}, order = {} (cached)", a.n, cube - v)?;
                write!(ctx.out, "{}", s.to_text())?;
                write_out(a.out.as_deref(), &s.to_text())?;
                return Ok(EXIT_OK);
            }
        }
    }
    let engine = match a.engine {
        Engine3Arg::Layered => Engine3::Layered,
        Engine3Arg::Corners => Engine3::CornerBranching,
    };
    let budget = ctx.budget;
    match ctx.par(|| lattice::solve_min_marks_3d_with(a.n, Some(budget), engine))? {
        Solve3::Exact(r) => {
            writeln!(ctx.out, "marks({}) = {}, order = {}", a.n, r.value, r.order)?;
            write!(ctx.out, "{}", r.certificate.to_text())?;
            writeln!(
                ctx.out,
                "nodes {} runtime_ms {} exhausted {:?}",
                r.stats.nodes_expanded, r.stats.runtime_ms, r.stats.exhausted
            )?;
            write_out(a.out.as_deref(), &r.certificate.to_text())?;
            if use_cache {
                let mut rec = CacheRecord::new(ProblemKind::Marks3d, key.clone(), ProofStatus::Exact);
                rec.value = Some(r.value as u64);
                rec.runtime_ms = r.stats.runtime_ms;
                rec.certificate_path = Some(
                    ctx.cache
                        .store_certificate(&format!("marks3d-n{}.txt", a.n), &r.certificate.to_text())?,
                );
                ctx.cache.append(&rec)?;
            }
            if a.classes {
                let started = Instant::now();
                let classes = ctx.par(|| lattice::minimum_classes_3d(a.n, r.value))?;
                writeln!(ctx.out, "classes {}", classes.len())?;
                for c in &classes {
                    writeln!(ctx.out, "class {c:?}")?;
                }
                if use_cache {
                    let mut key = key;
                    key.insert("value".into(), (r.value as u64).into());
                    let mut rec = CacheRecord::new(ProblemKind::Enumerate, key, ProofStatus::Exact);
                    rec.class_count = Some(classes.len() as u64);
                    rec.runtime_ms = started.elapsed().as_millis() as u64;
                    ctx.cache.append(&rec)?;
                }
            }
            Ok(EXIT_OK)
        }
        Solve3::Bounds { n, lower, upper, stats } => {
            writeln!(ctx.out, "marks({n}) in [{lower}, {upper}] (budget exhausted)")?;
            if use_cache {
                let mut rec = CacheRecord::new(ProblemKind::Marks3d, key, ProofStatus::BoundsOnly);
                rec.lower = Some(lower as u64);
                rec.upper = Some(upper as u64);
                rec.runtime_ms = stats.runtime_ms;
                ctx.cache.append(&rec)?;
            }
            Ok(EXIT_BUDGET)
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Sidecar {
    schema: u32,
    family: &'static str,
    k: usize,
    n: usize,
    a: Option<usize>,
    ones: usize,
    verified: bool,
}

fn construction_id(a: &Construct) -> Result<ConstructionId> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Error::Domain(format!("--family {:?} needs {flag}", a.family)))
    };
    Ok(match a.family {
        FamilyArg::Diagonal => ConstructionId::DiagonalIdentity { n: need(a.n, "--n")?, k: a.k },
        FamilyArg::EvenMiddle => ConstructionId::EvenMiddle { k: a.k },
        FamilyArg::Band4k5 => ConstructionId::Band4k5 { k: a.k },
        FamilyArg::SevenHalves => ConstructionId::SevenHalves { k: a.k },
        FamilyArg::TenThirds => ConstructionId::TenThirds { k: a.k },
        FamilyArg::General => ConstructionId::General { k: a.k, a: need(a.a, "--a")? },
    })
}

fn construct(ctx: &mut Ctx<'_>, a: Construct) -> Result<i32> {
    let id = construction_id(&a)?;
    let started = Instant::now();
    let built = id.build()?;
    let text = built.matrix.to_text();
    let sidecar = Sidecar {
        schema: 1,
        family: id.family(),
        k: id.k(),
        n: id.n(),
        a: id.a(),
        ones: built.matrix.ones_count(),
        verified: true,
    };
    let sidecar_json = serde_json::to_string_pretty(&sidecar)?;
    match &a.out {
        Some(p) => {
            fs::write(p, &text)?;
            let side = a.sidecar.clone().unwrap_or_else(|| {
                let mut s = p.clone().into_os_string();
                s.push(".json");
                PathBuf::from(s)
            });
            fs::write(&side, format!("{sidecar_json}\n"))?;
            writeln!(ctx.out, "{id}: {} ones, verified; wrote {} and {}", sidecar.ones, p.display(), side.display())?;
        }
        None => {
            write!(ctx.out, "{text}")?;
            if let Some(side) = &a.sidecar {
                fs::write(side, format!("{sidecar_json}\n"))?;
            }
        }
    }
    if !a.no_cache {
        let mut key = params([("k", id.k() as u64)]);
        key.insert("family".into(), id.family().into());
        key.insert("n".into(), (id.n() as u64).into());
        if let Some(w) = id.a() {
            key.insert("a".into(), (w as u64).into());
        }
        let mut rec = CacheRecord::new(ProblemKind::ConstructVerify, key, ProofStatus::Exact);
        rec.value = Some(sidecar.ones as u64);
        rec.runtime_ms = started.elapsed().as_millis() as u64;
        let name = format!("construct-{}-k{}-n{}{}.txt", id.family(), id.k(), id.n(), id.a().map(|w| format!("-a{w}")).unwrap_or_default());
        rec.certificate_path = Some(ctx.cache.store_certificate(&name, &text)?);
        ctx.cache.append(&rec)?;
    }
    Ok(EXIT_OK)
}

fn verify(ctx: &mut Ctx<'_>, a: VerifyArgs) -> Result<i32> {
    let m = read_matrix(&a.file)?;
    match find_zero_minor(&m, a.k)? {
        None => {
            writeln!(ctx.out, "no zero {0}x{0} minor; ones={1}", a.k, m.ones_count())?;
            Ok(EXIT_OK)
        }
        Some(w) => {
            writeln!(
                ctx.out,
                "zero {}x{} minor at rows {:?} columns {:?}; ones={}",
                a.k,
                a.k,
                w.rows.to_vec(),
                w.cols.to_vec(),
                m.ones_count()
            )?;
            Ok(EXIT_VERIFY)
        }
    }
}

fn canon(ctx: &mut Ctx<'_>, a: CanonArgs) -> Result<i32> {
    let m = read_matrix(&a.file)?;
    let f = canonical_form(&m, a.transpose)?;
    write!(ctx.out, "{}", f.text())?;
    writeln!(ctx.out, "digest {}", f.digest())?;
    if let Some(other) = &a.other {
        let b = read_matrix(other)?;
        let eq = are_equivalent(&m, &b, a.transpose)?;
        writeln!(ctx.out, "{}", if eq { "equivalent" } else { "not equivalent" })?;
    }
    Ok(EXIT_OK)
}

fn table(ctx: &mut Ctx<'_>, a: TableArgs) -> Result<i32> {
    if a.fuzz {
        return fuzz(ctx, &a);
    }
    let budget = ctx.budget;
    let cells = ctx.par(|| solve::verify_table(a.max_n, budget))?;
    if a.json {
        writeln!(ctx.out, "{}", serde_json::to_string_pretty(&cells)?)?;
    } else {
        writeln!(ctx.out, "{:>3} {:>3} {:>8} {:>6} {:>6} {:>9} {:>10}", "k", "n", "expected", "found", "lower", "status", "runtime_ms")?;
        for c in &cells {
            let found = c.found.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            let status = match c.status {
                CellStatus::Match => "MATCH",
                CellStatus::Mismatch => "MISMATCH",
                CellStatus::Timeout => "TIMEOUT",
            };
            writeln!(
                ctx.out,
                "{:>3} {:>3} {:>8} {:>6} {:>6} {:>9} {:>10}",
                c.k, c.n, c.expected, found, c.lower, status, c.runtime_ms
            )?;
        }
    }
    let count = |s| cells.iter().filter(|c| c.status == s).count();
    let (ok, bad, slow) = (count(CellStatus::Match), count(CellStatus::Mismatch), count(CellStatus::Timeout));
    writeln!(ctx.out, "summary: {ok} match, {bad} mismatch, {slow} timeout")?;
    Ok(if bad > 0 {
        EXIT_VERIFY
    } else if slow > 0 {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

/// Random matrices, density drawn per sample, verifier against brute force.
fn fuzz(ctx: &mut Ctx<'_>, a: &TableArgs) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let max_n = a.max_n.clamp(2, 7);
    let mut disagreements = 0;
    for _ in 0..a.samples {
        let n = rng.gen_range(2..=max_n);
        let k = rng.gen_range(2..=n);
        let p: f64 = rng.gen_range(0.05..0.6);
        let entries: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        let m = BinaryMatrix::from_entries(n, n, entries)?;
        let fast = find_zero_minor(&m, k)?;
        let slow = brute_force_zero_minor(&m, k)?;
        let fast_ok = fast.as_ref().is_none_or(|w| w.validates(&m));
        if fast.is_some() != slow.is_some() || !fast_ok {
            disagreements += 1;
            writeln!(ctx.out, "disagreement at k={k}:")?;
            write!(ctx.out, "{}", m.to_text())?;
        }
    }
    writeln!(ctx.out, "fuzz: {} samples, seed {}, {disagreements} disagreements", a.samples, ctx.seed)?;
    Ok(if disagreements == 0 { EXIT_OK } else { EXIT_VERIFY })
}

fn bounds(ctx: &mut Ctx<'_>, a: BoundsArgs) -> Result<i32> {
    if a.k.is_none() && a.scan.is_none() && a.n.is_none() {
        return Err(Error::Domain("bounds needs at least one of --k, --scan, --n".into()));
    }
    if let Some(k) = a.k {
        if k == 0 {
            return Err(Error::Domain("--k must be positive".into()));
        }
        let r = upper_bound_report(k);
        for f in &r.families {
            let note = if f.applicable { "" } else { " (not applicable)" };
            writeln!(ctx.out, "{:<14} {}{note}", f.family.name(), f.value)?;
        }
        writeln!(ctx.out, "best {} from {}", r.best_upper, r.best_family.name())?;
    }
    if let Some(k_max) = a.scan {
        for c in crossover_scan(k_max) {
            writeln!(ctx.out, "k={:<4} {} -> {}", c.k, c.old_family.name(), c.new_family.name())?;
        }
    }
    if let Some(n) = a.n {
        writeln!(ctx.out, "cs_2d({n}) = {:.4}", cs_bound_2d(n))?;
        writeln!(ctx.out, "cs_3d({n}) = {:.4}", cs_bound_3d(n))?;
    }
    Ok(EXIT_OK)
}

fn cache(ctx: &mut Ctx<'_>, a: CacheArgs) -> Result<i32> {
    match a.action {
        CacheAction::List => {
            for r in ctx.cache.records()? {
                writeln!(ctx.out, "{}", serde_json::to_string(&r)?)?;
            }
            Ok(EXIT_OK)
        }
        CacheAction::Lookup { kind, k, n } => {
            let kind: ProblemKind = kind.parse()?;
            let mut key = crate::cache::Params::new();
            if let Some(k) = k {
                key.insert("k".into(), k.into());
            }
            if let Some(n) = n {
                key.insert("n".into(), n.into());
            }
            match ctx.cache.lookup(kind, &key)? {
                Some(r) => {
                    writeln!(ctx.out, "{}", serde_json::to_string(&r)?)?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(ctx.out, "no record")?;
                    Ok(EXIT_VERIFY)
                }
            }
        }
        CacheAction::Verify => {
            let mut failed = 0;
            let records = ctx.cache.records()?;
            for r in &records {
                if let Err(e) = ctx.cache.verify_record(r) {
                    failed += 1;
                    writeln!(ctx.out, "FAIL {} {:?}: {e}", r.kind.name(), r.params)?;
                }
            }
            writeln!(ctx.out, "{} records, {failed} failed", records.len())?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("alphak").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["solve2d", "--k", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["solve2d", "--k", "2", "--n", "4", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["solve2d", "--k", "5", "--n", "4", "--no-cache"]).0, EXIT_USAGE);
        assert_eq!(call(&["bounds"]).0, EXIT_USAGE);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("solve2d"));
    }

    #[test]
    fn bounds_output() {
        let (code, out, _) = call(&["bounds", "--k", "20", "--scan", "5"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("best 75 from 10k/3"), "{out}");
        assert!(out.contains("k=3"));
    }
}
