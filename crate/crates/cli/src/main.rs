//! `orbitmul` — build, verify, export, and run rank-one decompositions of
//! the matrix multiplication tensor.
//!
//! Every command prints a short human-readable report followed by one final
//! line of compact JSON for machine consumption. Exit codes: 0 when every
//! requested verification passed, 1 when a verification failed, 2 on usage
//! or input errors.
//!
//! All randomness is seeded (`--seed`, default 0), so identical invocations
//! produce byte-identical reports; the only exception is the wall-time
//! column of `bench`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use orbitmul::artifact::{to_file_string, AnyDecomposition, AnyDesign, ArtifactError};
use orbitmul::rng::MatrixStream;
use orbitmul_core::{
    naive_multiply, orbit_design, polygon_design, rotation_generator, simplex_design,
    strassen_reference, symmetric_group_generators, triangle_design, BilinearAlgorithm,
    ComplexFloat, Decomposition, Embedding, Error as CoreError, Matrix, MultCounter,
    OrbitOptions, QuadExt, Rational, Scalar, Vector,
};

/// Environment variable holding the default verification tolerance.
const TOL_ENV: &str = "ORBITMUL_TOL";
const DEFAULT_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "orbitmul",
    version,
    about = "Build, verify, and run rank-one decompositions of the matrix multiplication tensor",
    after_help = "Exit codes: 0 all requested verifications passed, 1 a verification failed, \
                  2 usage or input error."
)]
struct Cli {
    /// Verification tolerance for floating-point artifacts (exact arithmetic
    /// ignores it). Defaults to the ORBITMUL_TOL environment variable, or
    /// 1e-9.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a design, verify its two defining identities, and
    /// optionally write it to JSON
    Design(DesignArgs),
    /// Turn a design into a rank-one decomposition (or emit a builtin one),
    /// optionally verifying it against the matrix multiplication tensor
    Decomp(DecompArgs),
    /// Multiply seeded random matrices with a decomposition's algorithm and
    /// check the result against the schoolbook product
    Multiply(MultiplyArgs),
    /// Time recursive multiplication in floating point over a range of sizes
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignKind {
    /// Three unit vectors at 120-degree angles in the plane, exact over
    /// sqrt(3)
    Triangle,
    /// The n+1 vertices of a regular simplex, exact, for n x n products
    Simplex,
    /// The m-th roots of unity in the plane, floating point
    Polygon,
    /// Group orbit of a seed vector under builtin generators
    Orbit,
}

#[derive(Args)]
struct DesignArgs {
    /// Design family to construct
    #[arg(value_enum)]
    kind: DesignKind,

    /// Matrix side n (simplex)
    #[arg(long, value_name = "N")]
    n: Option<usize>,

    /// Number of vectors m (polygon)
    #[arg(long, value_name = "M")]
    m: Option<usize>,

    /// Orbit of the simplex seed under coordinate permutations of M letters
    #[arg(long, value_name = "M")]
    symmetric: Option<usize>,

    /// Orbit of (1, 0) under rotation by 2*pi/M
    #[arg(long, value_name = "M")]
    rotation: Option<usize>,

    /// Abort orbit closure beyond this many vectors
    #[arg(long, value_name = "COUNT", default_value_t = 10_000)]
    max_orbit: usize,

    /// Write the design as a JSON file
    #[arg(short, long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecompArgs {
    /// Design to decompose: builtin name (triangle, simplex3, polygon5) or
    /// JSON file
    #[arg(
        long,
        value_name = "NAME|PATH",
        required_unless_present = "builtin",
        conflicts_with = "builtin"
    )]
    design: Option<String>,

    /// Builtin decomposition to emit directly (strassen)
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,

    /// Check the term sum against the matrix multiplication tensor
    #[arg(long)]
    verify: bool,

    /// Write the decomposition as a JSON file
    #[arg(short, long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MultiplyArgs {
    /// Decomposition to execute: builtin name (strassen, triangle,
    /// simplex3, polygon5) or JSON file
    #[arg(long, value_name = "NAME|PATH")]
    decomp: String,

    /// Side length of the matrices to multiply
    #[arg(long, value_name = "N")]
    size: usize,

    /// Seed for the random test matrices
    #[arg(long, value_name = "U64", default_value_t = 0)]
    seed: u64,

    /// Recurse blockwise, zero-padding to a power of the base size
    #[arg(long)]
    recursive: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Decomposition to benchmark: builtin name or JSON file
    #[arg(long, value_name = "NAME|PATH")]
    decomp: String,

    /// Comma-separated matrix sides to time
    #[arg(long, value_name = "LIST", default_value = "2,4,8")]
    sizes: String,

    /// Repetitions per size (wall time is averaged)
    #[arg(long, value_name = "COUNT", default_value_t = 1)]
    reps: u32,

    /// Switch to the schoolbook product for blocks at most this wide
    #[arg(long, value_name = "N", default_value_t = 1)]
    cutoff: usize,

    /// Seed for the random test matrices
    #[arg(long, value_name = "U64", default_value_t = 0)]
    seed: u64,
}

/// Failures are split by exit code: usage/input problems exit 2,
/// verification failures exit 1.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Verification(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DesignNotVerified | CoreError::DecompositionNotVerified => {
                CliError::Verification(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ArtifactError> for CliError {
    fn from(e: ArtifactError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = resolve_tol(cli.tol)?;
    match cli.command {
        Command::Design(args) => cmd_design(args, tol),
        Command::Decomp(args) => cmd_decomp(args, tol),
        Command::Multiply(args) => cmd_multiply(args, tol),
        Command::Bench(args) => cmd_bench(args, tol),
    }
}

fn resolve_tol(flag: Option<f64>) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("{TOL_ENV} must be a float, got {s:?}")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !tol.is_finite() || tol < 0.0 {
        return Err(usage(format!(
            "tolerance must be a finite nonnegative float, got {tol}"
        )));
    }
    Ok(tol)
}

/// Residuals print as `0` when exactly zero, otherwise in scientific
/// notation.
fn fmt_residual(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.3e}")
    }
}

fn write_artifact(path: &Path, value: &Value) -> Result<(), CliError> {
    fs::write(path, to_file_string(value))
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

// ---- builtin artifact names ----

/// Builtin design names: `triangle`, `simplexN`, `polygonM`.
fn builtin_design(name: &str) -> Option<Result<AnyDesign, CoreError>> {
    if name == "triangle" {
        return Some(Ok(AnyDesign::Quad(triangle_design())));
    }
    if let Some(n) = name.strip_prefix("simplex").and_then(|s| s.parse().ok()) {
        return Some(simplex_design(n).map(AnyDesign::Quad));
    }
    if let Some(m) = name.strip_prefix("polygon").and_then(|s| s.parse().ok()) {
        return Some(polygon_design(m).map(AnyDesign::Float));
    }
    None
}

fn load_design(arg: &str) -> Result<AnyDesign, CliError> {
    if let Some(built) = builtin_design(arg) {
        return Ok(built?);
    }
    let value = read_json(arg, "design (triangle, simplexN, polygonM)")?;
    Ok(AnyDesign::from_value(&value)?)
}

/// Builtin decomposition names (`strassen` plus every builtin design name),
/// or a JSON file holding either a decomposition or a design.
fn load_decomposition(arg: &str, tol: f64) -> Result<AnyDecomposition, CliError> {
    if arg == "strassen" {
        return Ok(AnyDecomposition::Rational(strassen_reference()));
    }
    if let Some(built) = builtin_design(arg) {
        return Ok(built?.decompose(tol)?);
    }
    let value = read_json(arg, "decomposition (strassen, triangle, simplexN, polygonM)")?;
    if value.get("terms").is_some() {
        Ok(AnyDecomposition::from_value(&value)?)
    } else if value.get("vectors").is_some() {
        Ok(AnyDesign::from_value(&value)?.decompose(tol)?)
    } else {
        Err(usage(format!(
            "{arg:?} holds neither a decomposition (\"terms\") nor a design (\"vectors\")"
        )))
    }
}

fn read_json(arg: &str, kinds: &str) -> Result<Value, CliError> {
    let text = fs::read_to_string(arg).map_err(|e| {
        usage(format!(
            "{arg:?} is not a builtin {kinds} and cannot be read as a file: {e}"
        ))
    })?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{arg:?} is not valid JSON: {e}")))
}

// ---- design ----

fn cmd_design(args: DesignArgs, tol: f64) -> Result<(), CliError> {
    let (kind_name, design) = match args.kind {
        DesignKind::Triangle => ("triangle".to_string(), AnyDesign::Quad(triangle_design())),
        DesignKind::Simplex => {
            let n = args
                .n
                .ok_or_else(|| usage("design simplex needs --n <N>"))?;
            (format!("simplex{n}"), AnyDesign::Quad(simplex_design(n)?))
        }
        DesignKind::Polygon => {
            let m = args
                .m
                .ok_or_else(|| usage("design polygon needs --m <M>"))?;
            (format!("polygon{m}"), AnyDesign::Float(polygon_design(m)?))
        }
        DesignKind::Orbit => build_orbit(&args)?,
    };
    let design = design.normalize();
    let report = design.verify(tol);
    println!(
        "s={} n={} residuals {} {}",
        design.size(),
        design.rank(),
        fmt_residual(report.sum_residual),
        fmt_residual(report.outer_residual)
    );
    if let Some(path) = &args.out {
        write_artifact(path, &design.to_value())?;
        println!("wrote {}", path.display());
    }
    let machine = json!({
        "command": "design",
        "kind": kind_name,
        "s": design.size(),
        "n": design.rank(),
        "scalar": design.scalar_kind().to_string(),
        "ok": report.ok,
        "sum_residual": report.sum_residual,
        "outer_residual": report.outer_residual,
        "exact": report.exact,
        "out": args.out.as_ref().map(|p| p.display().to_string()),
    });
    println!("{machine}");
    if report.ok {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "design residuals {} {} exceed tolerance {tol:e}",
            fmt_residual(report.sum_residual),
            fmt_residual(report.outer_residual)
        )))
    }
}

fn build_orbit(args: &DesignArgs) -> Result<(String, AnyDesign), CliError> {
    let opts = OrbitOptions {
        max_size: args.max_orbit,
        ..OrbitOptions::default()
    };
    match (args.symmetric, args.rotation) {
        (Some(m), None) => {
            if m < 2 {
                return Err(usage("--symmetric needs at least 2 letters"));
            }
            // The first simplex vertex is a unit vector whose coordinate
            // permutations sweep out the whole simplex.
            let seed = simplex_design(m - 1)?.vectors()[0].clone();
            let generators = symmetric_group_generators::<QuadExt>(m)?;
            let design = orbit_design(&seed, &generators, Embedding::SumZero, opts)?;
            Ok((format!("orbit-symmetric{m}"), AnyDesign::Quad(design)))
        }
        (None, Some(m)) => {
            let generators = rotation_generator(m)?;
            let seed = Vector::from_vec(vec![ComplexFloat::real(1.0), ComplexFloat::real(0.0)]);
            let design = orbit_design(&seed, &generators, Embedding::Full, opts)?;
            Ok((format!("orbit-rotation{m}"), AnyDesign::Float(design)))
        }
        _ => Err(usage(
            "design orbit needs exactly one of --symmetric <M> or --rotation <M>",
        )),
    }
}

// ---- decomp ----

fn cmd_decomp(args: DecompArgs, tol: f64) -> Result<(), CliError> {
    let (source, decomposition) = match (&args.builtin, &args.design) {
        (Some(name), _) => (name.clone(), load_decomposition(name, tol)?),
        (None, Some(arg)) => (arg.clone(), load_design(arg)?.decompose(tol)?),
        (None, None) => unreachable!("clap requires a source"),
    };
    // Export and verify in standard coordinates over the smallest field.
    let decomposition = decomposition.normalize()?;
    let report = args.verify.then(|| decomposition.verify(tol));
    match &report {
        Some(r) => println!(
            "terms={} residual={}",
            decomposition.rank(),
            fmt_residual(r.residual)
        ),
        None => println!("terms={}", decomposition.rank()),
    }
    if let Some(path) = &args.out {
        write_artifact(path, &decomposition.to_value())?;
        println!("wrote {}", path.display());
    }
    let machine = json!({
        "command": "decomp",
        "source": source,
        "provenance": decomposition.label(),
        "n": decomposition.n(),
        "terms": decomposition.rank(),
        "scalar": decomposition.scalar_kind().to_string(),
        "verified": args.verify,
        "ok": report.as_ref().map(|r| r.ok),
        "residual": report.as_ref().map(|r| r.residual),
        "exact": report.as_ref().map(|r| r.exact),
        "out": args.out.as_ref().map(|p| p.display().to_string()),
    });
    println!("{machine}");
    match report {
        Some(r) if !r.ok => Err(CliError::Verification(format!(
            "decomposition residual {} exceeds tolerance {tol:e}",
            fmt_residual(r.residual)
        ))),
        _ => Ok(()),
    }
}

// ---- multiply ----

struct MultiplyOutcome {
    mults: u64,
    naive: u64,
    matched: bool,
}

fn cmd_multiply(args: MultiplyArgs, tol: f64) -> Result<(), CliError> {
    if args.size == 0 {
        return Err(usage("--size must be at least 1"));
    }
    let decomposition = load_decomposition(&args.decomp, tol)?.normalize()?;
    let outcome = match &decomposition {
        AnyDecomposition::Rational(d) => run_multiply(d, &args, tol, Clone::clone)?,
        AnyDecomposition::Quad(d) => run_multiply(d, &args, tol, |m| {
            m.map(|x| QuadExt::from_rational(x.clone()))
        })?,
        AnyDecomposition::Float(d) => run_multiply(d, &args, tol, |m| m.map(|x| x.to_float()))?,
    };
    println!(
        "mults={} naive={} match={}",
        outcome.mults,
        outcome.naive,
        if outcome.matched { "yes" } else { "no" }
    );
    let machine = json!({
        "command": "multiply",
        "decomp": args.decomp,
        "size": args.size,
        "seed": args.seed,
        "recursive": args.recursive,
        "mults": outcome.mults,
        "naive": outcome.naive,
        "match": outcome.matched,
    });
    println!("{machine}");
    if outcome.matched {
        Ok(())
    } else {
        Err(CliError::Verification(
            "algorithm result differs from the schoolbook product".into(),
        ))
    }
}

/// Runs one seeded multiplication against the schoolbook oracle. The test
/// matrices are always drawn as small rationals and then lifted into the
/// decomposition's scalar field, so every scalar kind sees the same inputs.
fn run_multiply<S: Scalar>(
    decomposition: &Decomposition<S>,
    args: &MultiplyArgs,
    tol: f64,
    lift: impl Fn(&Matrix<Rational>) -> Matrix<S>,
) -> Result<MultiplyOutcome, CliError> {
    let algorithm = BilinearAlgorithm::from_decomposition(decomposition, tol)?;
    if !args.recursive && args.size != algorithm.n() {
        return Err(usage(format!(
            "this decomposition multiplies {0}x{0} matrices; pass --recursive for size {1}",
            algorithm.n(),
            args.size
        )));
    }
    let mut stream = MatrixStream::new(args.seed);
    let a = lift(&stream.rational_matrix(args.size, args.size));
    let b = lift(&stream.rational_matrix(args.size, args.size));
    let mut counter = MultCounter::new();
    let c = if args.recursive {
        algorithm.multiply_recursive(&a, &b, &mut counter)?
    } else {
        algorithm.multiply(&a, &b, &mut counter)?
    };
    let mut naive_counter = MultCounter::new();
    let reference = naive_multiply(&a, &b, &mut naive_counter)?;
    let matched = if S::EXACT {
        c == reference
    } else {
        let scale = reference.max_mag().max(1.0);
        c.sub(&reference).max_mag() <= tol * scale
    };
    Ok(MultiplyOutcome {
        mults: counter.scalar_mults,
        naive: naive_counter.scalar_mults,
        matched,
    })
}

// ---- bench ----

fn cmd_bench(args: BenchArgs, tol: f64) -> Result<(), CliError> {
    let sizes = parse_sizes(&args.sizes)?;
    if args.reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    let decomposition = load_decomposition(&args.decomp, tol)?.normalize()?;
    let float = decomposition.to_float_decomposition();
    let algorithm = BilinearAlgorithm::from_decomposition(&float, tol)?;
    println!(
        "benchmarking {} (rank {}, base {}x{}, cutoff {})",
        args.decomp,
        algorithm.rank(),
        algorithm.n(),
        algorithm.n(),
        args.cutoff
    );
    println!(
        "{:>6} {:>12} {:>12} {:>8} {:>12}",
        "size", "mults", "naive", "ratio", "sec/rep"
    );
    let mut rows = Vec::new();
    for &size in &sizes {
        let mut stream = MatrixStream::new(args.seed);
        let a = stream.rational_matrix(size, size).map(|x| x.to_float());
        let b = stream.rational_matrix(size, size).map(|x| x.to_float());
        let mut counter = MultCounter::new();
        let start = Instant::now();
        for _ in 0..args.reps {
            counter = MultCounter::new();
            algorithm.multiply_recursive_with_cutoff(&a, &b, args.cutoff, &mut counter)?;
        }
        let sec_per_rep = start.elapsed().as_secs_f64() / f64::from(args.reps);
        let naive = (size * size * size) as u64;
        let ratio = counter.scalar_mults as f64 / naive as f64;
        println!(
            "{size:>6} {:>12} {naive:>12} {ratio:>8.4} {sec_per_rep:>12.6}",
            counter.scalar_mults
        );
        rows.push(json!({
            "size": size,
            "mults": counter.scalar_mults,
            "naive": naive,
            "ratio": ratio,
            "sec_per_rep": sec_per_rep,
        }));
    }
    let machine = json!({
        "command": "bench",
        "decomp": args.decomp,
        "cutoff": args.cutoff,
        "reps": args.reps,
        "seed": args.seed,
        "rows": rows,
    });
    println!("{machine}");
    Ok(())
}

fn parse_sizes(list: &str) -> Result<Vec<usize>, CliError> {
    let sizes: Vec<usize> = list
        .split(',')
        .map(|part| part.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("--sizes must be comma-separated integers, got {list:?}")))?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(usage("--sizes entries must be at least 1"));
    }
    Ok(sizes)
}
