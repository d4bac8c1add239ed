use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monogenic::clifford3::BladeTable;
use monogenic::harmonics::{HarmonicBasis, ZonalHarmonicBasis};
use monogenic::monogenics::{sample_basis, MonogenicBasis};
use monogenic::near_zonal::NearZonalBasis;
use monogenic::sphere_opt::{optimize, ObjectiveKind, OptimizerConfig, Selection};
use monogenic::sphere_quad::SpherePoint;
use monogenic::verify::{self, VerifyConfig};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;
const EXIT_SINGULAR: u8 = 4;

#[derive(Parser)]
#[command(name = "monogenic", version, about = "Near-zonal bases of spherical harmonics and monogenics")]
struct Cli {
    /// Write a run manifest (config, input hash, outputs, timing) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multi-start descent for a near-zonal point ensemble.
    Optimize(OptimizeArgs),
    /// Build the near-zonal basis for a given ensemble.
    Basis(BasisArgs),
    /// Run the numerical verification suite.
    Verify(VerifyArgs),
    /// Sample the orthonormal basis functions at points.
    Eval(EvalArgs),
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    kind: ObjectiveKind,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 50)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Stop once a full cycle lowers the objective by less than this.
    #[arg(long)]
    tol: Option<f64>,
    /// Move the point with the steepest slope instead of sweeping cyclically.
    #[arg(long)]
    greedy: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PointFormat {
    /// `[x, y, z]`, normalized on load
    Cartesian,
    /// `[theta, phi]` with theta the azimuth and phi the polar angle
    Spherical,
}

#[derive(Args)]
struct PointsArgs {
    #[arg(long, value_name = "PATH")]
    points: PathBuf,
    #[arg(long, value_enum, default_value = "cartesian")]
    format: PointFormat,
}

#[derive(Args)]
struct BasisArgs {
    #[arg(long)]
    kind: ObjectiveKind,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    input: PointsArgs,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    E13Sign,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 6)]
    k_max: usize,
    #[arg(long, default_value_t = 8)]
    quad_deg: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<Fault>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    kind: ObjectiveKind,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    input: PointsArgs,
    /// Only this basis label (all labels when omitted).
    #[arg(long)]
    n: Option<usize>,
    /// Defaults to stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_FAILED, message: format!("{}: {e}", path.display()) }
    }
}

impl From<monogenic::Error> for Failure {
    fn from(e: monogenic::Error) -> Self {
        use monogenic::Error::*;
        let code = match e {
            SingularGram { .. } => EXIT_SINGULAR,
            WrongEnsembleSize { .. } | InvalidConfig(_) | IndexOutOfRange { .. } | DegeneratePoint(_) => EXIT_USAGE,
            _ => EXIT_FAILED,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    config: Value,
    /// `sha256("blob <len>\0" + input)` in hex.
    input_hash: String,
    outputs: Vec<PathBuf>,
    wall_time_secs: f64,
    exit_code: u8,
    passed: bool,
    summary: String,
}

/// What a subcommand reports back for the manifest.
#[derive(Default)]
struct Record {
    config: Value,
    input_hash: String,
    outputs: Vec<PathBuf>,
    summary: String,
}

fn blob_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::io(path, e))?;
    s.push('\n');
    fs::write(path, s).map_err(|e| Failure::io(path, e))
}

fn thread_cap() -> Result<Option<usize>, Failure> {
    match std::env::var("MONO_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::usage(format!("MONO_THREADS must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

/// Reads a points file: a bare array of points, or an object carrying an
/// `ensemble` (an optimization result, possibly nested under `best`).
fn load_points(input: &PointsArgs) -> Result<(Vec<SpherePoint<f64>>, Vec<u8>), Failure> {
    let path = &input.points;
    let bytes = fs::read(path).map_err(|e| Failure::io(path, e))?;
    let doc: Value = serde_json::from_slice(&bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let list = match &doc {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("ensemble")
            .or_else(|| o.get("best").and_then(|b| b.get("ensemble")))
            .and_then(Value::as_array)
            .ok_or_else(|| Failure::usage(format!("{}: no point array or \"ensemble\" key", path.display())))?,
        _ => return Err(Failure::usage(format!("{}: expected a JSON array of points", path.display()))),
    };
    if list.is_empty() {
        return Err(Failure::usage(format!("{}: no points", path.display())));
    }
    let want = match input.format {
        PointFormat::Cartesian => 3,
        PointFormat::Spherical => 2,
    };
    let mut points = Vec::with_capacity(list.len());
    for (i, entry) in list.iter().enumerate() {
        let coords: Option<Vec<f64>> = entry.as_array().map(|a| a.iter().filter_map(Value::as_f64).collect());
        let c = match coords {
            Some(c) if c.len() == want && entry.as_array().map_or(0, Vec::len) == want => c,
            _ => return Err(Failure::usage(format!("{}: point {i} is not a list of {want} numbers", path.display()))),
        };
        let p = match input.format {
            PointFormat::Cartesian => SpherePoint::from_cartesian([c[0], c[1], c[2]])?,
            PointFormat::Spherical => SpherePoint::from_angles(c[0], c[1]),
        };
        points.push(p);
    }
    Ok((points, bytes))
}

fn cmd_optimize(a: &OptimizeArgs, rec: &mut Record) -> Result<u8, Failure> {
    let mut cfg = OptimizerConfig::<f64>::new(a.kind, a.k);
    cfg.starts = a.starts;
    cfg.seed = a.seed;
    if let Some(m) = a.max_iters {
        cfg.max_iters = m;
    }
    if let Some(t) = a.tol {
        cfg.grad_tol = t;
    }
    if a.greedy {
        cfg.selection = Selection::Greedy;
    }
    cfg.validate()?;
    let canonical = serde_json::to_vec(&cfg).expect("config serializes");
    rec.config = serde_json::to_value(&cfg).expect("config serializes");
    rec.input_hash = blob_hash(&canonical);

    let res = match thread_cap()? {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure { code: EXIT_FAILED, message: e.to_string() })?;
            pool.install(|| optimize(&cfg))?
        }
        None => optimize(&cfg)?,
    };
    write_json(&a.out, &res)?;
    rec.outputs.push(a.out.clone());
    println!("{}", res.best.objective);

    let converged = res.starts.iter().filter(|s| s.converged).count();
    rec.summary = format!("best objective {} from start {}, {converged}/{} starts converged", res.best.objective, res.best_start, res.starts.len());
    if converged == 0 {
        eprintln!("no start converged within {} iterations", cfg.max_iters);
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(0)
}

fn cmd_basis(a: &BasisArgs, rec: &mut Record) -> Result<u8, Failure> {
    rec.config = serde_json::json!({ "kind": a.kind, "k": a.k, "points": a.input.points });
    let (points, bytes) = load_points(&a.input)?;
    rec.input_hash = blob_hash(&bytes);
    let objective = match a.kind {
        ObjectiveKind::Harmonic => {
            let bundle = ZonalHarmonicBasis::build(a.k, &points)?.bundle();
            write_json(&a.out, &bundle)?;
            bundle.objective
        }
        ObjectiveKind::Monogenic => {
            let bundle = NearZonalBasis::build(a.k, &points)?.bundle();
            write_json(&a.out, &bundle)?;
            bundle.objective
        }
    };
    rec.outputs.push(a.out.clone());
    rec.summary = format!("objective {objective}");
    println!("{objective}");
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, rec: &mut Record) -> Result<u8, Failure> {
    let cfg = VerifyConfig { k_max: a.k_max, quad_deg: a.quad_deg, seed: a.seed };
    let table = match a.inject_fault {
        Some(Fault::E13Sign) => BladeTable::with_e13_sign_fault(),
        None => BladeTable::CANONICAL,
    };
    rec.config = serde_json::to_value(&cfg).expect("config serializes");
    rec.input_hash = blob_hash(&serde_json::to_vec(&cfg).expect("config serializes"));

    let report = verify::run(&cfg, &table);
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("{:<32} {verdict}  max error {:.3e} (tol {:.0e}, {} cases)", c.name, c.max_error, c.tolerance, c.cases);
    }
    if let Some(path) = &a.json {
        write_json(path, &report)?;
        rec.outputs.push(path.clone());
    }
    let failing = report.failing();
    if failing.is_empty() {
        rec.summary = format!("all {} checks passed", report.checks.len());
        Ok(0)
    } else {
        rec.summary = format!("failing: {}", failing.join(", "));
        eprintln!("failing checks: {}", failing.join(", "));
        Ok(EXIT_FAILED)
    }
}

#[derive(Serialize)]
struct RealSample {
    theta: f64,
    phi: f64,
    value: f64,
}

#[derive(Serialize)]
struct HarmonicSamples {
    k: usize,
    n: usize,
    samples: Vec<RealSample>,
}

fn harmonic_samples(k: usize, label: usize, points: &[SpherePoint<f64>]) -> Result<HarmonicSamples, Failure> {
    let basis = HarmonicBasis::new(k);
    let i = basis
        .labels()
        .iter()
        .position(|&l| l == label)
        .ok_or_else(|| Failure::usage(format!("label {label} is not a degree-{k} harmonic")))?;
    let samples = points
        .iter()
        .map(|p| {
            Ok(RealSample { theta: p.theta, phi: p.phi, value: basis.eval(i, p)? })
        })
        .collect::<Result<_, monogenic::Error>>()?;
    Ok(HarmonicSamples { k, n: label, samples })
}

fn to_value<S: Serialize>(s: S) -> Result<Value, Failure> {
    serde_json::to_value(s).map_err(|e| Failure { code: EXIT_FAILED, message: e.to_string() })
}

fn cmd_eval(a: &EvalArgs, rec: &mut Record) -> Result<u8, Failure> {
    rec.config = serde_json::json!({ "kind": a.kind, "k": a.k, "n": a.n, "points": a.input.points });
    let (points, bytes) = load_points(&a.input)?;
    rec.input_hash = blob_hash(&bytes);
    let labels: Vec<usize> = match (a.n, a.kind) {
        (Some(n), _) => vec![n],
        (None, ObjectiveKind::Harmonic) => HarmonicBasis::new(a.k).labels(),
        (None, ObjectiveKind::Monogenic) => (0..MonogenicBasis::new(a.k).len()).collect(),
    };
    let out = labels
        .into_iter()
        .map(|n| match a.kind {
            ObjectiveKind::Harmonic => to_value(harmonic_samples(a.k, n, &points)?),
            ObjectiveKind::Monogenic => to_value(sample_basis(a.k, n, &points)?),
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    match &a.out {
        Some(path) => {
            write_json(path, &out)?;
            rec.outputs.push(path.clone());
        }
        None => println!("{}", serde_json::to_string_pretty(&out).expect("samples serialize")),
    }
    rec.summary = format!("{} functions at {} points", out.len(), points.len());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut rec = Record::default();
    let (name, result) = match &cli.command {
        Command::Optimize(a) => ("optimize", cmd_optimize(a, &mut rec)),
        Command::Basis(a) => ("basis", cmd_basis(a, &mut rec)),
        Command::Verify(a) => ("verify", cmd_verify(a, &mut rec)),
        Command::Eval(a) => ("eval", cmd_eval(a, &mut rec)),
    };
    let code = match result {
        Ok(c) => c,
        Err(f) => {
            eprintln!("error: {}", f.message);
            rec.summary = f.message;
            f.code
        }
    };
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            command: name.to_string(),
            config: rec.config,
            input_hash: rec.input_hash,
            outputs: rec.outputs,
            wall_time_secs: start.elapsed().as_secs_f64(),
            exit_code: code,
            passed: code == 0,
            summary: rec.summary,
        };
        if let Err(f) = write_json(path, &manifest) {
            eprintln!("error: {}", f.message);
            return ExitCode::from(if code == 0 { EXIT_FAILED } else { code });
        }
    }
    ExitCode::from(code)
}
