use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use btn_core::verify::Distribution;
use btn_core::{
    build_approx_decoder, build_approx_decoder_uncorrected, build_perfect_decoder, gen_random_set,
    measure_error, optimal_b, oracle_equivalence, verify_perfect, BitVec, BoundsReport,
    CodecBundle, InstanceSpec, Mode, VectorSet,
};
use clap::{Args, Parser, Subcommand};

/// Build, evaluate and verify threshold network decoders for sets of binary vectors.
#[derive(Debug, Parser)]
#[command(name = "btn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded vector set.
    Gen(GenArgs),
    /// Compile a vector set into a codec manifest.
    Build(BuildArgs),
    /// Run one code (or vector) through a manifest.
    Eval(EvalArgs),
    /// Decode every vector and report the Hamming error.
    Verify(VerifyArgs),
    /// Print width, size and lower-bound figures.
    Bounds(BoundsArgs),
    /// Re-serialize a manifest.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "D")]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tile this pattern down every column instead of drawing uniformly.
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "perfect")]
    mode: String,
    #[arg(long = "B")]
    block: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, conflicts_with = "vector", required_unless_present = "vector")]
    code: Option<String>,
    #[arg(long)]
    vector: Option<String>,
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    vectors: PathBuf,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "D")]
    dim: usize,
    #[arg(long = "d")]
    code_width: Option<usize>,
    #[arg(long = "B")]
    block: Option<usize>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

type Outcome<T> = Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(cli.command)) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("btn: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Outcome<()> {
    let Ok(value) = std::env::var("BTN_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("BTN_THREADS: expected a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("BTN_THREADS: {e}"))
}

fn run(command: Command) -> Outcome<ExitCode> {
    match command {
        Command::Gen(args) => gen(args),
        Command::Build(args) => build(args),
        Command::Eval(args) => eval(args),
        Command::Verify(args) => verify(args),
        Command::Bounds(args) => bounds(args),
        Command::Export(args) => export(args),
    }
    .map(|ok| {
        if ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    })
}

fn read(path: &Path, flag: &str) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| format!("{flag}: {}: {e}", path.display()))
}

/// Writes to `path` through a temporary file in the same directory, or to stdout.
fn emit(path: Option<&Path>, text: &str) -> Outcome<()> {
    let Some(path) = path else {
        return std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}"));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| format!("--out: {}: {e}", path.display());
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn parse_bits(text: &str, flag: &str) -> Outcome<BitVec> {
    text.parse()
        .map_err(|_| format!("{flag}: expected a string of '0' and '1', got {text:?}"))
}

fn load_manifest(path: &Path) -> Outcome<CodecBundle> {
    CodecBundle::from_manifest(&read(path, "--in")?).map_err(|e| format!("--in: {e}"))
}

/// `optimal_b` when `n > D`, otherwise 2.
fn default_block(n: usize, dim: usize) -> usize {
    if n > dim {
        optimal_b(n, dim).unwrap_or(2)
    } else {
        2
    }
}

fn gen(args: GenArgs) -> Outcome<bool> {
    let distribution = match &args.pattern {
        Some(p) => Distribution::Adversarial(parse_bits(p, "--pattern")?),
        None => Distribution::UniformDistinct,
    };
    let spec = InstanceSpec {
        n: args.n,
        dim: args.dim,
        seed: args.seed,
        distribution,
    };
    let set = gen_random_set(&spec).map_err(|e| e.to_string())?;
    emit(args.out.as_deref(), &set.to_text())?;
    Ok(true)
}

fn build(args: BuildArgs) -> Outcome<bool> {
    let mut mode: Mode = args.mode.parse().map_err(|_| {
        format!(
            "--mode: expected perfect, approx or approx-uncorrected, got {:?}",
            args.mode
        )
    })?;
    let set = VectorSet::parse(&read(&args.input, "--in")?).map_err(|e| format!("--in: {e}"))?;
    let b = match args.block {
        Some(b) if mode.is_approx() && b < 3 => {
            return Err(format!("--B: approximate decoders need B >= 3, got {b}"))
        }
        Some(b) => b,
        None => {
            let b = default_block(set.len(), set.dim());
            if mode.is_approx() && b < 3 {
                eprintln!("btn: default B={b} is below 3; building a perfect decoder instead");
                mode = Mode::Perfect;
            }
            b
        }
    };
    let bundle = match mode {
        Mode::Perfect => build_perfect_decoder(&set, b),
        Mode::Approx => build_approx_decoder(&set, b),
        Mode::ApproxUncorrected => build_approx_decoder_uncorrected(&set, b),
    }
    .map_err(|e| e.to_string())?;
    emit(args.out.as_deref(), &bundle.to_manifest())?;
    Ok(true)
}

fn eval(args: EvalArgs) -> Outcome<bool> {
    let bundle = load_manifest(&args.input)?;
    let mut out = String::new();
    let code = match (&args.code, &args.vector) {
        (Some(c), _) => parse_bits(c, "--code")?,
        (None, Some(v)) => {
            let x = parse_bits(v, "--vector")?;
            let code = bundle.encode(&x).map_err(|e| format!("--vector: {e}"))?;
            if args.trace {
                out.push_str(&format!("code {code}\n"));
            }
            code
        }
        (None, None) => unreachable!("clap requires --code or --vector"),
    };
    let (output, trace) = bundle
        .decoder
        .eval_trace(&code)
        .map_err(|e| format!("--code: {e}"))?;
    if args.trace {
        out.push_str(&format!("layer 0 {code}\n"));
        for (i, layer) in trace.iter().enumerate() {
            out.push_str(&format!("layer {} {layer}\n", i + 1));
        }
    } else {
        out.push_str(&format!("{output}\n"));
    }
    emit(None, &out)?;
    Ok(true)
}

fn verify(args: VerifyArgs) -> Outcome<bool> {
    let bundle = load_manifest(&args.input)?;
    let set = VectorSet::parse(&read(&args.vectors, "--vectors")?)
        .map_err(|e| format!("--vectors: {e}"))?;
    if set.len() != bundle.n || set.dim() != bundle.dim {
        return Err(format!(
            "--vectors: set has n={} D={}, manifest has n={} D={}",
            set.len(),
            set.dim(),
            bundle.n,
            bundle.dim
        ));
    }
    let report = match bundle.mode {
        Mode::Perfect => verify_perfect(&bundle, &set),
        _ => measure_error(&bundle, &set),
    }
    .map_err(|e| e.to_string())?;
    let mut ok = report.satisfied;
    if bundle.mode.is_approx() {
        let oracle = oracle_equivalence(&bundle, &set).map_err(|e| e.to_string())?;
        if let Some((k, j)) = oracle.first_mismatch {
            eprintln!("btn: decoder output bit {j} for k={k} differs from the predicted output");
            ok = false;
        }
    }
    emit(None, &report.to_string())?;
    Ok(ok)
}

fn bounds(args: BoundsArgs) -> Outcome<bool> {
    let b = args
        .block
        .unwrap_or_else(|| default_block(args.n, args.dim));
    let report =
        BoundsReport::new(args.n, args.dim, args.code_width, b).map_err(|e| e.to_string())?;
    emit(None, &report.to_string())?;
    Ok(true)
}

fn export(args: ExportArgs) -> Outcome<bool> {
    let bundle = load_manifest(&args.input)?;
    emit(args.out.as_deref(), &bundle.to_manifest())?;
    Ok(true)
}
