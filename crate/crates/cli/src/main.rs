mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use wittlat::strata::{classify, enumerate_strata};
use wittlat::{degeneration_chain, divisor_type, Cochar, DimReport, Error, Sampler, WittMat, WittRing};

pub const DEFAULT_SEED: u64 = 20_260_101;

#[derive(Parser)]
#[command(name = "wittlat", version, about = "Witt-vector matrices, elementary divisors and subregular strata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a matrix against X_r and its subregular strata.
    Classify(ClassifyArgs),
    /// List the dominant exponent vectors and their dominance Hasse diagram.
    Strata(StrataArgs),
    /// Histogram of divisor types over random samples of X_r.
    Census(CensusArgs),
    /// Chain of verified degeneration witnesses between two exponent vectors.
    Degenerate(DegenerateArgs),
    /// Orbit, stabilizer and codimension counts.
    Dims(DimsArgs),
    /// Run a property suite.
    Verify(verify::VerifyArgs),
    /// Exhaustive enumeration.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
pub struct Output {
    /// Pretty-print JSON.
    #[arg(long)]
    pub pretty: bool,
}

impl Output {
    pub fn emit<T: Serialize>(&self, value: &T) {
        let text = if self.pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) };
        write_stdout(&format!("{}\n", text.expect("reports serialize")));
    }
}

/// Writes to stdout, treating a closed pipe as a normal end of output.
pub fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

#[derive(Args)]
struct ClassifyArgs {
    /// Matrix JSON file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    r: usize,
    /// Expected characteristic of the residue field.
    #[arg(long)]
    p: Option<u64>,
    /// Expected degree of the residue field.
    #[arg(long)]
    m: Option<usize>,
    /// Expected matrix size.
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct StrataArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    /// Emit Graphviz instead of JSON.
    #[arg(long)]
    dot: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, env = "WITTLAT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DegenerateArgs {
    /// Lower exponent vector, e.g. 1,1.
    #[arg(long)]
    from: String,
    /// Upper exponent vector, e.g. 2,0.
    #[arg(long)]
    to: String,
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Witt length; defaults to one more than the total.
    #[arg(long = "N")]
    len: Option<usize>,
    /// Index of the nonzero field element t.
    #[arg(long, default_value_t = 1)]
    t: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    i: Option<usize>,
    /// Exponent vector, e.g. 2,0.
    #[arg(long = "type")]
    gamma: Option<String>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EnumerateArgs {
    /// The exhaustive census of 2 × 2 matrices over Z/8.
    #[arg(long)]
    tiny: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    out: Output,
}

pub enum Failure {
    Property,
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LengthMismatch { .. } | Error::RingMismatch | Error::DimensionMismatch(_) => {
                Failure::Mismatch(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

fn parse_cochar(s: &str) -> Result<Cochar, Failure> {
    Cochar::parse(s).map_err(|e| Failure::Usage(format!("invalid exponent vector {s:?}: {e}")))
}

fn cmd_classify(args: ClassifyArgs) -> CmdResult {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.input.display())))?;
    let a = WittMat::from_json(&text)?;
    let ring = a.ring();
    let mismatch =
        |what: &str, want: String, got: String| Failure::Mismatch(format!("{what}: expected {want}, file has {got}"));
    if let Some(p) = args.p.filter(|&p| p != ring.p()) {
        return Err(mismatch("p", p.to_string(), ring.p().to_string()));
    }
    if let Some(m) = args.m.filter(|&m| m != ring.m()) {
        return Err(mismatch("m", m.to_string(), ring.m().to_string()));
    }
    if let Some(n) = args.n.filter(|&n| n != a.n()) {
        return Err(mismatch("n", n.to_string(), a.n().to_string()));
    }
    if a.n() < 2 || args.r < 1 {
        return Err(Failure::Usage("need n ≥ 2 and r ≥ 1".into()));
    }
    args.out.emit(&classify(&a, args.r)?);
    Ok(())
}

fn cmd_strata(args: StrataArgs) -> CmdResult {
    let poset = enumerate_strata(args.n, args.r)?;
    if args.dot {
        write_stdout(&poset.to_dot());
    } else {
        args.out.emit(&poset);
    }
    Ok(())
}

#[derive(Serialize)]
struct CensusReport {
    p: u64,
    m: usize,
    n: usize,
    r: usize,
    #[serde(rename = "N")]
    len: usize,
    seed: u64,
    samples: usize,
    histogram: BTreeMap<String, usize>,
}

const CENSUS_CHUNK: usize = 64;

/// Seed of the `k`-th independent stream derived from `seed`.
pub fn stream_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn cmd_census(args: CensusArgs) -> CmdResult {
    if args.n < 2 || args.r < 1 {
        return Err(Failure::Usage("need n ≥ 2 and r ≥ 1".into()));
    }
    let ring = WittRing::with_params(args.p, args.m, args.n * args.r + 1)?;
    let chunks = args.samples.div_ceil(CENSUS_CHUNK);
    let run_chunk = |c: usize| {
        let mut s = Sampler::new(&ring, args.n, stream_seed(args.seed, c as u64));
        let count = CENSUS_CHUNK.min(args.samples - c * CENSUS_CHUNK);
        (0..count).map(|_| divisor_type(&s.in_xr(args.r)).to_string()).collect::<Vec<_>>()
    };
    let jobs = args.jobs.max(1);
    let per_chunk: Vec<Vec<String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let run_chunk = &run_chunk;
                scope.spawn(move || (w..chunks).step_by(jobs).map(|c| (c, run_chunk(c))).collect::<Vec<_>>())
            })
            .collect();
        let mut all: Vec<(usize, Vec<String>)> =
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect();
        all.sort_by_key(|(c, _)| *c);
        all.into_iter().map(|(_, v)| v).collect()
    });
    let mut histogram = BTreeMap::new();
    for label in per_chunk.into_iter().flatten() {
        *histogram.entry(label).or_insert(0) += 1;
    }
    args.out.emit(&CensusReport {
        p: args.p,
        m: args.m,
        n: args.n,
        r: args.r,
        len: ring.len(),
        seed: args.seed,
        samples: args.samples,
        histogram,
    });
    Ok(())
}

#[derive(Serialize)]
struct ChainReport {
    from: Cochar,
    to: Cochar,
    p: u64,
    m: usize,
    #[serde(rename = "N")]
    len: usize,
    t: wittlat::FieldElem,
    steps: Vec<wittlat::ChainStep>,
}

fn cmd_degenerate(args: DegenerateArgs) -> CmdResult {
    let from = parse_cochar(&args.from)?;
    let to = parse_cochar(&args.to)?;
    let len = args.len.unwrap_or(to.total().max(from.total()) + 1);
    let ring = WittRing::with_params(args.p, args.m, len)?;
    let field = ring.field();
    if args.t == 0 || args.t >= field.order() {
        return Err(Failure::Usage(format!("t must index a nonzero element of F_{}", field.order())));
    }
    let t = field.from_index(args.t);
    let steps = degeneration_chain(&ring, &from, &to, &t)?;
    args.out.emit(&ChainReport { from, to, p: args.p, m: args.m, len, t, steps });
    Ok(())
}

fn cmd_dims(args: DimsArgs) -> CmdResult {
    let report = match (&args.gamma, args.i) {
        (Some(g), None) => {
            let gamma = parse_cochar(g)?;
            if args.n.is_some_and(|n| n != gamma.n()) {
                return Err(Failure::Mismatch("--n differs from the length of --type".into()));
            }
            DimReport::new(&gamma, args.r)?
        }
        (None, Some(i)) => {
            let n = args.n.ok_or_else(|| Failure::Usage("--i needs --n".into()))?;
            DimReport::subregular(i, n, args.r)?
        }
        _ => return Err(Failure::Usage("give exactly one of --type or --i".into())),
    };
    args.out.emit(&report);
    Ok(())
}

fn cmd_enumerate(args: EnumerateArgs) -> CmdResult {
    if !args.tiny {
        return Err(Failure::Usage("only --tiny is supported".into()));
    }
    let census = wittlat::dimension::point_count_oracle(args.jobs);
    args.out.emit(&census);
    if census.all_ok {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Strata(a) => cmd_strata(a),
        Command::Census(a) => cmd_census(a),
        Command::Degenerate(a) => cmd_degenerate(a),
        Command::Dims(a) => cmd_dims(a),
        Command::Verify(a) => verify::run(a),
        Command::Enumerate(a) => cmd_enumerate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
