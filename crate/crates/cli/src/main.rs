use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use normlap::census::{self, CensusOptions, CensusReport};
use normlap::generators::{self, AbelianGroupSpec, RNG_ALGORITHM};
use normlap::spectral::Verdict;
use normlap::{Digraph, Error, Tolerances};
use normlap_cli::document::{self, AnalysisDocument, TOOL, VERSION};
use normlap_cli::verify::{self, VerifyOptions};
use serde::Serialize;

const EXIT_FAILURE: u8 = 1;
const EXIT_NOT_APPLICABLE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "normlap",
    version,
    about = "Spectra and separation bounds for digraphs with normal Laplacian"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum, choice of α and the separation bound for one digraph.
    Analyze(AnalyzeArgs),
    /// Count small digraphs up to isomorphism and compare with the reference table.
    Census(CensusArgs),
    /// Write a digraph in the text format to stdout.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Check every invariant over a universe of digraphs.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Digraph file (`n m` header, then one `u v` arc per line); `-` reads stdin.
    path: String,
    /// Scan every separation (n ≤ 15) and decide the verdict.
    #[arg(long)]
    brute_force: bool,
    /// Working tolerance of the eigensolver.
    #[arg(long, value_name = "ε")]
    tol: Option<f64>,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=census::MAX_CENSUS as i64))]
    order: u8,
    /// Also count every class (slow for n = 6).
    #[arg(long)]
    long: bool,
    /// Split the enumeration into this many parallel shards.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    shards: u16,
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Cayley digraph of Z_{m1} × … × Z_{mk}.
    Cayley {
        /// Cyclic factor orders, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<usize>,
        /// Connection-set element as comma-separated coordinates; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        conn: Vec<String>,
        /// Draw a random connection set instead of `--conn`.
        #[arg(long, conflicts_with = "conn")]
        seed: Option<u64>,
    },
    /// Rotational tournament on Z_n.
    Tournament {
        #[arg(long)]
        n: usize,
        /// Connection set, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<i64>,
    },
    /// Union of random directed cycles (balanced).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cycles: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Directed cycle 0 → 1 → … → n−1 → 0.
    Cycle {
        #[arg(long)]
        n: usize,
    },
    /// Complete digraph.
    Complete {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Tournaments,
    Cayley,
}

#[derive(Args)]
struct VerifyArgs {
    /// Every digraph on this many vertices (at most 5).
    #[arg(long, required_unless_present = "family", conflicts_with = "family")]
    order: Option<usize>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Largest order in the family [default: 11 for tournaments, 8 for cayley].
    #[arg(long, requires = "family")]
    max_n: Option<usize>,
    /// Negate the bound inequality (harness self-test).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidParameter(_) | Error::TooLarge { .. } => EXIT_USAGE,
            Error::NotApplicable(_) => EXIT_NOT_APPLICABLE,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn print_json<T: Serialize>(value: &T) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")
}

fn emit(text: &str) -> io::Result<()> {
    io::stdout().lock().write_all(text.as_bytes())
}

fn io_failure(e: io::Error) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: e.to_string(),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let read = if path == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::usage(format!("{path}: {e}")))?;
    Ok(text)
}

fn analyze(args: AnalyzeArgs) -> CmdResult {
    let text = read_input(&args.path)?;
    let g = Digraph::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", args.path)))?;
    let mut tol = Tolerances::<f64>::default();
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::usage(format!("--tol must be positive, got {t}")));
        }
        tol.tol = t;
    }
    let doc: AnalysisDocument = document::analyze(&g, &tol, args.brute_force)?;
    if args.text {
        emit(&document::render_text(&doc))
    } else {
        print_json(&doc)
    }
    .map_err(io_failure)?;
    Ok(if !doc.is_applicable() {
        EXIT_NOT_APPLICABLE
    } else if doc.verdict == Some(Verdict::Violated) {
        EXIT_FAILURE
    } else {
        0
    })
}

#[derive(Serialize)]
struct CensusDocument {
    tool: &'static str,
    version: &'static str,
    long: bool,
    shards: usize,
    #[serde(flatten)]
    report: CensusReport,
}

fn census(args: CensusArgs) -> CmdResult {
    let options = CensusOptions {
        long: args.long,
        shards: args.shards as usize,
    };
    let report = census::table1_census(args.order as usize, options)?;
    print_json(&CensusDocument {
        tool: TOOL,
        version: VERSION,
        long: options.long,
        shards: options.shards,
        report,
    })
    .map_err(io_failure)?;
    Ok(0)
}

fn parse_element(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Failure::usage(format!("--conn: not an integer: {x:?}")))
        })
        .collect()
}

fn generate(kind: GenerateKind) -> CmdResult {
    let (header, g) = match kind {
        GenerateKind::Cayley { orders, conn, seed } => {
            if let Some(seed) = seed {
                let spec = generators::random_connection_set(&orders, &mut generators::rng(seed))?;
                let header = format!(
                    "# cayley orders={orders:?} random connection set seed={seed}\n# rng {RNG_ALGORITHM}\n"
                );
                (header, generators::cayley_abelian(&spec)?)
            } else {
                if conn.is_empty() {
                    return Err(Failure::usage("cayley needs --conn or --seed"));
                }
                let elements = conn
                    .iter()
                    .map(|c| parse_element(c))
                    .collect::<Result<Vec<_>, _>>()?;
                let spec = AbelianGroupSpec::new(orders, &elements)?;
                (String::new(), generators::cayley_abelian(&spec)?)
            }
        }
        GenerateKind::Tournament { n, set } => {
            (String::new(), generators::rotational_tournament(n, &set)?)
        }
        GenerateKind::Random { n, cycles, seed } => (
            format!("# random eulerian n={n} cycles={cycles} seed={seed}\n# rng {RNG_ALGORITHM}\n"),
            generators::random_eulerian(n, cycles, seed)?,
        ),
        GenerateKind::Cycle { n } => (String::new(), generators::directed_cycle(n)?),
        GenerateKind::Complete { n } => {
            if n == 0 {
                return Err(Failure::usage("complete needs n >= 1"));
            }
            (String::new(), generators::complete(n)?)
        }
    };
    emit(&(header + &g.to_text())).map_err(io_failure)?;
    Ok(0)
}

fn verify(args: VerifyArgs) -> CmdResult {
    let opts = VerifyOptions {
        tol: Tolerances::default(),
        inject_fault: args.inject_fault,
    };
    let report = match (args.order, args.family) {
        (Some(n), _) => verify::verify_order(n, opts)?,
        (None, Some(Family::Tournaments)) => {
            verify::verify_tournaments(args.max_n.unwrap_or(11), opts)?
        }
        (None, Some(Family::Cayley)) => verify::verify_cayley(args.max_n.unwrap_or(8), opts)?,
        (None, None) => return Err(Failure::usage("verify needs --order or --family")),
    };
    print_json(&report).map_err(io_failure)?;
    Ok(if report.passed() { 0 } else { EXIT_FAILURE })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Census(args) => census(args),
        Command::Generate { kind } => generate(kind),
        Command::Verify(args) => verify(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
