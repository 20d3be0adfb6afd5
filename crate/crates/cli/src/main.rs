use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pinkey::packing::SteinerMode;
use pinkey::report::{self, Report};
use pinkey::{Error, PinModel, TerminalSet};

/// Secret-key capacity, tree packing and XOR-propagation tool for pairwise
/// independent networks.
#[derive(Parser)]
#[command(name = "pinkey", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact secret-key capacity of the terminal set.
    Capacity(Common),
    /// Minimum-partition upper bound on the capacity.
    UpperBound(Common),
    /// Edge-disjoint Steiner trees in the multigraph at a given scale.
    Pack(PackArgs),
    /// Packs, runs the XOR protocol on seeded edge keys, and audits it.
    Simulate(SimulateArgs),
    /// Parses and checks a model file.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// Model file (JSON).
    model: PathBuf,
    /// Terminal set, e.g. `1,3`; all terminals when omitted.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct PackArgs {
    #[command(flatten)]
    common: Common,
    /// Scale n for the multigraph with n * I_ij parallel edges; defaults to
    /// the least valid scale.
    #[arg(long)]
    scale: Option<u64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    pack: PackArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `auto` adds the enumeration cross-check for small runs.
    #[arg(long, value_enum, default_value_t = AuditDepth::Auto)]
    audit: AuditDepth,
    /// Corrupts the run before auditing.
    #[arg(long, value_enum)]
    fault: Option<FaultArg>,
    /// Also writes the transcript, one broadcast per line, to this file.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Greedy,
}

impl From<ModeArg> for SteinerMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => SteinerMode::Exact,
            ModeArg::Greedy => SteinerMode::Greedy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditDepth {
    Auto,
    Rank,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    /// Flip the first broadcast bit.
    FlipBroadcast,
    /// Replace the first key bit by the first broadcast.
    KeyFromBroadcast,
}

const EXIT_USAGE: u8 = 2;
const EXIT_SIZE: u8 = 3;
const EXIT_AUDIT: u8 = 4;

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn load(common: &Common) -> Result<(PinModel, TerminalSet), Failure> {
    let text = fs::read_to_string(&common.model)
        .map_err(|e| Failure::Io(format!("{}: {e}", common.model.display())))?;
    let model = pinkey::io::parse_model(&text)?;
    let set = match &common.set {
        Some(members) => TerminalSet::new(model.m(), members.iter().copied())?,
        None => TerminalSet::full(model.m())?,
    };
    Ok((model, set))
}

fn run(cli: Cli) -> Result<(Report, Format), Failure> {
    match cli.command {
        Command::Capacity(c) => {
            let (model, set) = load(&c)?;
            Ok((report::capacity(&model, &set)?, c.format))
        }
        Command::UpperBound(c) => {
            let (model, set) = load(&c)?;
            Ok((report::upper_bound(&model, &set)?, c.format))
        }
        Command::Pack(p) => {
            let (model, set) = load(&p.common)?;
            Ok((
                report::pack(&model, &set, p.scale, p.mode.into())?,
                p.common.format,
            ))
        }
        Command::Simulate(s) => {
            let (model, set) = load(&s.pack.common)?;
            let options = report::SimulateOptions {
                scale: s.pack.scale,
                mode: s.pack.mode.into(),
                seed: s.seed,
                bruteforce: matches!(s.audit, AuditDepth::Auto),
                fault: s.fault.map(|f| match f {
                    FaultArg::FlipBroadcast => report::Fault::FlipBroadcast,
                    FaultArg::KeyFromBroadcast => report::Fault::KeyFromBroadcast,
                }),
            };
            let (r, lines) = report::simulate(&model, &set, &options)?;
            if let Some(path) = &s.transcript {
                fs::write(path, lines)
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            Ok((r, s.pack.common.format))
        }
        Command::Validate(c) => {
            let (model, _) = load(&c)?;
            Ok((report::validate(&model)?, c.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, format)) => {
            let failed = report.audit_failed();
            match format {
                Format::Text => print!("{}", report.text()),
                Format::Structured => println!("{}", report.structured()),
            }
            if let Some(reason) = failed {
                eprintln!("pinkey: audit failed: {reason}");
                return ExitCode::from(EXIT_AUDIT);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (msg, code) = match f {
                Failure::Core(e @ Error::SizeLimit { .. }) => (e.to_string(), EXIT_SIZE),
                Failure::Core(Error::Internal(m)) => (format!("internal error: {m}"), 1),
                Failure::Core(e) => (e.to_string(), EXIT_USAGE),
                Failure::Io(m) => (m, EXIT_USAGE),
            };
            eprintln!("pinkey: {msg}");
            ExitCode::from(code)
        }
    }
}
