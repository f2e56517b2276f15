//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or parse error, 2 numeric or degeneracy
//! failure. Diagnostics go to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit::{audit_report, builtin_strategy, round_robin, Contestant, TournamentOptions};
use crate::error::{Error, Result};
use crate::game::MixedProfile;
use crate::interface::plot::{emit_plot_data, PlotFormat, PlotSeries};
use crate::interface::report::{write_report, ExtractionReport, Format, Report, SolveReport};
use crate::interface::spec_format::{parse_game_spec, GameSpecDocument};
use crate::solvers::{
    equilibria, pareto_front, scheme_beta_weighted, scheme_human_priority, scheme_kantian,
    scheme_social_welfare,
};
use crate::valuation::{consistency_check, extract_kantian, Designation, EstimateKind};
use crate::zd::{
    feasible_segment, parse_strategy_literal, phi_max, zd_construct, Baseline, MemoryOneStrategy,
    Move, PdPayoffs,
};

#[derive(Parser, Debug)]
#[command(
    name = "moral-games",
    version,
    about = "Ethics schemes, Kantian value extraction and ZD strategy audits"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a game-spec file under one scheme.
    Solve(SolveArgs),
    /// Recover Kantian values from the spec's `observed` counts.
    Extract(ExtractArgs),
    /// Zero-determinant strategy tools.
    #[command(subcommand)]
    Zd(ZdCommand),
    /// Round-robin iterated prisoner's dilemma tournament.
    Tournament(TournamentArgs),
    /// Outcome-space plot of ZD strategies.
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Nash,
    HumanPriority,
    Social,
    Beta,
    Kantian,
}

#[derive(Args, Debug)]
struct SolveArgs {
    spec: PathBuf,
    #[arg(long, value_enum, default_value = "nash")]
    scheme: SchemeArg,
    /// Weight on the human payoff for `--scheme beta` (must exceed 1).
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    spec: PathBuf,
    /// Designated strategies, e.g. `P1=b,P2=ap`.
    #[arg(long)]
    designate: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum ZdCommand {
    /// Build a ZD strategy from its extortion factor, baseline and scale.
    Construct {
        #[arg(long)]
        chi: f64,
        #[arg(long, default_value = "P")]
        baseline: String,
        /// `max` or a positive number.
        #[arg(long, default_value = "max")]
        phi: String,
        /// `R,T,S,P`.
        #[arg(long, default_value = "3,5,0,1")]
        payoffs: String,
        #[command(flatten)]
        output: Output,
    },
    /// Audit a memory-one strategy.
    Audit {
        /// `p1,p2,p3,p4` (decimals or fractions) or a built-in name.
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        initial: Option<String>,
        #[arg(long, default_value = "3,5,0,1")]
        payoffs: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct TournamentArgs {
    /// Comma-separated strategy names.
    #[arg(long, default_value = "tft,allc,alld,extorter,generous")]
    strategies: String,
    #[arg(long, default_value_t = 500)]
    rounds: usize,
    #[arg(long, default_value_t = 1)]
    reps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long)]
    no_self_play: bool,
    #[arg(long, default_value = "3,5,0,1")]
    payoffs: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Comma-separated ZD strategies (names or `p1,p2,p3,p4` separated by `;`).
    #[arg(long)]
    audit: String,
    #[arg(long, default_value = "3,5,0,1")]
    payoffs: String,
    /// `svg` or `csv`; defaults to the extension of `--out`, else svg.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Writes through a temporary sibling file and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = dir.join(tmp_name);
    fs::write(&tmp, bytes).map_err(|e| Error::Io(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(bytes: Vec<u8>, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, &bytes),
        None => stdout
            .write_all(&bytes)
            .map_err(|e| Error::Io(e.to_string())),
    }
}

fn load_spec(path: &Path) -> Result<GameSpecDocument> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_game_spec(&text)
}

fn solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let doc = load_spec(&args.spec)?;
    let game = doc.game()?;
    let report = match args.scheme {
        SchemeArg::Nash => SolveReport::nash(&game, equilibria(&game), &pareto_front(&game)),
        SchemeArg::HumanPriority => SolveReport::scheme(&game, &scheme_human_priority(&game)),
        SchemeArg::Social => SolveReport::scheme(&game, &scheme_social_welfare(&game)),
        SchemeArg::Beta => {
            let beta = args
                .beta
                .ok_or_else(|| Error::Parameter("--scheme beta needs --beta".to_string()))?;
            SolveReport::scheme(&game, &scheme_beta_weighted(&game, beta)?)
        }
        SchemeArg::Kantian => {
            let ann = doc
                .annotation()
                .ok_or_else(|| Error::Parameter("spec has no kantian section".to_string()))?;
            SolveReport::scheme(&game, &scheme_kantian(&game, &ann)?)
        }
    };
    let format = args.output.format.map(Format::from).unwrap_or(Format::Json);
    emit(
        write_report(&Report::Solve(report), format)?,
        &args.output.out,
        stdout,
    )
}

fn parse_designation(doc: &GameSpecDocument, text: &str) -> Result<Designation> {
    let mut a = None;
    let mut b = None;
    for item in text.split(',') {
        let (player, label) = item.split_once('=').ok_or_else(|| {
            Error::Parameter(format!("designation `{item}` is not PLAYER=strategy"))
        })?;
        match doc.player(player.trim()) {
            Some(crate::game::Player::A) => a = Some(label.trim().to_string()),
            Some(crate::game::Player::B) => b = Some(label.trim().to_string()),
            None => {
                return Err(Error::Parameter(format!(
                    "unknown player `{}`",
                    player.trim()
                )))
            }
        }
    }
    match (a, b) {
        (Some(a), Some(b)) => Ok(Designation::new(a, b)),
        _ => Err(Error::Parameter(
            "designate one strategy for each player".to_string(),
        )),
    }
}

fn extract(args: &ExtractArgs, stdout: &mut dyn Write) -> Result<()> {
    let doc = load_spec(&args.spec)?;
    let game = doc.game()?;
    let counts = doc
        .observed
        .as_ref()
        .ok_or_else(|| Error::Parameter("spec has no observed section".to_string()))?;
    let observed: MixedProfile = counts.profile_for(&game)?;
    let designation = match &args.designate {
        Some(text) => parse_designation(&doc, text)?,
        None => {
            let d = Designation::trust_default();
            if game.index_of(crate::game::Player::A, &d.a).is_err()
                || game.index_of(crate::game::Player::B, &d.b).is_err()
            {
                return Err(Error::Parameter(
                    "no default designation for this game; pass --designate".to_string(),
                ));
            }
            d
        }
    };
    let estimate = extract_kantian(&game, &observed, &designation)?;
    let consistency =
        if estimate.a.kind == EstimateKind::Point && estimate.b.kind == EstimateKind::Point {
            Some(consistency_check(&game, &estimate, &observed)?)
        } else {
            None
        };
    let report = ExtractionReport {
        players: doc.players.clone(),
        estimate,
        consistency,
    };
    let format = args.output.format.map(Format::from).unwrap_or(Format::Json);
    emit(
        write_report(&Report::Extraction(report), format)?,
        &args.output.out,
        stdout,
    )
}

/// A built-in name or a `p1,p2,p3,p4` literal.
fn resolve_strategy(text: &str, initial: Option<&str>) -> Result<(String, MemoryOneStrategy)> {
    let mut s = if text.contains(',') {
        MemoryOneStrategy::new(parse_strategy_literal(text)?, Move::C)?
    } else {
        builtin_strategy(text)?
    };
    if let Some(m) = initial {
        s.initial = m.parse()?;
    }
    Ok((text.to_string(), s))
}

fn zd(cmd: &ZdCommand, stdout: &mut dyn Write) -> Result<()> {
    match cmd {
        ZdCommand::Construct {
            chi,
            baseline,
            phi,
            payoffs,
            output,
        } => {
            let pd: PdPayoffs = payoffs.parse()?;
            let baseline: Baseline = baseline.parse()?;
            let phi = if phi.trim() != "max" {
                crate::interface::number::parse_exact(phi)
                    .map(|r| crate::interface::number::to_f64(&r))
                    .map_err(Error::Parameter)?
            } else if *chi > 1.0 {
                phi_max(*chi, baseline, &pd)
            } else {
                // let zd_construct report the bad chi
                1.0
            };
            let z = zd_construct(*chi, baseline, phi, &pd)?;
            let format = output.format.map(Format::from).unwrap_or(Format::Json);
            emit(
                write_report(&Report::Construct(z), format)?,
                &output.out,
                stdout,
            )
        }
        ZdCommand::Audit {
            strategy,
            initial,
            payoffs,
            output,
        } => {
            let pd: PdPayoffs = payoffs.parse()?;
            let (name, s) = resolve_strategy(strategy, initial.as_deref())?;
            let report = audit_report(&name, &s, &pd);
            let format = output.format.map(Format::from).unwrap_or(Format::Json);
            emit(
                write_report(&Report::Audit(vec![report]), format)?,
                &output.out,
                stdout,
            )
        }
    }
}

fn tournament(args: &TournamentArgs, stdout: &mut dyn Write) -> Result<()> {
    let contestants: Vec<Contestant> = args
        .strategies
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Contestant::builtin)
        .collect::<Result<_>>()?;
    let options = TournamentOptions {
        noise: args.noise,
        self_play: !args.no_self_play,
        payoffs: args.payoffs.parse()?,
    };
    let t = round_robin(&contestants, args.rounds, args.reps, args.seed, &options)?;
    let format = args.output.format.map(Format::from).unwrap_or(Format::Csv);
    emit(
        write_report(&Report::Tournament(t), format)?,
        &args.output.out,
        stdout,
    )
}

fn plot(args: &PlotArgs, stdout: &mut dyn Write) -> Result<()> {
    let pd: PdPayoffs = args.payoffs.parse()?;
    // `;` separates literals; otherwise commas separate names unless the
    // whole argument is one numeric literal.
    let items: Vec<&str> = if args.audit.contains(';') {
        args.audit.split(';').collect()
    } else if parse_strategy_literal(&args.audit).is_ok() {
        vec![args.audit.as_str()]
    } else {
        args.audit.split(',').collect()
    };
    let mut series = Vec::new();
    for item in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let (name, s) = resolve_strategy(item, None)?;
        let seg = feasible_segment(&s.p, &pd)?;
        series.push(PlotSeries::segment(name, &seg));
    }
    let format = match (&args.format, &args.out) {
        (Some(f), _) => f.parse()?,
        (None, Some(p)) if p.extension().is_some_and(|e| e == "csv") => PlotFormat::Csv,
        _ => PlotFormat::Svg,
    };
    emit(emit_plot_data(&series, format, &pd)?, &args.out, stdout)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve(a, stdout),
        Command::Extract(a) => extract(a, stdout),
        Command::Zd(z) => zd(z, stdout),
        Command::Tournament(a) => tournament(a, stdout),
        Command::Plot(a) => plot(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_numeric() {
                2
            } else {
                1
            }
        }
    }
}
