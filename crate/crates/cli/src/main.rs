//! `indep` — compute, check, and certify independent axiomatizations of
//! propositional theories.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 parse or input
//! error, 3 resource limit, 4 certification failure (including entailment
//! preconditions and coverage violations), 5 size error when the merge
//! fallback is disabled.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use indep_core::formula::parse;
use indep_core::genfuzz::{gen_entailed_pair, gen_theory, GenConfig};
use indep_core::interpolation::{interpolate, InterpolantMode, InterpolationError};
use indep_core::oracle::Oracle;
use indep_core::partition::{build_partition, PartitionState};
use indep_core::pipelines::{
    independize, CertifyError, MergeError, PipelineError, PipelineMode, PipelineOptions,
};
use indep_core::starify::{
    check_star, starify, StarCheck, StarCheckError, StarifyError, DEFAULT_STARIFY_CAP,
    DEFAULT_STAR_CHECK_CAP,
};
use indep_core::{Theory, Valuation};

mod report;

const EXIT_IO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_CERTIFY: u8 = 4;
const EXIT_SIZE: u8 = 5;

struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

#[derive(Parser)]
#[command(
    name = "indep",
    version,
    about = "Rewrite propositional theories into equivalent independent axiomatizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Tarski,
    Reznikoff,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InterpolantModeArg {
    Strongest,
    Weakest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FuzzKind {
    Theory,
    Pair,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite the input theory into an equivalent independent one
    Independize(IndependizeArgs),
    /// Certify that one theory is an equivalent independent form of another
    Verify(VerifyArgs),
    /// Compute an interpolant for an entailed formula pair
    Interpolate(InterpolateArgs),
    /// Rewrite the input so symbol coverage controls entailment
    Starify(StarifyArgs),
    /// Check the coverage condition by brute force
    StarCheck(StarCheckArgs),
    /// Dump the symbol partition of the input theory as JSON
    Partition(PartitionArgs),
    /// Generate seeded random theories or entailed pairs
    Fuzz(FuzzArgs),
}

#[derive(clap::Args)]
struct IndependizeArgs {
    /// Theory file: one formula per line, `#` comments
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Reznikoff)]
    mode: ModeArg,
    /// Collapse a finite chain into one conjunction (tarski mode)
    #[arg(long)]
    collapse: bool,
    /// Fail with a size error instead of falling back to the chain route
    #[arg(long)]
    no_fallback: bool,
    /// Re-check the merge hypotheses explicitly
    #[arg(long)]
    paranoid: bool,
    /// Emit the JSON certificate report
    #[arg(long)]
    certify: bool,
    /// Include elapsed wall time in the report (breaks byte-for-byte
    /// reproducibility between runs)
    #[arg(long)]
    timing: bool,
    /// Symbol cap for oracle queries
    #[arg(long, default_value_t = indep_core::oracle::DEFAULT_MAX_VARS)]
    max_vars: usize,
    /// Universe-size cap for the starify stage
    #[arg(long, default_value_t = DEFAULT_STARIFY_CAP)]
    starify_cap: usize,
    /// Output theory file (stdout when omitted); with --certify the
    /// report goes to `<output>.json`
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// The original theory file
    input: PathBuf,
    /// The candidate independent axiomatization file
    candidate: PathBuf,
    #[arg(long, default_value_t = indep_core::oracle::DEFAULT_MAX_VARS)]
    max_vars: usize,
    /// Write the JSON report here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct InterpolateArgs {
    /// Left formula text (the entailing side)
    left: String,
    /// Right formula text (the entailed side)
    right: String,
    #[arg(long, value_enum, default_value_t = InterpolantModeArg::Strongest)]
    mode: InterpolantModeArg,
    #[arg(long, default_value_t = indep_core::oracle::DEFAULT_MAX_VARS)]
    max_vars: usize,
}

#[derive(clap::Args)]
struct StarifyArgs {
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_STARIFY_CAP)]
    starify_cap: usize,
    #[arg(long, default_value_t = indep_core::oracle::DEFAULT_MAX_VARS)]
    max_vars: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct StarCheckArgs {
    input: PathBuf,
    /// Member-count cap; the check enumerates all premise subsets
    #[arg(long, default_value_t = DEFAULT_STAR_CHECK_CAP)]
    check_cap: usize,
    #[arg(long, default_value_t = indep_core::oracle::DEFAULT_MAX_VARS)]
    max_vars: usize,
}

#[derive(clap::Args)]
struct PartitionArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    max_symbols: usize,
    #[arg(long, default_value_t = 6)]
    max_formulas: usize,
    #[arg(long, default_value_t = 3)]
    max_depth: usize,
    #[arg(long, value_enum, default_value_t = FuzzKind::Theory)]
    kind: FuzzKind,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Independize(args) => run_independize(args),
        Command::Verify(args) => run_verify(args),
        Command::Interpolate(args) => run_interpolate(args),
        Command::Starify(args) => run_starify(args),
        Command::StarCheck(args) => run_star_check(args),
        Command::Partition(args) => run_partition(args),
        Command::Fuzz(args) => run_fuzz(args),
    }
}

fn load_theory(path: &Path) -> CliResult<Theory> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    Theory::parse_text(&text).map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", path.display())))
}

/// Writes through a temporary file in the target directory plus a rename,
/// so readers never observe a partial file.
fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io_fail = |e: &dyn std::fmt::Display| fail(EXIT_IO, format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_fail(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| io_fail(&e))?;
    tmp.persist(path).map_err(|e| io_fail(&e))?;
    Ok(())
}

fn emit(output: Option<&Path>, contents: &str) -> CliResult<()> {
    match output {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn report_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".json");
    PathBuf::from(name)
}

fn format_valuation(v: &Valuation) -> String {
    let parts: Vec<String> = v.iter().map(|(s, b)| format!("{s}={b}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn pipeline_failure(e: PipelineError) -> Failure {
    let message = e.to_string();
    let code = match e {
        PipelineError::Oracle(_) => EXIT_RESOURCE,
        PipelineError::Starify(StarifyError::ResourceLimit { .. }) => EXIT_RESOURCE,
        PipelineError::Starify(StarifyError::Oracle(_)) => EXIT_RESOURCE,
        PipelineError::Partition(_) => EXIT_PARSE,
        PipelineError::Merge(MergeError::SizeError { .. }) => EXIT_SIZE,
        PipelineError::Merge(MergeError::Oracle(_)) => EXIT_RESOURCE,
        PipelineError::Merge(_) => EXIT_CERTIFY,
        PipelineError::Certify(CertifyError::Oracle(_)) => EXIT_RESOURCE,
        PipelineError::Certify(_) => EXIT_CERTIFY,
    };
    fail(code, message)
}

fn run_independize(args: IndependizeArgs) -> CliResult<()> {
    let theory = load_theory(&args.input)?;
    let oracle = Oracle::with_max_vars(args.max_vars);
    let options = PipelineOptions {
        collapse: args.collapse,
        fallback: !args.no_fallback,
        paranoid: args.paranoid,
        starify_cap: args.starify_cap,
    };
    let mode = match args.mode {
        ModeArg::Tarski => PipelineMode::Tarski,
        ModeArg::Reznikoff => PipelineMode::Reznikoff,
    };
    let started = Instant::now();
    let result = independize(&oracle, &theory, mode, &options).map_err(pipeline_failure)?;
    let elapsed_ms = args.timing.then(|| started.elapsed().as_millis());

    let theory_text = result.output.to_text();
    if args.certify {
        let mode_name = match mode {
            PipelineMode::Tarski => "tarski",
            PipelineMode::Reznikoff => "reznikoff",
        };
        let run_report = report::build_report(
            mode_name,
            &args.input.display().to_string(),
            &theory,
            &result.output,
            &result.certification,
            result.fallback_used,
            report::Stats {
                oracle_calls: oracle.call_count(),
                symbols: theory.universe().len(),
                elapsed_ms,
            },
        );
        let json = report::to_json(&run_report);
        match &args.output {
            Some(path) => {
                write_atomic(path, &theory_text)?;
                write_atomic(&report_path(path), &json)?;
            }
            None => print!("{json}"),
        }
    } else {
        emit(args.output.as_deref(), &theory_text)?;
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> CliResult<()> {
    let input = load_theory(&args.input)?;
    let candidate = load_theory(&args.candidate)?;
    let oracle = Oracle::with_max_vars(args.max_vars);
    let certification =
        indep_core::pipelines::certify(&oracle, &input, &candidate).map_err(|e| {
            let code = match &e {
                CertifyError::Oracle(_) => EXIT_RESOURCE,
                _ => EXIT_CERTIFY,
            };
            fail(code, e)
        })?;
    let run_report = report::build_report(
        "verify",
        &args.input.display().to_string(),
        &input,
        &candidate,
        &certification,
        false,
        report::Stats {
            oracle_calls: oracle.call_count(),
            symbols: input.universe().len(),
            elapsed_ms: None,
        },
    );
    emit(args.output.as_deref(), &report::to_json(&run_report))
}

fn run_interpolate(args: InterpolateArgs) -> CliResult<()> {
    let left =
        parse(&args.left).map_err(|e| fail(EXIT_PARSE, format!("left formula: {e}")))?;
    let right =
        parse(&args.right).map_err(|e| fail(EXIT_PARSE, format!("right formula: {e}")))?;
    let oracle = Oracle::with_max_vars(args.max_vars);
    let mode = match args.mode {
        InterpolantModeArg::Strongest => InterpolantMode::Strongest,
        InterpolantModeArg::Weakest => InterpolantMode::Weakest,
    };
    let interpolant = interpolate(&oracle, &left, &right, mode).map_err(|e| match e {
        InterpolationError::NotEntailed { ref countermodel } => fail(
            EXIT_CERTIFY,
            format!("{e}; countermodel {}", format_valuation(countermodel)),
        ),
        InterpolationError::Oracle(o) => fail(EXIT_RESOURCE, o),
    })?;
    println!("{}", interpolant.tau);
    Ok(())
}

fn run_starify(args: StarifyArgs) -> CliResult<()> {
    let theory = load_theory(&args.input)?;
    let oracle = Oracle::with_max_vars(args.max_vars);
    let out = starify(&oracle, &theory, args.starify_cap).map_err(|e| match e {
        StarifyError::ResourceLimit { .. } => fail(EXIT_RESOURCE, e),
        StarifyError::Oracle(_) => fail(EXIT_RESOURCE, e),
    })?;
    emit(args.output.as_deref(), &out.to_text())
}

fn run_star_check(args: StarCheckArgs) -> CliResult<()> {
    let theory = load_theory(&args.input)?;
    let oracle = Oracle::with_max_vars(args.max_vars);
    let outcome = check_star(&oracle, &theory, args.check_cap).map_err(|e| match e {
        StarCheckError::ResourceLimit { .. } => fail(EXIT_RESOURCE, e),
        StarCheckError::Oracle(_) => fail(EXIT_RESOURCE, e),
    })?;
    match outcome {
        StarCheck::Ok => {
            println!("ok");
            Ok(())
        }
        StarCheck::Violation(v) => {
            let premises: Vec<String> = v
                .premise_indices
                .iter()
                .zip(&v.premises)
                .map(|(i, f)| format!("[{i}] {f}"))
                .collect();
            let uncovered: Vec<String> = v.uncovered.iter().map(|s| s.to_string()).collect();
            Err(fail(
                EXIT_CERTIFY,
                format!(
                    "coverage violation: member [{}] {} is entailed by {{{}}} which misses {{{}}}",
                    v.index,
                    v.formula,
                    premises.join(", "),
                    uncovered.join(", ")
                ),
            ))
        }
    }
}

#[derive(Serialize)]
struct PartitionDump {
    anchors: Vec<AnchorDump>,
    blocks: Vec<BlockDump>,
    divisors: Vec<DivisorDump>,
}

#[derive(Serialize)]
struct AnchorDump {
    alpha: usize,
    formula: String,
    new_symbols: Vec<String>,
}

#[derive(Serialize)]
struct BlockDump {
    alpha: usize,
    members: Vec<MemberDump>,
}

#[derive(Serialize)]
struct MemberDump {
    index: usize,
    formula: String,
}

#[derive(Serialize)]
struct DivisorDump {
    index: usize,
    formula: String,
    anchors: Vec<usize>,
}

fn partition_dump(state: &PartitionState) -> PartitionDump {
    let anchors = state
        .anchors()
        .iter()
        .enumerate()
        .map(|(alpha, a)| AnchorDump {
            alpha,
            formula: state.formulas()[a.theory_pos].to_string(),
            new_symbols: a.new_symbols.iter().map(|s| s.to_string()).collect(),
        })
        .collect();
    let blocks = state
        .blocks()
        .iter()
        .enumerate()
        .map(|(alpha, block)| BlockDump {
            alpha,
            members: block
                .iter()
                .map(|&index| MemberDump {
                    index,
                    formula: state.formulas()[index].to_string(),
                })
                .collect(),
        })
        .collect();
    let divisors = state
        .formulas()
        .iter()
        .enumerate()
        .map(|(index, f)| DivisorDump {
            index,
            formula: f.to_string(),
            anchors: state.divisors(f),
        })
        .collect();
    PartitionDump {
        anchors,
        blocks,
        divisors,
    }
}

fn run_partition(args: PartitionArgs) -> CliResult<()> {
    let theory = load_theory(&args.input)?;
    let state = build_partition(&theory).map_err(|e| fail(EXIT_PARSE, e))?;
    let dump = partition_dump(&state);
    let mut json = serde_json::to_string_pretty(&dump)
        .expect("partition dump serialization is total");
    json.push('\n');
    emit(args.output.as_deref(), &json)
}

fn run_fuzz(args: FuzzArgs) -> CliResult<()> {
    let cfg = GenConfig {
        seed: args.seed,
        max_symbols: args.max_symbols,
        max_formulas: args.max_formulas,
        max_depth: args.max_depth,
        ..GenConfig::default()
    };
    let text = match args.kind {
        FuzzKind::Theory => gen_theory(&cfg).to_text(),
        FuzzKind::Pair => {
            let (left, right) = gen_entailed_pair(&cfg);
            format!("{left}\n{right}\n")
        }
    };
    emit(args.output.as_deref(), &text)
}
