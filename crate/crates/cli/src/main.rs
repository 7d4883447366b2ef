use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use p3loci::builders::CaseId;
use p3loci::cf::{census_lines_conics, check_cf, PlaneConfig, SystemId};
use p3loci::kernel::Field;
use p3loci::pipeline::{prime_warning, render_table, run_all, run_case, PipelineReport, RunOptions};
use p3loci::Error;

const EXIT_CERTIFICATE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_BAD_ARGS: u8 = 4;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CaseArg {
    All,
    Segre,
    Delpezzo,
    Castelnuovo,
    Bordiga,
}

impl CaseArg {
    fn case(self) -> Option<CaseId> {
        match self {
            CaseArg::All => None,
            CaseArg::Segre => Some(CaseId::Segre),
            CaseArg::Delpezzo => Some(CaseId::DelPezzo),
            CaseArg::Castelnuovo => Some(CaseId::Castelnuovo),
            CaseArg::Bordiga => Some(CaseId::Bordiga),
        }
    }
}

/// Verify base loci of linear systems of rational threefolds in P^5 over F_p.
#[derive(Debug, Parser)]
#[command(name = "p3loci", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Case to run.
    #[arg(long, value_enum, default_value = "all")]
    case: CaseArg,

    /// Prime modulus of the coefficient field.
    #[arg(long, default_value_t = 32003)]
    prime: u32,

    /// Seed for every general choice.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Also compute the sectional curve and its smoothness.
    #[arg(long)]
    heavy: bool,

    /// Attempts per general choice.
    #[arg(long, default_value_t = 5)]
    retries: usize,

    /// JSON report: a file for one case, a directory of `<case>.json` for all.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Suppress the table.
    #[arg(long)]
    quiet: bool,

    /// Force degenerate choices in the first N builder attempts.
    #[arg(long, default_value_t = 0, hide = true)]
    degenerate_attempts: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a plane configuration (`label mult p0 p1 p2` per line).
    CheckConfig {
        file: PathBuf,
        /// Prime used when the file does not declare one.
        #[arg(long, default_value_t = 32003)]
        prime: u32,
    },
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        Error::BadPrime(_)
        | Error::InvalidArgument(_)
        | Error::UnsupportedConfig(_)
        | Error::Parse { .. }
        | Error::Io(_) => EXIT_BAD_ARGS,
        _ => EXIT_CERTIFICATE,
    }
}

fn write_json(path: &Path, report: &PipelineReport) -> Result<(), String> {
    std::fs::write(path, report.to_json() + "\n").map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: &Cli) -> Result<u8, (u8, String)> {
    let field = Field::new(cli.prime).map_err(|e| (EXIT_BAD_ARGS, e.to_string()))?;
    if let Some(w) = prime_warning(field) {
        eprintln!("warning: {w}");
    }
    let opts = RunOptions {
        field,
        seed: cli.seed,
        retries: cli.retries.max(1),
        heavy: cli.heavy,
        degenerate_attempts: cli.degenerate_attempts,
    };
    let results = match cli.case.case() {
        Some(c) => vec![(c, run_case(c, &opts))],
        None => run_all(&opts),
    };

    let mut code = 0u8;
    let mut reports = Vec::new();
    for (case, r) in results {
        match r {
            Ok(rep) => {
                if !rep.overall_pass {
                    code = code.max(EXIT_CERTIFICATE);
                    for c in rep.certificates.iter().filter(|c| !c.pass) {
                        eprintln!("{case}: certificate {} failed: expected {}, got {}", c.name, c.expected, c.actual);
                    }
                }
                reports.push(rep);
            }
            Err(e) => {
                eprintln!("{case}: {e}");
                code = code.max(exit_for(&e));
            }
        }
    }

    if let Some(path) = &cli.json {
        let io = |e: String| (EXIT_BAD_ARGS, e);
        if cli.case.case().is_some() {
            if let Some(rep) = reports.first() {
                write_json(path, rep).map_err(io)?;
            }
        } else {
            std::fs::create_dir_all(path).map_err(|e| io(format!("{}: {e}", path.display())))?;
            for rep in &reports {
                write_json(&path.join(format!("{}.json", rep.case.id())), rep).map_err(io)?;
            }
        }
    }

    if !cli.quiet && !reports.is_empty() {
        print!("{}", render_table(&reports.iter().collect::<Vec<_>>()));
        let passed = reports.iter().filter(|r| r.overall_pass).count();
        let total = cli.case.case().map_or(CaseId::ALL.len(), |_| 1);
        println!("{passed}/{total} pass");
    }
    Ok(code)
}

fn check_config(file: &Path, prime: u32) -> Result<u8, (u8, String)> {
    let field = Field::new(prime).map_err(|e| (EXIT_BAD_ARGS, e.to_string()))?;
    let text = std::fs::read_to_string(file).map_err(|e| (EXIT_BAD_ARGS, format!("{}: {e}", file.display())))?;
    let config = PlaneConfig::parse(&text, field).map_err(|e| (exit_for(&e), e.to_string()))?;
    let report = check_cf(&config).map_err(|e| (exit_for(&e), e.to_string()))?;
    println!("system {}: {}", report.system, if report.passed { "pass" } else { "fail" });
    for v in &report.violations {
        println!("violation {} witness {}", v.condition, v.witness.join(","));
    }
    for n in &report.notes {
        println!("note: {n}");
    }
    if report.passed && matches!(config.system, SystemId::CF3 | SystemId::CF4) {
        match census_lines_conics(&config) {
            Ok(census) => {
                let kind = if config.system == SystemId::CF3 { "lines" } else { "conics" };
                println!("census: {} {kind} ({census:?})", census.total());
            }
            Err(e) => println!("census: {e}"),
        }
    }
    Ok(if report.passed { 0 } else { EXIT_CERTIFICATE })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_BAD_ARGS } else { 0 });
        }
    };
    let out = match &cli.command {
        Some(Command::CheckConfig { file, prime }) => check_config(file, *prime),
        None => run(&cli),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
