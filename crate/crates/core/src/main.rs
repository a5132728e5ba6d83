//! Command-line front end.
//!
//! Exit status: 0 report produced, 1 usage error, 2 parse or validation
//! error, 3 resource cap exceeded. Reports go to stdout, diagnostics to
//! stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use riskcase::case::Lexicon;
use riskcase::kb::Proposition;
use riskcase::report::{render_structured, render_text, run_query, QueryError};
use riskcase::woe::{classify_woe, StudyEvidence};
use riskcase::{AggregationPolicy, EngineError};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "riskcase", version, about = "Qualitative risk assessment by argumentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Count,
    Sum,
    Max,
}

impl From<PolicyArg> for AggregationPolicy {
    fn from(value: PolicyArg) -> Self {
        match value {
            PolicyArg::Count => AggregationPolicy::Count,
            PolicyArg::Sum => AggregationPolicy::Sum,
            PolicyArg::Max => AggregationPolicy::Max,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Query a knowledge base for a proposition and print the risk report
    Query {
        kb_file: PathBuf,
        proposition: String,
        #[arg(long, value_enum, default_value = "count")]
        policy: PolicyArg,
        /// Lexicon config file overriding the default linguistic terms
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Categorize (human, animal) study evidence levels
    Woe { human: String, animal: String },
    /// Parse and validate a knowledge base, printing warnings
    Check { kb_file: PathBuf },
}

fn read_file(path: &PathBuf) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn parse_level(what: &str, name: &str) -> Result<StudyEvidence, u8> {
    StudyEvidence::from_name(name).ok_or_else(|| {
        eprintln!(
            "error: unknown {what} evidence level `{name}` \
             (expected sufficient, limited, inadequate, no_data or no_evidence)"
        );
        EXIT_USAGE
    })
}

fn run(cli: Cli) -> Result<(), u8> {
    match cli.command {
        Command::Query { kb_file, proposition, policy, lexicon, format } => {
            let prop = Proposition::new(&proposition).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_USAGE
            })?;
            let source = read_file(&kb_file)?;
            let lexicon = match lexicon {
                Some(path) => {
                    let text = read_file(&path)?;
                    let (lexicon, warnings) =
                        Lexicon::from_config(&text).map_err(|e| {
                            eprintln!("error: {e}");
                            EXIT_PARSE
                        })?;
                    for warning in warnings {
                        eprintln!("warning: {warning}");
                    }
                    lexicon
                }
                None => Lexicon::default(),
            };
            let report =
                run_query(&source, &prop, policy.into(), &lexicon).map_err(|e| {
                    eprintln!("error: {e}");
                    match e {
                        QueryError::Engine(EngineError::CapExceeded { .. }) => EXIT_CAP,
                        QueryError::Kb(_) => EXIT_PARSE,
                    }
                })?;
            match format {
                FormatArg::Text => print!("{}", render_text(&report)),
                FormatArg::Structured => print!("{}", render_structured(&report)),
            }
            Ok(())
        }
        Command::Woe { human, animal } => {
            let human = parse_level("human", &human)?;
            let animal = parse_level("animal", &animal)?;
            println!("{}", classify_woe(human, animal).name());
            Ok(())
        }
        Command::Check { kb_file } => {
            let source = read_file(&kb_file)?;
            let kb = riskcase::parse_kb(&source).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_PARSE
            })?;
            let warnings = kb.validate();
            for warning in &warnings {
                println!("warning: {warning}");
            }
            println!(
                "ok: {} items, {} warnings",
                kb.items().len(),
                warnings.len()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(EXIT_USAGE)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
