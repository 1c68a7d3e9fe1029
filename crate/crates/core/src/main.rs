use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use discreet_weighing::metrics::revealing_metrics;
use discreet_weighing::report::{parse_verify_input, render_rows, reproduce, RunReport};
use discreet_weighing::search::{search_discreet, SearchOutcome};
use discreet_weighing::strategies::{build_named, STRATEGY_NAMES};
use discreet_weighing::weighmodel::ProblemInstance;
use discreet_weighing::Error;

/// Discreet counterfeit-coin weighing strategies: build, verify, measure.
#[derive(Parser)]
#[command(name = "discreet", version)]
struct Cli {
    /// Cap on worker threads used by searches.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named strategy and evaluate it.
    Construct {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(STRATEGY_NAMES))]
        strategy: String,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        d: usize,
        /// Number of piles, for equal-piles.
        #[arg(long)]
        a: Option<usize>,
    },
    /// Evaluate a plan and placement read from a JSON file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        f: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Revealing factor and coefficient for a number of new possibilities.
    Metrics {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        f: usize,
        #[arg(long = "new")]
        new_possibilities: u128,
    },
    /// Best single-coin guess for a transcript read from a JSON file.
    Guess {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        f: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Exhaustive search for a discreet plan within a weighing bound.
    Search {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        max_weighings: usize,
    },
    /// Recompute the published numbers and compare.
    Reproduce {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        filter: Option<String>,
    },
}

enum Failure {
    /// The input was well formed but did not check out.
    Verification(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))
}

fn read(path: &PathBuf) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn print_report(report: &RunReport, format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => println!("{}", json(report)?),
        Format::Text => print!("{}", report.render_text()),
    }
    if report.verdict.valid {
        Ok(())
    } else {
        Err(Failure::Verification("the transcript is not a valid proof".into()))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Construct { strategy, t, f, d, a } => {
            let bundle = build_named(&strategy, &ProblemInstance::new(t, f, d)?, a)?;
            print_report(&RunReport::from_bundle(&bundle)?, cli.format)
        }
        Command::Verify { input, f, d } => {
            let input = parse_verify_input(&read(&input)?)?;
            print_report(&input.evaluate(f, d)?, cli.format)
        }
        Command::Metrics { t, f, new_possibilities } => {
            let m = revealing_metrics(t, f, new_possibilities)?;
            match cli.format {
                Format::Json => println!("{}", json(&m)?),
                Format::Text => println!("X {} ({})  R {} ({})", m.factor_x, m.x_display(), m.coefficient_r, m.r_display()),
            }
            Ok(())
        }
        Command::Guess { input, f, d } => {
            let input = parse_verify_input(&read(&input)?)?;
            let report = input.evaluate(f, d)?;
            let guess = report
                .guess
                .ok_or_else(|| Failure::Verification("no set of f fakes fits the transcript".into()))?;
            match cli.format {
                Format::Json => println!("{}", json(&guess)?),
                Format::Text => {
                    println!("uniform: coin {} with {}", guess.uniform.coin, guess.uniform.prob);
                    if let Some(m) = &guess.minimax {
                        println!("minimax: {}", m.value);
                    }
                }
            }
            Ok(())
        }
        Command::Search { t, f, d, max_weighings } => {
            let outcome = search_discreet(t, f, d, max_weighings)?;
            eprintln!("note: only plans of at most {max_weighings} weighings were searched");
            match outcome {
                SearchOutcome::Found(w) => println!("{}", json(&w.bundle)?),
                SearchOutcome::Exhausted { bound } => {
                    println!("{}", json(&serde_json::json!({ "exhausted": true, "bound": bound }))?)
                }
            }
            Ok(())
        }
        Command::Reproduce { json: as_json, filter } => {
            let rows = reproduce(filter.as_deref())?;
            if as_json {
                println!("{}", json(&rows)?);
            } else {
                print!("{}", render_rows(&rows));
            }
            match rows.iter().filter(|r| !r.pass).count() {
                0 => Ok(()),
                n => Err(Failure::Verification(format!("{n} rows do not match"))),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
