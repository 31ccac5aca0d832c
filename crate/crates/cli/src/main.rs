//! Scenario-driven batch runner: parse a scenario file describing rings,
//! ideals, modules, and checks; execute the pipelines; emit a JSON report
//! and a matching process exit status.

mod report;
mod runner;
mod scenario;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "adic", version, about = "exact adic completion/torsion workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write the JSON report.
    Run {
        /// path to the .scn file
        file: PathBuf,
        /// override the default inspection bound
        #[arg(long)]
        bound: Option<u32>,
        /// worker threads for independent checks
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// write the report to this path instead of stdout
        #[arg(long)]
        report: Option<PathBuf>,
        /// include wall times in the report (breaks byte-for-byte
        /// reproducibility)
        #[arg(long)]
        timings: bool,
    },
    /// Run one of the shipped demo scenarios.
    Demo {
        /// one of: mgm, serre, cofinite, wpr
        name: String,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// List the available check kinds.
    ListChecks,
    /// Parse a scenario and print its canonical form.
    Fmt {
        /// path to the .scn file
        file: PathBuf,
    },
}

const DEMO_MGM: &str = include_str!("../scenarios/mgm.scn");
const DEMO_SERRE: &str = include_str!("../scenarios/serre.scn");
const DEMO_COFINITE: &str = include_str!("../scenarios/cofinite.scn");
const DEMO_WPR: &str = include_str!("../scenarios/wpr.scn");

fn demo_text(name: &str) -> Option<&'static str> {
    match name {
        "mgm" => Some(DEMO_MGM),
        "serre" => Some(DEMO_SERRE),
        "cofinite" => Some(DEMO_COFINITE),
        "wpr" => Some(DEMO_WPR),
        _ => None,
    }
}

fn run_text(
    text: &str,
    label: &str,
    bound: Option<u32>,
    jobs: usize,
    report_path: Option<PathBuf>,
    timings: bool,
) -> ExitCode {
    let parsed = match scenario::parse_scenario(text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("scenario error: {}", e);
            return ExitCode::from(3);
        }
    };
    let resolved = match scenario::resolve(parsed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("scenario error: {}", e);
            return ExitCode::from(3);
        }
    };
    let opts = runner::RunOptions { bound_override: bound, jobs, timings };
    let rep = runner::run(&resolved, label, &opts);
    let json = rep.to_json();
    match report_path {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, json + "\n") {
                eprintln!("i/o error writing report {}: {}", p.display(), e);
                return ExitCode::from(3);
            }
            eprintln!(
                "{}: {} passed, {} failed, {} inconclusive -> {}",
                label,
                rep.summary.passed,
                rep.summary.failed,
                rep.summary.inconclusive,
                p.display()
            );
        }
        None => println!("{}", json),
    }
    ExitCode::from(rep.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // usage errors are distinct from check failures and inconclusive
            // runs (exit codes 1 and 2)
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match cli.command {
        Command::Run { file, bound, jobs, report, timings } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("i/o error reading {}: {}", file.display(), e);
                    return ExitCode::from(3);
                }
            };
            let label = file.display().to_string();
            run_text(&text, &label, bound, jobs, report, timings)
        }
        Command::Demo { name, bound, jobs, report, timings } => match demo_text(&name) {
            Some(text) => run_text(text, &name, bound, jobs, report, timings),
            None => {
                eprintln!("unknown demo `{}`; available: mgm, serre, cofinite, wpr", name);
                ExitCode::from(3)
            }
        },
        Command::ListChecks => {
            for (name, desc) in runner::list_checks() {
                println!("{:32} {}", name, desc);
            }
            ExitCode::SUCCESS
        }
        Command::Fmt { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("i/o error reading {}: {}", file.display(), e);
                    return ExitCode::from(3);
                }
            };
            match scenario::parse_scenario(&text) {
                Ok(sc) => {
                    print!("{}", scenario::print_scenario(&sc));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("scenario error: {}", e);
                    ExitCode::from(3)
                }
            }
        }
    }
}
