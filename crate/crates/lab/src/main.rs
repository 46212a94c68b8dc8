use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use composite_core::mode_dist::CompositeKind;
use composite_lab::sweep::{self, OutputFormat, SweepConfig};
use composite_lab::{demo, formats, max_dim_from_env, verify};

#[derive(Parser)]
#[command(name = "composite-lab", version, about = "Composite-particle algebra laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the composite relations and expectation values against the Fock-space oracle.
    VerifyAlgebra {
        #[arg(long)]
        seed: u64,
        /// Comma-separated sizes, e.g. `2x2,3x3`.
        #[arg(long, value_parser = verify::parse_sizes)]
        sizes: std::vec::Vec<(usize, usize)>,
        /// Flip the sign of theta in the analytic relation (the suite must fail).
        #[arg(long, hide = true)]
        corrupt_theta: bool,
    },
    /// Tabulate the Gaussian deviation expectation over entanglement ratios.
    DeviationScan {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Comma-separated ratios gamma^2 / (alpha beta) in [0, 1].
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        ratios: Vec<f64>,
        /// Comma-separated kinds: BB, FF.
        #[arg(long, value_delimiter = ',', default_value = "BB,FF", value_parser = parse_kind)]
        kinds: Vec<CompositeKind>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Decide preparability of a scenario in both formalisms.
    PauliDemo {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn parse_kind(s: &str) -> Result<CompositeKind, String> {
    match s.trim().to_ascii_uppercase().as_str() {
        "BB" => Ok(CompositeKind::BB),
        "FF" => Ok(CompositeKind::FF),
        "FB" => Ok(CompositeKind::FB),
        other => Err(format!("unknown kind `{other}`, expected BB or FF")),
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::VerifyAlgebra {
            seed,
            sizes,
            corrupt_theta,
        } => {
            let config = verify::VerifyConfig {
                seed,
                sizes,
                corrupt_theta,
                dim_limit: max_dim_from_env()?,
            };
            let report = verify::run_verify(&config)?;
            print!("{}", report.render());
            let passed = report.passed();
            println!("status: {}", if passed { "PASS" } else { "FAIL" });
            Ok(passed)
        }
        Command::DeviationScan {
            alpha,
            beta,
            ratios,
            kinds,
            out,
            format,
        } => {
            let config = SweepConfig {
                alpha,
                beta,
                ratios,
                kinds,
            };
            let report = sweep::run_sweep(&config)?;
            let format = match format {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            };
            let text = sweep::render(&report, format);
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            if !report.all_checks_passed {
                eprintln!("status: FAIL (closed form and integral disagree on at least one row)");
            }
            Ok(report.all_checks_passed)
        }
        Command::PauliDemo { scenario } => {
            let parsed = formats::read_scenario(&scenario)?;
            let report = demo::run_demo(&parsed)?;
            print!("{}", demo::to_json(&report));
            Ok(report.agreement)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
