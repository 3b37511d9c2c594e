use std::path::PathBuf;
use std::process::ExitCode;

use caustica::billiard::{exotic_tangency_locus, ExoticCase};
use caustica::expcli::{exit_code, run_files, Overrides, OUT_DIR_ENV};
use caustica::integrals::canonical_integral;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(version, about = "Run billiard integrability experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario files and write their CSV and SVG outputs.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Replaces every scenario's tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
        out_dir: PathBuf,
    },
    /// List the exotic parabola cases.
    ListCases,
    /// Print the canonical integral of a case.
    PrintIntegral {
        case: String,
        /// Family index for the 2a cases.
        #[arg(long = "N", value_name = "k")]
        n: Option<u32>,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            configs,
            seed,
            samples,
            tol,
            out_dir,
        } => {
            let overrides = Overrides {
                seed,
                samples,
                tolerance: tol,
            };
            let results = run_files(&configs, &overrides, &out_dir);
            for (path, result) in configs.iter().zip(&results) {
                match result {
                    Ok(run) => {
                        println!("{}", run.report.summary());
                        for note in &run.report.notes {
                            println!("  {note}");
                        }
                        println!("  wrote {}", run.csv.display());
                        if let Some(svg) = &run.svg {
                            println!("  wrote {}", svg.display());
                        }
                    }
                    Err(e) => eprintln!("{}: {e}", path.display()),
                }
            }
            ExitCode::from(exit_code(&results) as u8)
        }
        Command::ListCases => {
            for tag in ExoticCase::TAGS {
                let n = tag.starts_with("2a").then_some(1);
                let case = ExoticCase::parse(tag, n).expect("known tag");
                let integral = canonical_integral(case).expect("valid case");
                let family = if n.is_some() { ", family in N >= 1" } else { "" };
                println!(
                    "{tag}\tdegree {}{family}\t{} tangency points",
                    integral.degree(),
                    exotic_tangency_locus(case).len()
                );
            }
            ExitCode::SUCCESS
        }
        Command::PrintIntegral { case, n } => match ExoticCase::parse(&case, n).and_then(canonical_integral) {
            Ok(integral) => {
                println!("{integral}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
    }
}
