use clap::{Parser, Subcommand};
use hermlab::cli::{
    self, analyze, default_tol, export_entry, load_spec, random_spec, render, run_search,
    search_exit_code, verify_report, write_atomic, ReportFormat, Suite, EXIT_INVALID, EXIT_OK,
};
use hermlab::search::SearchOptions;
use std::path::PathBuf;
use std::process::ExitCode;

/// Invariant Hermitian geometry toolkit: connections, torsion, curvature,
/// classification predicates, identity verification, and Kaehler-like
/// metric search on Lie coframes.
///
/// The default tolerance is 1e-9; set HERMLAB_TOL or pass --tol to
/// override it.
#[derive(Parser)]
#[command(name = "hermlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a manifold spec file and print the report.
    Inspect {
        path: PathBuf,
        /// Relative tolerance for predicates and identity checks.
        #[arg(long)]
        tol: Option<f64>,
        /// Output format.
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        format: String,
    },
    /// Verify identity suites; exit 0 iff every applicable check passes.
    Verify {
        /// Spec file, or a directory of *.json spec files.
        path: PathBuf,
        #[arg(long, default_value = "all", value_parser = ["all", "structure", "lemma2", "skl", "surface"])]
        suite: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Reference structures bundled with the tool.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Generate a random two-step algebra spec.
    Random {
        #[arg(long)]
        dim: usize,
        /// Number of closed generators (1 <= split < dim).
        #[arg(long)]
        split: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output spec path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Minimize the Kaehler-like residual over metrics on a fixed coframe.
    Search {
        path: PathBuf,
        #[arg(long, default_value_t = 5000)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        residual_tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        step_tol: f64,
        /// Write the found metric as a spec file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the search trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List entry names.
    List,
    /// Run the pipeline on an entry and print the report.
    Show {
        name: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        format: String,
    },
    /// Print (or write) the entry as a spec file.
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_format(s: &str) -> ReportFormat {
    if s == "json" {
        ReportFormat::Json
    } else {
        ReportFormat::Text
    }
}

fn run() -> Result<i32, cli::CliError> {
    let args = Cli::parse();
    match args.command {
        Command::Inspect { path, tol, format } => {
            let tol = tol.unwrap_or_else(default_tol);
            let input = load_spec(&path, tol)?;
            let report = analyze(&input, tol, None)?;
            print!("{}", render(&report, parse_format(&format)));
            Ok(EXIT_OK)
        }
        Command::Verify { path, suite, tol } => {
            let tol = tol.unwrap_or_else(default_tol);
            let suite = Suite::parse(&suite)?;
            let files: Vec<PathBuf> = if path.is_dir() {
                let mut v: Vec<PathBuf> = std::fs::read_dir(&path)
                    .map_err(|e| cli::CliError::Io { path: path.clone(), source: e })?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "json"))
                    .collect();
                v.sort();
                v
            } else {
                vec![path.clone()]
            };
            if files.is_empty() {
                return Err(cli::CliError::Invalid(format!(
                    "{}: no .json spec files found",
                    path.display()
                )));
            }
            let mut worst = EXIT_OK;
            for f in files {
                let input = load_spec(&f, tol)?;
                let report = analyze(&input, tol, None)?;
                let (code, text) = verify_report(&report, suite);
                print!("{text}");
                worst = worst.max(code);
            }
            Ok(worst)
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for name in hermlab::catalog::list() {
                    println!("{name}");
                }
                Ok(EXIT_OK)
            }
            CatalogAction::Show { name, tol, format } => {
                let tol = tol.unwrap_or_else(default_tol);
                let entry = hermlab::catalog::get(&name)
                    .map_err(|e| cli::CliError::Invalid(e.to_string()))?;
                let input = cli::ManifoldInput {
                    name: entry.name.to_string(),
                    algebra: entry.algebra.clone(),
                    metric: entry.metric.clone(),
                };
                let report = analyze(&input, tol, None)?;
                print!("{}", render(&report, parse_format(&format)));
                Ok(EXIT_OK)
            }
            CatalogAction::Export { name, out } => {
                let entry = hermlab::catalog::get(&name)
                    .map_err(|e| cli::CliError::Invalid(e.to_string()))?;
                let text = export_entry(&entry);
                match out {
                    Some(p) => write_atomic(&p, &text)?,
                    None => print!("{text}"),
                }
                Ok(EXIT_OK)
            }
        },
        Command::Random { dim, split, seed, out } => {
            let text = random_spec(dim, split, seed)?;
            write_atomic(&out, &text)?;
            println!("wrote {}", out.display());
            Ok(EXIT_OK)
        }
        Command::Search {
            path,
            max_iter,
            seed,
            residual_tol,
            step_tol,
            out,
            trace,
            tol,
        } => {
            let tol = tol.unwrap_or_else(default_tol);
            let input = load_spec(&path, tol)?;
            let opts = SearchOptions { max_iter, step_tol, residual_tol, seed };
            let outcome = run_search(&input, &opts, tol)?;
            println!(
                "search: {:?} after {} iterations ({} evaluations), residual {:.2e}",
                outcome.trace.status,
                outcome.trace.iterations_run,
                outcome.trace.evaluations,
                outcome.trace.final_residual
            );
            println!(
                "result: skl = {:?}, pluriclosed = {:?}, torsion_parallel = {:?}",
                outcome.report.predicate_value("skl"),
                outcome.report.predicate_value("pluriclosed"),
                outcome.report.predicate_value("torsion_parallel"),
            );
            if let Some(p) = out {
                let spec = cli::export_spec(
                    &outcome.report.input,
                    &input.algebra,
                    &outcome.final_metric,
                );
                write_atomic(&p, &spec)?;
                println!("wrote {}", p.display());
            }
            if let Some(p) = trace {
                let text = serde_json::to_string_pretty(&outcome.trace)
                    .expect("trace serialization cannot fail");
                write_atomic(&p, &text)?;
                println!("wrote {}", p.display());
            }
            Ok(search_exit_code(outcome.trace.status))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
