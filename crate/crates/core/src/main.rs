use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use extendlab::corpus::PROBLEMS;
use extendlab::pipeline::{input_error_report, run, ExtensionReport, RunOptions};
use extendlab::problem::{parse_problem, Task};
use extendlab::Error;

/// Decide whether a unitary representation of a normal subgroup extends to the whole group.
#[derive(Parser, Debug)]
#[command(name = "extendlab", version)]
struct Cli {
    /// Problem file (JSON).
    #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
    problem: Option<PathBuf>,

    /// Run every bundled problem and emit a JSON array of reports.
    #[arg(long)]
    corpus: bool,

    /// analyze, extend, stabilize, crosscheck or all (repeatable).
    #[arg(long = "task", value_parser = parse_task)]
    tasks: Vec<Vec<Task>>,

    #[arg(long)]
    tol: Option<f64>,

    #[arg(long)]
    seed: Option<u64>,

    /// Shuffle the coset representatives with this seed.
    #[arg(long)]
    transversal_seed: Option<u64>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    emit: Option<PathBuf>,
}

fn parse_task(s: &str) -> Result<Vec<Task>, String> {
    Task::parse_list(s).ok_or_else(|| format!("unknown task `{s}`"))
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn solve(source: &str, text: &str, opts: &RunOptions) -> ExtensionReport {
    match parse_problem(text) {
        Ok(p) => run(&p, opts),
        Err(e) => input_error_report(source, &e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol < 0.01) {
            eprintln!("error: --tol must lie in (0, 0.01)");
            return ExitCode::from(1);
        }
    }
    let opts = RunOptions {
        tasks: (!cli.tasks.is_empty()).then(|| cli.tasks.concat()),
        tol: cli.tol,
        seed: cli.seed,
        transversal_seed: cli.transversal_seed,
        ..Default::default()
    };

    let (json, code) = if cli.corpus {
        let reports: Vec<ExtensionReport> = PROBLEMS
            .iter()
            .map(|(name, text)| solve(name, text, &opts))
            .collect();
        for r in &reports {
            eprintln!("{}", r.summary());
        }
        let code = reports.iter().map(ExtensionReport::exit_code).max().unwrap_or(0);
        (serde_json::to_string_pretty(&reports), code)
    } else {
        let path = cli.problem.expect("clap enforces a problem path");
        let source = path.display().to_string();
        let report = match std::fs::read_to_string(&path) {
            Ok(text) => solve(&source, &text, &opts),
            Err(e) => input_error_report(
                &source,
                &Error::Input {
                    path: source.clone(),
                    msg: e.to_string(),
                },
            ),
        };
        eprintln!("{}", report.summary());
        let code = report.exit_code();
        (serde_json::to_string_pretty(&report), code)
    };
    let mut json = json.expect("reports serialize");
    json.push('\n');

    match &cli.emit {
        Some(path) => {
            if let Err(e) = write_atomic(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{json}"),
    }
    ExitCode::from(code as u8)
}
