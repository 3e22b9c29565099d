use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use tilecoh::apcomplex::Route;
use tilecoh::pipeline::{analyze, AnalysisOptions};
use tilecoh::report::{AnalysisReport, Status};
use tilecoh::substitution::parse_substitution;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "tilecoh", version, about = "Cohomology, eigenvalues and splitting for 1D substitution tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one substitution file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Analyze every `.sub` file in a directory.
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Clone)]
struct Opts {
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    route: RouteArg,
    #[arg(long, default_value_t = 32)]
    periodicity_bound: usize,
    /// Depth of the witness sweep (default 3·dim).
    #[arg(long)]
    verify_depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Treat halted analyses, undecided verdicts and unreadable files as failures.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Bouquet,
    Collared,
}

impl Opts {
    fn analysis(&self) -> AnalysisOptions {
        AnalysisOptions {
            route: match self.route {
                RouteArg::Auto => None,
                RouteArg::Bouquet => Some(Route::Bouquet),
                RouteArg::Collared => Some(Route::Collared),
            },
            periodicity_bound: self.periodicity_bound,
            verify_depth: self.verify_depth,
            seed: self.seed,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { file, opts } => analyze_file(&file, &opts),
        Command::Batch { dir, opts } => batch(&dir, &opts),
    }
}

fn load(path: &Path, opts: &Opts) -> Result<AnalysisReport, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let s = parse_substitution(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(AnalysisReport::from_analysis(&analyze(&s, &opts.analysis())))
}

fn undecided(r: &AnalysisReport) -> bool {
    [&r.seq3, &r.seq1].iter().any(|v| v.as_ref().is_some_and(|v| v.outcome == "undecided"))
}

fn analyze_file(path: &Path, opts: &Opts) -> ExitCode {
    let report = match load(path, opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    if opts.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if !report.checks_passed() {
        for c in report.checks.iter().filter(|c| !c.passed()) {
            eprintln!("invariant check failed: {} ({})", c.name, c.detail);
        }
        return ExitCode::from(EXIT_CHECK_FAILED);
    }
    if opts.strict && (report.status != Status::Ok || undecided(&report)) {
        return ExitCode::from(EXIT_CHECK_FAILED);
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct BatchEntry {
    file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<AnalysisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn batch(dir: &Path, opts: &Opts) -> ExitCode {
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "sub"))
            .collect(),
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    files.sort();
    let results: Vec<(String, Result<AnalysisReport, String>)> = files
        .par_iter()
        .map(|p| {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            (name, load(p, opts))
        })
        .collect();

    if opts.json {
        let entries: Vec<BatchEntry> = results
            .iter()
            .map(|(file, r)| match r {
                Ok(rep) => BatchEntry { file: file.clone(), report: Some(rep.clone()), error: None },
                Err(e) => BatchEntry { file: file.clone(), report: None, error: Some(e.clone()) },
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&entries).expect("batch serializes"));
    } else {
        print!("{}", table(&results));
    }

    let failed = results.iter().any(|(_, r)| r.as_ref().is_ok_and(|r| !r.checks_passed()));
    let errors = results.iter().any(|(_, r)| r.is_err());
    let halted = results.iter().any(|(_, r)| r.as_ref().is_ok_and(|r| r.status != Status::Ok || undecided(r)));
    if failed {
        ExitCode::from(EXIT_CHECK_FAILED)
    } else if opts.strict && errors {
        ExitCode::from(EXIT_INPUT)
    } else if opts.strict && halted {
        ExitCode::from(EXIT_CHECK_FAILED)
    } else {
        ExitCode::SUCCESS
    }
}

fn table(results: &[(String, Result<AnalysisReport, String>)]) -> String {
    let header = ["file", "dilation", "E", "index", "seq3", "seq1", "checks"];
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for (file, r) in results {
        let row = match r {
            Ok(rep) => {
                let cell = |v: &Option<tilecoh::report::VerdictReport>| match v {
                    Some(v) => match &v.certificate_prime {
                        Some(p) => format!("{}({p})", v.outcome),
                        None => v.outcome.clone(),
                    },
                    None => "-".into(),
                };
                vec![
                    file.clone(),
                    rep.pf.as_ref().map_or("-".into(), |p| p.dilation.clone()),
                    match &rep.eigenvalue_group {
                        Some(e) => e.mode.clone(),
                        None => format!("{:?}", rep.status).to_lowercase(),
                    },
                    rep.decomposition.as_ref().and_then(|d| d.index.clone()).unwrap_or_else(|| "-".into()),
                    cell(&rep.seq3),
                    cell(&rep.seq1),
                    if rep.checks_passed() { "pass".into() } else { "FAIL".into() },
                ]
            }
            Err(e) => vec![file.clone(), "error".into(), e.clone(), String::new(), String::new(), String::new(), String::new()],
        };
        rows.push(row);
    }
    let widths: Vec<usize> =
        (0..header.len()).map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in &rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
