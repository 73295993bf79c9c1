mod encode;
mod report;
mod schema;
mod tasks;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use report::{run_file, summary_counts, to_json, to_text, Overrides, Report};
use tasks::Verdict;

#[derive(Parser)]
#[command(
    name = "grfit",
    version,
    about = "Exact checks for Fitting invariants, organising matrices and leading-term congruences over p-local group rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Overrides the scenario's prime.
    #[arg(long, global = true)]
    prime: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    report: Format,
    /// Seed for randomised choices; recorded in the report.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (scenarios in a batch, minors enumeration otherwise).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add a timestamp field to reports.
    #[arg(long, global = true)]
    timestamp: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check (ad1)-(ad4) for a complex.
    CheckAdmissible { scenario: PathBuf },
    /// Characteristic element and its e₀-compatibility.
    CharElement { scenario: PathBuf },
    /// Organising matrix, its identity and Fitting memberships.
    Organise { scenario: PathBuf },
    /// Higher Fitting invariant of a presentation.
    Fitting { scenario: PathBuf },
    /// Non-abelian higher special element.
    SpecialElement { scenario: PathBuf },
    /// End-to-end integrality and annihilation pipeline.
    Integrality { scenario: PathBuf },
    /// Leading-term product and its integrality.
    BsdProduct { scenario: PathBuf },
    /// Per-g dihedral congruences.
    DihedralCongruence { scenario: PathBuf },
    /// Run a scenario according to its task field (also accepts a previous report).
    Run { scenario: PathBuf },
    /// Run every *.json scenario in a directory.
    Batch { dir: PathBuf },
}

fn render(v: &Value, f: Format) -> String {
    match f {
        Format::Json => to_json(v),
        Format::Text => to_text(v),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn batch(cli: &Cli, dir: &Path, ov: &Overrides) -> Result<Verdict> {
    let files = scenario_files(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()?;
    let reports: Vec<Report> =
        pool.install(|| files.par_iter().map(|f| run_file(f, None, ov)).collect());
    let verdicts: Vec<Verdict> = reports.iter().map(|r| r.verdict).collect();
    let mut entries = Vec::new();
    for (f, r) in files.iter().zip(&reports) {
        let name = f
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .to_string();
        let mut e = json!({ "file": name, "task": r.value["task"], "verdict": r.verdict.label() });
        if let Some(err) = r.value.get("error") {
            e["error"] = err.clone();
        }
        entries.push(e);
    }
    let summary = json!({ "counts": summary_counts(&verdicts), "scenarios": entries });
    match &cli.out {
        Some(out) => {
            std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
            for (f, r) in files.iter().zip(&reports) {
                let stem = f.file_stem().unwrap_or_default().to_string_lossy();
                std::fs::write(out.join(format!("{stem}.report.json")), to_json(&r.value))?;
            }
            std::fs::write(out.join("summary.json"), to_json(&summary))?;
            print!("{}", render(&summary, cli.report));
        }
        None => print!("{}", render(&summary, cli.report)),
    }
    // Pass < Fail < Inconclusive < Error
    Ok(verdicts.into_iter().max().unwrap_or(Verdict::Pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ov = Overrides {
        prime: cli.prime,
        seed: cli.seed,
        timestamp: cli.timestamp,
    };
    let (scenario, task) = match &cli.command {
        Command::CheckAdmissible { scenario } => (scenario, Some("check-admissible")),
        Command::CharElement { scenario } => (scenario, Some("char-element")),
        Command::Organise { scenario } => (scenario, Some("organise")),
        Command::Fitting { scenario } => (scenario, Some("fitting")),
        Command::SpecialElement { scenario } => (scenario, Some("special-element")),
        Command::Integrality { scenario } => (scenario, Some("integrality")),
        Command::BsdProduct { scenario } => (scenario, Some("bsd-product")),
        Command::DihedralCongruence { scenario } => (scenario, Some("dihedral-congruence")),
        Command::Run { scenario } => (scenario, None),
        Command::Batch { dir } => {
            return match batch(&cli, dir, &ov) {
                Ok(v) => ExitCode::from(v.exit_code() as u8),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(2)
                }
            };
        }
    };
    if cli.jobs > 1 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let r = run_file(scenario, task, &ov);
    if let Some(e) = r.value.get("error").and_then(|e| e.as_str()) {
        eprintln!("error: {e}");
    }
    if let Err(e) = emit(&render(&r.value, cli.report), cli.out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(r.verdict.exit_code() as u8)
}
