use clap::Parser;
use privrep_cli::{emit_report, run_experiment, CliError, ExperimentConfig, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Run a seeded experiment and write its result table as CSV.
///
/// Exit status: 0 when every check passes, 2 when some check fails,
/// 1 on usage or runtime errors.
#[derive(Parser, Debug)]
#[command(name = "privrep", version)]
struct Args {
    /// dp-verify, learn-point, check-drep, check-prep, boost, shrink,
    /// extract, e3sat, sanitize or formulas
    subcommand: String,
    /// File of key=value lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long)]
    jobs: Option<usize>,
    /// Experiment parameter, e.g. --param alpha=0.25
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

fn configure(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::new(args.subcommand.parse::<Subcommand>()?);
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(jobs) = args.jobs {
        cfg.set("jobs", &jobs.to_string())?;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    for p in &args.params {
        cfg.set_assignment(p)?;
    }
    Ok(cfg)
}

fn run(args: &Args) -> Result<bool, CliError> {
    let cfg = configure(args)?;
    let table = run_experiment(&cfg)?;
    match &cfg.out {
        Some(path) => emit_report(&table, path)?,
        None => std::io::stdout().lock().write_all(&table.to_csv()?)?,
    }
    for r in table.summaries() {
        let verdict = match r.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "info",
        };
        let bound = r.bound.map(|b| format!(" (bound {b})")).unwrap_or_default();
        eprintln!("{verdict:>4}  {} {} = {}{bound}", r.experiment, r.metric, r.value);
    }
    Ok(table.all_pass())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("privrep: {e}");
            ExitCode::from(1)
        }
    }
}
