//! Batch driver: one command per experiment, results written to
//! `results.csv`, `report.json` and `plotdata/`.

mod config;
mod error;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use config::RunConfig;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hyperharm", version, about = "Harmonic analysis experiments on hyperbolic space")]
struct Args {
    /// Experiment to run; may instead be named in the config.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(config::EXPERIMENTS))]
    command: Option<String>,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long, env = "HYPERHARM_OUT")]
    out: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    verbose: bool,
}

const EXIT_GATE_FAILED: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn run(args: &Args, name: &mut Option<String>) -> Result<bool, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let experiment = cfg.resolve(args.command.as_deref())?;
    *name = Some(experiment.clone());
    cfg.validate()?;
    let out = args.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("hyperharm-out"));
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let start = Instant::now();
    let outcome = experiments::run(&experiment, &cfg, args.verbose)?;
    output::write_all(&out, &cfg, &outcome)?;
    // Timing lives apart from the byte-identical outputs.
    let timing = serde_json::json!({ "experiment": experiment, "wall_time_s": start.elapsed().as_secs_f64() });
    let path = out.join("timing.json");
    std::fs::write(&path, timing.to_string() + "\n").map_err(|e| CliError::Io(path.display().to_string(), e))?;
    if args.verbose {
        for r in &outcome.rows {
            eprintln!("{} {} {} = {:e} [{}]", r.experiment, r.case, r.quantity, r.value, if r.pass { "ok" } else { "FAIL" });
        }
        eprintln!("{experiment}: {:.1}s", start.elapsed().as_secs_f64());
    }
    Ok(outcome.passed())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut name = None;
    match run(&args, &mut name) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("hyperharm: tolerance gate failed");
            ExitCode::from(EXIT_GATE_FAILED)
        }
        Err(e) => {
            let record = output::error_record(name.as_deref(), &e);
            eprintln!("{record}");
            if let Some(dir) = args.out.as_ref() {
                if std::fs::create_dir_all(dir).is_ok() {
                    let _ = std::fs::write(dir.join("error.json"), record.to_string() + "\n");
                }
            }
            ExitCode::from(EXIT_ERROR)
        }
    }
}
