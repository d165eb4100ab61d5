use std::path::PathBuf;
use std::process::ExitCode;

use biharm_core::config::ExperimentConfig;
use biharm_core::pipeline::{run_pipeline, run_reconstruct, run_simulate, run_table, RunOutcome};
use biharm_core::Error;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

/// Inverse source reconstruction for the biharmonic wave equation from
/// multi-frequency boundary data.
#[derive(Debug, Parser)]
#[command(name = "biharm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate (or reuse cached) measurement files.
    Simulate(Common),
    /// Reconstruct from existing measurement files.
    Reconstruct(Common),
    /// Simulate what is missing, then reconstruct.
    Pipeline(Common),
    /// Error table over noise levels and seeds.
    Table {
        #[command(flatten)]
        common: Common,
        /// Noise levels.
        #[arg(long, value_delimiter = ',', default_value = "0.005,0.05,0.1,0.2")]
        deltas: Vec<f64>,
        /// Seeds per noise level; defaults to the configured seed.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, conflicts_with = "example")]
    config: Option<PathBuf>,
    /// Built-in preset (1, 2 or 3).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
    example: Option<u32>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match (&self.config, self.example) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(id)) => ExperimentConfig::example(id)?,
            (None, None) => return Err(Error::Config("pass --config <file> or --example <1|2|3>".into())),
        };
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(delta) = self.delta {
            cfg.delta = delta;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn outcome_json(cfg: &ExperimentConfig, o: &RunOutcome) -> Value {
    json!({
        "output_dir": cfg.output_dir,
        "errors": o.report.errors,
        "wall_time_s": o.reconstruction.report.wall_time_s,
        "data": o.data,
    })
}

fn run(cli: Cli) -> Result<Value, Error> {
    match cli.command {
        Command::Simulate(c) => Ok(json!({ "data": run_simulate(&c.config()?)? })),
        Command::Reconstruct(c) => {
            let cfg = c.config()?;
            Ok(outcome_json(&cfg, &run_reconstruct(&cfg)?))
        }
        Command::Pipeline(c) => {
            let cfg = c.config()?;
            Ok(outcome_json(&cfg, &run_pipeline(&cfg)?))
        }
        Command::Table { common, deltas, seeds } => {
            let cfg = common.config()?;
            let seeds = if seeds.is_empty() { vec![cfg.seed] } else { seeds };
            let (rows, data) = run_table(&cfg, &deltas, &seeds)?;
            Ok(json!({ "output_dir": cfg.output_dir, "rows": rows, "data": data }))
        }
    }
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.render().to_string().trim_end().to_owned(), 2),
    };
    match run(cli) {
        Ok(v) => {
            if let Value::Object(m) = &v {
                for w in m.get("data").and_then(|d| d.get("warnings")).and_then(Value::as_array).into_iter().flatten() {
                    eprintln!("warning: {}", w.as_str().unwrap_or_default());
                }
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("summary serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.kind(), e.to_string(), 1),
    }
}
