use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use dicke_lab::{reproduce_figures, run, write_output, LabError, Mode, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "dicke-lab", version, about = "Steady-state sweeps of the driven Dicke model")]
struct Cli {
    mode: Mode,
    /// JSON run configuration (optional for reproduce-figures).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV file; output directory for reproduce-figures.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Omit the generation-time line and the wall-time column.
    #[arg(long)]
    no_timestamp: bool,
    /// Read drive values as |Ω|/γ (or |Ω_L|/κ) instead of |Ω|/Ω_c.
    #[arg(long)]
    absolute_drive: bool,
}

fn execute(cli: Cli) -> Result<i32, LabError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_path(path)?,
        None if cli.mode == Mode::ReproduceFigures => RunConfig::default(),
        None => return Err(LabError::Config("--config is required for this mode".into())),
    };
    cfg.apply(&Overrides {
        mode: Some(cli.mode),
        out: cli.out,
        threads: cli.threads,
        no_timestamp: cli.no_timestamp,
        absolute_drive: cli.absolute_drive,
    });
    let generated = cfg
        .output
        .timestamp
        .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));

    if cfg.mode()? == Mode::ReproduceFigures {
        let dir = cfg.output.path.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir)?;
        let (fig2, fig3, code) = reproduce_figures(&cfg)?;
        fig2.save(&dir.join("fig2.csv"), cfg.output.json, generated)?;
        fig3.save(&dir.join("fig3.csv"), cfg.output.json, generated)?;
        return Ok(code);
    }
    if cfg.output.json && cfg.output.path.is_none() {
        return Err(LabError::Config("JSON output needs an output path".into()));
    }
    let out = run(&cfg)?;
    write_output(&out, &cfg, generated)?;
    Ok(out.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => {
            eprintln!("dicke-lab: finished with failures (exit {code})");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("dicke-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
