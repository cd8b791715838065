use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pps_cli::output::emit;
use pps_cli::{execute, CliError, Kind, Overrides, Scenario, EXIT_PROPERTY_FAILURE};

/// Uncertainty relations for pre- and post-selected systems.
#[derive(Parser)]
#[command(name = "pps", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Standard versus post-selected bounds for sigma_x, sigma_y (CSV)
    Fig1(Common),
    /// OTOC modulus against baseline and post-selected bounds (CSV)
    Fig2(Common),
    /// Common zero-uncertainty post-selection example (JSON)
    Obs2(Common),
    /// Purity detection on random pure and mixed states (JSON)
    PurityDemo(Common),
    /// Seeded sweep over every library invariant (JSON)
    Verify(Common),
    /// Optimise the post-selection for a named objective (JSON)
    Search(Common),
    /// Evaluate one relation on literal inputs (JSON)
    Eval(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file; defaults apply when omitted
    #[arg(long, value_name = "FILE")]
    scenario: Option<PathBuf>,
    /// Output path; stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    #[arg(long, value_name = "X")]
    tolerance: Option<f64>,
    /// Objective name for `search`
    #[arg(long, value_name = "NAME")]
    objective: Option<String>,
    /// Run the sweep against a deliberately broken relation
    #[arg(long, hide = true)]
    inject_fault: bool,
}

impl Command {
    fn split(self) -> (Kind, Common) {
        match self {
            Command::Fig1(c) => (Kind::Fig1, c),
            Command::Fig2(c) => (Kind::Fig2, c),
            Command::Obs2(c) => (Kind::Obs2, c),
            Command::PurityDemo(c) => (Kind::PurityDemo, c),
            Command::Verify(c) => (Kind::Verify, c),
            Command::Search(c) => (Kind::Search, c),
            Command::Eval(c) => (Kind::Eval, c),
        }
    }
}

fn load(kind: Kind, path: Option<&Path>) -> Result<Scenario, CliError> {
    let Some(path) = path else {
        return Ok(Scenario::default_for(kind));
    };
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })?;
    let scenario = Scenario::from_json(&text)?;
    if scenario.kind() != kind {
        return Err(CliError::scenario(format!(
            "scenario kind `{}` does not match subcommand `{kind}`",
            scenario.kind()
        )));
    }
    Ok(scenario)
}

fn run(kind: Kind, c: Common) -> Result<bool, CliError> {
    let mut scenario = load(kind, c.scenario.as_deref())?;
    Overrides {
        out: c.out,
        seed: c.seed,
        samples: c.samples,
        tolerance: c.tolerance,
        objective: c.objective,
        inject_fault: c.inject_fault,
    }
    .apply(&mut scenario)?;
    let outcome = execute(&scenario)?;
    emit(&outcome.text, scenario.out().map(PathBuf::as_path))?;
    for f in &outcome.failures {
        eprintln!("FAIL: {f}");
    }
    Ok(outcome.success)
}

fn main() -> ExitCode {
    let (kind, common) = Cli::parse().command.split();
    match run(kind, common) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_PROPERTY_FAILURE as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
