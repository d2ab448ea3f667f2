use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dqw::{run_scenario, CliError, Command, Format, Overrides, Scenario, EXIT_CONFIG};

/// Exact deformation quantization workbench.
#[derive(Parser, Debug)]
#[command(name = "dqw", version, about)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check associativity, Poisson compatibility, Hermiticity and unitality of the star product.
    Validate(Common),
    /// Build the homomorphism τ into the Weyl algebra and check it.
    BuildTau(Common),
    /// Deform the classical functional and check its unit and classical limit.
    Deform(Common),
    /// Evaluate ω(f*⋆f) on the test set for the undeformed and deformed functionals.
    CheckPos(Common),
    /// Run the commands listed in the scenario.
    Run(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Replace the truncation order K.
    #[arg(long)]
    max_order: Option<u32>,
    /// Replace the seed of the random test set.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn execute(verb: Verb) -> Result<i32, CliError> {
    let (command, common) = match verb {
        Verb::Validate(c) => (Some(Command::Validate), c),
        Verb::BuildTau(c) => (Some(Command::BuildTau), c),
        Verb::Deform(c) => (Some(Command::Deform), c),
        Verb::CheckPos(c) => (Some(Command::CheckPos), c),
        Verb::Run(c) => (None, c),
    };
    let overrides = Overrides { max_order: common.max_order, seed: common.seed };
    let scenario = Scenario::load(&common.scenario)?.with_overrides(overrides);
    let only = command.map(|c| vec![c]);
    let report = run_scenario(&scenario, only.as_deref())?;
    let text = report.render(common.format);
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.verb) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("dqw: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
