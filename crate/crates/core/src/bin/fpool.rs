use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fpool::experiments::{
    cmd_bench, cmd_consistency, cmd_demo1d, cmd_oddpad, cmd_pool_image, cmd_transitivity, ExperimentConfig,
};

/// Frequency-domain pooling experiments. Reports are CSV with a `# key=value`
/// header; exit codes: 2 configuration, 3 I/O, 4 numerical contract.
#[derive(Parser)]
#[command(name = "fpool", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pool/upsample/shift curves for F-pooling and the baselines.
    Demo1d(ExperimentConfig),
    /// Equivalence error with and without odd padding.
    Oddpad(ExperimentConfig),
    /// Shift-equivalence of stacked poolings.
    Transitivity(ExperimentConfig),
    /// Pool a PGM/PPM image.
    Pool(ExperimentConfig),
    /// Toy classifier consistency under shifts.
    Consistency(ExperimentConfig),
    /// Dense versus FFT F-pooling timings.
    Bench(ExperimentConfig),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, run): (&ExperimentConfig, fn(&ExperimentConfig) -> fpool::Result<_>) = match &cli.command {
        Command::Demo1d(c) => (c, cmd_demo1d),
        Command::Oddpad(c) => (c, cmd_oddpad),
        Command::Transitivity(c) => (c, cmd_transitivity),
        Command::Pool(c) => (c, cmd_pool_image),
        Command::Consistency(c) => (c, cmd_consistency),
        Command::Bench(c) => (c, cmd_bench),
    };
    // `pool` writes the image to --output, so its summary goes to stdout
    let report_path = match cli.command {
        Command::Pool(_) => None,
        _ => cfg.output.as_deref(),
    };
    match run(cfg).and_then(|report| report.emit(report_path)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fpool: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
