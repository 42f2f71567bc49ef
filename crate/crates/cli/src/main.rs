use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polariton_lab::{init_logging, run, Command, RunOptions};

#[derive(Parser)]
#[command(name = "polariton-lab", version, about = "Surface-polariton dispersion, EIT and slow-light sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Scenario file (INI).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Also write SVG charts.
    #[arg(long, global = true)]
    plot: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory; overrides `[output] directory`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Re-read every written table and compare it with what was computed.
    #[arg(long, global = true)]
    validate: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Complex wavevector, loss and group velocity across the band.
    Dispersion,
    /// Loss against frequency and magnetic loss rate.
    Lossmap,
    /// Probe absorption of the EIT layer against detuning.
    EitSpectrum,
    /// Gaussian probe pulse through the EIT-loaded interface.
    Propagate,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_logging();
    let Some(config) = cli.config else {
        log::error!("event=config error=\"--config FILE is required\"");
        return ExitCode::from(2);
    };
    let cmd = match cli.command {
        Cmd::Dispersion => Command::Dispersion,
        Cmd::Lossmap => Command::Lossmap,
        Cmd::EitSpectrum => Command::EitSpectrum,
        Cmd::Propagate => Command::Propagate,
    };
    let opts = RunOptions { config, out: cli.out, plot: cli.plot, jobs: cli.jobs, validate: cli.validate };
    match run(cmd, &opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("event=exit code={} error=\"{e}\"", e.exit_code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
