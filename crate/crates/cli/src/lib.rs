//! Scenario runner behind the `polariton-lab` binary: reads an INI scenario,
//! runs one of the sweeps on a rayon pool and writes CSV tables (and
//! optionally SVG charts) to the output directory.

pub mod commands;
pub mod config;
pub mod error;
pub mod plot;
pub mod table;

use std::io::Write;
use std::path::PathBuf;

pub use config::Scenario;
pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Dispersion,
    Lossmap,
    EitSpectrum,
    Propagate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Lossmap => "lossmap",
            Command::EitSpectrum => "eit-spectrum",
            Command::Propagate => "propagate",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub plot: bool,
    pub jobs: Option<usize>,
    pub validate: bool,
}

/// `LEVEL key=value ...` lines on stderr. Output is never styled, so
/// `NO_COLOR` is honoured trivially; it also switches off env_logger's own
/// styling in case a format with colour is ever added.
pub fn init_logging() {
    let mut b = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"));
    b.format(|f, record| writeln!(f, "{} {}", record.level(), record.args()));
    if std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()) {
        b.write_style(env_logger::WriteStyle::Never);
    }
    let _ = b.try_init();
}

pub fn run(cmd: Command, opts: &RunOptions) -> Result<(), CliError> {
    let mut scenario = Scenario::load(&opts.config)?;
    if let Some(dir) = &opts.out {
        scenario.output.directory = dir.clone();
    }
    scenario.output.plot |= opts.plot;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs: must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    log::info!(
        "event=start command={} config={} threads={}",
        cmd.name(),
        opts.config.display(),
        pool.current_num_threads()
    );

    let output = match cmd {
        Command::Dispersion => commands::dispersion(&scenario, &pool)?,
        Command::Lossmap => commands::lossmap(&scenario, &pool)?,
        Command::EitSpectrum => commands::eit_spectrum(&scenario, &pool)?,
        Command::Propagate => commands::propagate(&scenario, &pool)?,
    };

    let dir = &scenario.output.directory;
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    for t in &output.tables {
        table::write(t, dir, &scenario.source)?;
        log::info!("event=write file={} rows={}", dir.join(&t.name).display(), t.rows.len());
    }
    for (name, chart) in &output.charts {
        let path = dir.join(name);
        std::fs::write(&path, chart.render()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        log::info!("event=write file={}", path.display());
    }

    if opts.validate {
        let mut diffs = Vec::new();
        for t in &output.tables {
            diffs.extend(table::verify(t, dir, &scenario.source)?);
        }
        for d in &diffs {
            log::error!("event=validate diff=\"{d}\"");
        }
        if !diffs.is_empty() {
            return Err(CliError::Io(format!("{} round-trip differences", diffs.len())));
        }
        log::info!("event=validate tables={} status=ok", output.tables.len());
    }
    Ok(())
}
