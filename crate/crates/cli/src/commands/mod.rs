pub mod evolve;
pub mod figure;
pub mod times;
pub mod validate;

use std::io::Write;

use crate::cli::{Cli, Command};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Table;

/// Runs one subcommand on a resolved configuration and returns its table.
/// A failed validation still returns the table, alongside the error.
pub fn execute(command: &Command, cfg: &RunConfig) -> (Option<Table>, Option<CliError>) {
    let result = match command {
        Command::Times => times::times_table(cfg),
        Command::Figure { which } => figure::figure_table(cfg, *which),
        Command::Evolve => evolve::run_evolve(cfg).map(|r| r.table()),
        Command::Validate => {
            return match validate::run_checks(cfg) {
                Ok(checks) => {
                    let failed = checks.iter().filter(|c| !c.passed()).count();
                    let err = (failed > 0).then_some(CliError::ValidationFailed {
                        failed,
                        total: checks.len(),
                    });
                    (Some(validate::checks_table(&checks)), err)
                }
                Err(e) => (None, Some(e)),
            };
        }
    };
    match result {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e)),
    }
}

pub fn write_output(table: &Table, cfg: &RunConfig) -> Result<(), CliError> {
    let text = table.render(cfg.output.format);
    match &cfg.output.path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write output {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Full command-line run: resolve the configuration, size the thread
/// pool, compute, write.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = cli.options.resolve()?;
    let threads = cli.options.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    let (table, err) = pool.install(|| execute(&cli.command, &cfg));
    if let Some(t) = table {
        write_output(&t, &cfg)?;
    }
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
