use std::process::ExitCode;

use clap::Parser;
use digraphe::cli::{self, CliConfig};

fn main() -> ExitCode {
    let config = match CliConfig::try_parse() {
        Ok(config) => config,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_USAGE } else { cli::EXIT_OK });
        }
    };
    ExitCode::from(cli::run(config))
}
