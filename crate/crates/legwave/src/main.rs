use std::io;
use std::process::ExitCode;

use clap::Parser;
use legwave::{run, RunConfig, EXIT_OK, EXIT_USAGE};

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let stdout = io::stdout();
    match run(&cfg, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
